"""
Utility functions for NetSwitch
"""
