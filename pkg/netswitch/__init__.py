"""
NetSwitch - Network resilience through periodic switching
between commuting topologies
"""

__version__ = "1.0.0"
