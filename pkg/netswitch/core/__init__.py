"""
Core functionality module for NetSwitch
Contains linear algebra, averaging, linear programming, switching,
sparsity, design, scenario and file operations
"""
