"""
NetSwitch - Network resilience through periodic switching
Main entry point for the command line
"""

import os
import sys

# Ensure the package is importable from a source checkout
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from netswitch.app import NetSwitchApp

if __name__ == "__main__":
    app = NetSwitchApp()
    sys.exit(app.start())
