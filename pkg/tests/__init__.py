"""
netee test suite
"""

__version__ = "0.1.0"
