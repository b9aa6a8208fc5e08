"""
dipcheck - decides differential privacy of DiP automata
"""

__version__ = "0.1.0"
