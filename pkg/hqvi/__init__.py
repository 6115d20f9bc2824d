"""
hqvi: virtual intersection numbers on Hyperquot schemes of curves.
"""

__version__ = "1.0.0"
