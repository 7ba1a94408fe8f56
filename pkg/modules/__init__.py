"""
quiverhall: exact Hall-algebra computations for Dynkin quivers over prime fields.
"""

__version__ = "0.3"
