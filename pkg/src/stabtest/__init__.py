"""Mixed-state tolerant stabilizer testing: exact bias, shot simulation and checks."""

__version__ = "0.1.0"
