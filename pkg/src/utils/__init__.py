"""
Configuration, logging, errors and table output helpers
"""
