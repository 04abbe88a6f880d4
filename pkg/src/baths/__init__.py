"""
Initialization file for baths module
"""
