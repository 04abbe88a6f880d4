"""
Initialization file for scenarios module
"""
