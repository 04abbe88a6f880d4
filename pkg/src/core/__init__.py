"""
Operators, battery models, thermometry, analytics and dynamics
"""
