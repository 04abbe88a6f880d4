"""
Quantum thermal machines driven by a finite quantum battery
"""
