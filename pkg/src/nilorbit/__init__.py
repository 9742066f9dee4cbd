"""nilorbit: exact character theory of finite nilpotent groups.

Kirillov's orbit method for Lazard groups Exp(g) of finite nilpotent Lie
rings of class < p, with an independent Dixon-Burnside character-table
oracle, polarizations and monomial representations, base change across
finite-field towers, and the concrete families (fake Heisenberg groups,
algebra groups, unipotent symplectic groups, USp4).
"""

__version__ = "0.1.0"
