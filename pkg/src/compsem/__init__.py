"""Finite-model engine for first-order logic with function symbols.

Formula and term denotations are computed two ways: by direct satisfaction
(:mod:`compsem.direct`) and compositionally through relation algebra
(:mod:`compsem.compositional`).  :mod:`compsem.audit` checks the algebraic
identities relating the two on exhaustive and seeded random small instances.
"""

__version__ = "0.1.0"
