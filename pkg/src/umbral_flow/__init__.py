"""Exact computer algebra for flows on truncated power series over F_q((1/t)).

Arithmetic lives in :mod:`umbral_flow.fq` (finite fields, polynomials),
:mod:`umbral_flow.laurent` (precision-tracked Laurent series) and
:mod:`umbral_flow.series` (truncated power series, additive series).
Carlitz-module quantities are in :mod:`umbral_flow.carlitz`; umbral maps and
flow operators in :mod:`umbral_flow.umbral`; additive isomorphisms, dual
maps and the verification checks in :mod:`umbral_flow.duality`.  The CLI
entry point is ``umbral-flow`` (:mod:`umbral_flow.cli`).
"""

from .fq import FieldCtx, FqElem, PolyA, field
from .laurent import INF, LaurentF

__all__ = ["FieldCtx", "FqElem", "PolyA", "field", "LaurentF", "INF"]

__version__ = "0.1.0"
