"""Range sums of polynomials over prime fields: constructions, exhaustive
search up to affine equivalence, and exact character-sum audits."""

__version__ = "0.1.0"
