"""facred: factored problems, their count-preserving reductions, the
good-low-degree-polynomial worst-case-to-average-case framework, and the
companion counting algorithms, all at desk scale and oracle-checked."""

__version__ = "0.1.0"
