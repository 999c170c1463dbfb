"""Hausdorff operators on the hyperbolic upper half-plane.

Modules: ``geometry`` (points, balls, distance, area), ``sl2`` (the matrix
group, its action, Iwasawa coordinates, Haar integration), ``operators``
(kernels and rotation-averaging operators), ``norms`` (Lp norms and bound
checks), ``atoms`` (Hardy-space atoms) and ``cli``.
"""

__version__ = "0.1.0"
