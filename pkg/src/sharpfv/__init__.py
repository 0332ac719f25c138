"""Finite-volume transport schemes with sharp interfaces.

Submodules
----------
core1d          grids, profiles, exact cell averages, norms
linear_schemes  (p, k) upwind-biased linear stencils and their stability
limited         flux limiters and the limited downwind scheme
glimm           random choice transport
levelset        half level set of the upwind modified equation
mesh2d          triangular meshes and transverse cell splitting
vofire          multidimensional upwind/anti-diffusive transport on triangles
twofluid        two-component Lagrange-remap solver
harness         experiment configs, runs and reports
"""

__version__ = "0.1.0"

from .errors import CFLError, ConfigError, InvariantViolation, VacuumError  # noqa: F401
