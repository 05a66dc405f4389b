"""sao-lab: a simulation laboratory for the stochastic Airy operator.

Sample its eigenvalue point process, evaluate semigroup traces spectrally
and by Feynman-Kac path integrals, estimate the trace covariances that
drive number rigidity, and reconstruct window counts from outside
configurations.
"""

__version__ = "0.1.0"

from .kernels import BACKEND as KERNEL_BACKEND

__all__ = ["KERNEL_BACKEND", "__version__"]
