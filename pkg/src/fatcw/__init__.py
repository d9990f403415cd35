"""Numerical toolkit for fat CW complexes and smooth handles."""

from .kernels import KernelContext, SmoothingParams, default_context, ell, s_func, p_a

__all__ = ["KernelContext", "SmoothingParams", "default_context", "ell", "s_func", "p_a"]
__version__ = "0.1.0"
