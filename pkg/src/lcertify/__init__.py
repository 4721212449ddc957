"""Certified bounds and evaluation for Artin-type and Selberg-class L-functions."""

from importlib import resources

from .ball import Ball
from .lfunc_model import LFunctionDescriptor, load_descriptor

__version__ = "0.1.0"


def bundled_descriptor(name: str) -> LFunctionDescriptor:
    """Load one of the shipped descriptors (zeta, zeta_artin, dirichlet_mod3)."""
    path = resources.files("lcertify") / "data" / f"{name}.json"
    with resources.as_file(path) as p:
        return load_descriptor(p)


__all__ = ["Ball", "LFunctionDescriptor", "load_descriptor", "bundled_descriptor"]
