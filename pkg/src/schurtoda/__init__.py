"""Deformed Schur-measure kernels, Fredholm tau-functions, and a truncated
semi-infinite wedge to check them against."""

from .fredholm import TauValue, gap_probability, tau_conjugated, tau_n
from .kernel import KernelMatrix, SigmaWeight, kernel_entry, kernel_matrix
from .partitions import HalfInt, Partition, enumerate_partitions
from .symfun import ParamSeq, schur_value, skew_schur_value, z_norm

__all__ = [
    "HalfInt",
    "KernelMatrix",
    "ParamSeq",
    "Partition",
    "SigmaWeight",
    "TauValue",
    "enumerate_partitions",
    "gap_probability",
    "kernel_entry",
    "kernel_matrix",
    "schur_value",
    "skew_schur_value",
    "tau_conjugated",
    "tau_n",
    "z_norm",
]

__version__ = "0.1.0"
