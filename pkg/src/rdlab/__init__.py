"""Numerical laboratory for relativistic wave mechanics.

Dirac-representation spinor algebra, momentum-space wave packets in the Dirac
and Foldy-Wouthuysen pictures, position operators and localized states,
probability/current densities, and Lorentz-frame consistency experiments.

This root module stays import-light (no submodule re-exports): the command-line
entry point must set threading environment variables before numpy is first
imported, so importing :mod:`rdlab` must not pull in the numerical stack.
"""
from __future__ import annotations

__version__ = "0.1.0"
