"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

The numba backend is used when numba imports cleanly and the environment
variable ``RELAYRATE_DISABLE_JIT`` is unset or ``0``. Both backends expose
the same functions with the same semantics; the test suite checks them
against each other.
"""

import os

from . import _numpy as numpy_backend

numba_backend = None
if os.environ.get("RELAYRATE_DISABLE_JIT", "0").strip().lower() in ("", "0", "false", "no"):
    try:
        from . import _numba as numba_backend
    except ImportError:  # pragma: no cover - depends on environment
        numba_backend = None

backend = numba_backend if numba_backend is not None else numpy_backend
BACKEND_NAME = "numba" if backend is numba_backend else "numpy"

DENSE_CAP = numpy_backend.DENSE_CAP
marginal_entropy = backend.marginal_entropy
subset_entropies = backend.subset_entropies
subset_sum = backend.subset_sum
subset_mobius = backend.subset_mobius
atoms_from_entropies = backend.atoms_from_entropies
pivot = backend.pivot
basic_solutions = backend.basic_solutions

__all__ = [
    "BACKEND_NAME",
    "DENSE_CAP",
    "atoms_from_entropies",
    "backend",
    "basic_solutions",
    "marginal_entropy",
    "numba_backend",
    "numpy_backend",
    "pivot",
    "subset_entropies",
    "subset_mobius",
    "subset_sum",
]
