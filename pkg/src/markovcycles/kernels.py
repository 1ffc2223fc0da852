"""Backend selection for the numeric hot loops.

The compiled extension is preferred when importable; set
MARKOV_CYCLES_KERNELS=python (or =compiled) to force a backend, e.g. for
the benchmark in benchmarks/bench_kernels.py.
"""

from __future__ import annotations

import os

_requested = os.environ.get("MARKOV_CYCLES_KERNELS", "").strip().lower()

if _requested in ("", "c", "compiled"):
    try:
        from . import _kernels as _impl

        BACKEND = "compiled"
    except ImportError:
        if _requested:
            raise
        from . import _kernels_py as _impl

        BACKEND = "python"
elif _requested in ("py", "python"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    raise RuntimeError(f"unknown MARKOV_CYCLES_KERNELS value {_requested!r}")

pole_pair_sums = _impl.pole_pair_sums
eisenstein_pair = _impl.eisenstein_pair
