"""Select the kernel backend at import time.

The compiled ``_ckernel`` extension is used when it was built; otherwise, or
when the environment variable ``ABCLLL_PURE_PYTHON`` is set to a non-empty
value other than ``0``, the pure-Python ``_pykernel`` is used.
"""

from __future__ import annotations

import os

from abclll import _pykernel

if os.environ.get("ABCLLL_PURE_PYTHON", "0") not in ("", "0"):
    _impl = _pykernel
else:
    try:
        from abclll import _ckernel as _impl
    except ImportError:  # extension not built
        _impl = _pykernel

BACKEND: str = _impl.BACKEND
is_prime_u64 = _impl.is_prime_u64
factor_u64 = _impl.factor_u64
rho_brent = _impl.rho_brent
screen_candidates = _impl.screen_candidates

U64_LIMIT = _pykernel.U64_LIMIT
