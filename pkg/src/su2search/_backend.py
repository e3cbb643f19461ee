"""Select the compiled kernels when available, else the pure-Python ones.

Set ``SU2SEARCH_PURE_PYTHON=1`` to force the fallback. Every wrapper also takes
``impl``, a name from ``IMPLEMENTATIONS`` or a module, to pin one explicitly.
"""

import os

import numpy as np

from . import _pykernels

if os.environ.get("SU2SEARCH_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.BACKEND
IMPLEMENTATIONS = {"python": _pykernels}
try:
    from . import _ckernels

    IMPLEMENTATIONS["cython"] = _ckernels
except ImportError:
    pass


def _pick(impl):
    if impl is None:
        return _impl
    if isinstance(impl, str):
        return IMPLEMENTATIONS[impl]
    return impl


def power2(g, m, impl=None):
    """Return ``g**m`` by ``m`` successive 2x2 products."""
    impl = _pick(impl)
    out = np.empty((2, 2), dtype=np.complex128)
    impl.power2(np.ascontiguousarray(g, dtype=np.complex128), int(m), out)
    return out


def apply_power2_batch(gs, vs, m, impl=None):
    """Apply ``gs[i]**m`` to ``vs[i]`` for every i, one product at a time."""
    impl = _pick(impl)
    gs = np.ascontiguousarray(gs, dtype=np.complex128)
    vs = np.ascontiguousarray(vs, dtype=np.complex128)
    out = np.empty_like(vs)
    impl.apply_power2_batch(gs, vs, int(m), out)
    return out


def fwht(v, impl=None):
    """Normalized Walsh-Hadamard transform of a copy of ``v``."""
    impl = _pick(impl)
    v = np.array(v, dtype=np.complex128, copy=True)
    impl.fwht(v)
    return v


def walsh_search(v, tau, eta, e_phi, e_theta, m, impl=None):
    """Run ``m`` kernel steps with U = Walsh-Hadamard on a copy of ``v``."""
    impl = _pick(impl)
    v = np.array(v, dtype=np.complex128, copy=True)
    impl.walsh_search(v, int(tau), int(eta), complex(e_phi), complex(e_theta), int(m))
    return v
