"""Select the compiled sign kernels when available, else the pure-Python ones.

Set ``HILBEXT_PURE=1`` to force the fallback.
"""

import os

from hilbext import _pykernels as python_backend

compiled_backend = None
if os.environ.get("HILBEXT_PURE", "") not in ("1", "true", "yes"):
    try:
        from hilbext import _speedups as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend
BACKEND_NAME = "cython" if compiled_backend is not None else "python"

perm_sign = backend.perm_sign
koszul_sign = backend.koszul_sign
eps_sigma_mask = backend.eps_sigma_mask
eps_m_mask = backend.eps_m_mask
image_mask = backend.image_mask
d_squared_violations = backend.d_squared_violations
equivariance_violations = backend.equivariance_violations
