"""Kernel backend selection.

The hot evaluation loops live either in the compiled extension
(``soddy._kernels._fast``, built from Cython) or in the pure-Python
reference module (``soddy._kernels._ref``).  The compiled backend is
preferred when importable; set ``SODDY_KERNELS=python`` or
``SODDY_KERNELS=cython`` to force a choice.  Both implement the same
operations in the same order, so results are bit-identical.
"""

import os

_choice = os.environ.get("SODDY_KERNELS", "").strip().lower()

if _choice == "python":
    from . import _ref as _impl
    BACKEND = "python"
elif _choice == "cython":
    from . import _fast as _impl  # type: ignore[no-redef]
    BACKEND = "cython"
else:
    try:
        from . import _fast as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        from . import _ref as _impl  # type: ignore[no-redef]
        BACKEND = "python"

# equation kind codes (stable across backends; used by the system compiler)
TRIANGLE = 0
EDGE = 1
VERTEX = 2
HOLONOMY = 3
PIN = 4
RATIO = 5
VERTEX_ARG = 6
HOLONOMY_ARG = 7

product_im = _impl.product_im
product_im_grad = _impl.product_im_grad
angle_theta_sum = _impl.angle_theta_sum
system_residuals = _impl.system_residuals
system_jacobian_data = _impl.system_jacobian_data
flower_angle = _impl.flower_angle
flower_angle_sum = _impl.flower_angle_sum
solve_flower_radius = _impl.solve_flower_radius
