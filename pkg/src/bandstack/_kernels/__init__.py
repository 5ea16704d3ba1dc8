"""Hot-kernel lane selection: compiled extension when available, numpy otherwise.

The compiled lane (`_scan_cy`, built from Cython at install time) and the
numpy lane (`_scan_py`) implement the same two kernels with bitwise-identical
results; only speed differs. Selection happens once at import:

  * the extension is used when it imported successfully,
  * unless BANDSTACK_PURE is set in the environment, which forces the numpy
    lane (useful for benchmarking and for debugging a suspected build issue).

Both lane modules stay importable directly so the benchmark can time them
side by side.
"""

from __future__ import annotations

import os

from bandstack._kernels import _scan_py

try:
    from bandstack._kernels import _scan_cy
except ImportError:
    _scan_cy = None

if _scan_cy is not None and not os.environ.get("BANDSTACK_PURE"):
    _active = _scan_cy
else:
    _active = _scan_py

nearest_indices_scan = _active.nearest_indices_scan
nearest_indices_fast = _active.nearest_indices_fast


def active_lane() -> str:
    """Name of the lane in use: "cython" or "python"."""
    return _active.LANE


def available_lanes() -> dict:
    """Importable lane modules keyed by name."""
    lanes = {"python": _scan_py}
    if _scan_cy is not None:
        lanes["cython"] = _scan_cy
    return lanes
