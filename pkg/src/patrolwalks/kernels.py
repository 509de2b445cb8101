"""Kernel dispatch: compiled extension when available, exact pure Python
otherwise.

The compiled module (`patrolwalks._speedups`, built from Cython) runs the
hot loops on int64 values; every call site here first clears denominators
against the instance's common grid and checks 64-bit headroom, falling back
to the pure module for anything irregular. Set ``PATROLWALKS_PURE=1`` to
force the fallback.
"""

from __future__ import annotations

import os
from fractions import Fraction

from . import _speedups_py as pure_module

compiled_module = None
if os.environ.get("PATROLWALKS_PURE", "") in ("", "0"):
    try:
        from . import _speedups as compiled_module  # type: ignore[no-redef]
    except ImportError:
        compiled_module = None

BACKEND = "compiled" if compiled_module is not None else "pure"

_INT64_HEADROOM = 2 ** 62


def available_backends() -> tuple[str, ...]:
    return ("compiled", "pure") if compiled_module is not None else ("pure",)


def _as_int(x: Fraction, denom: int):
    scaled = x * denom
    return int(scaled) if scaled.denominator == 1 else None


def walk_feasible(verts, holds, inst, override_last_leg=None) -> bool:
    """Periodic feasibility of the walk given by (verts, holds) on ``inst``.

    ``override_last_leg`` replaces the duration of the travel leg into the
    final step.
    """
    denom, dist_int, r_int, max_value = inst.int_form
    if compiled_module is not None and len(verts) > 1:
        holds_int = []
        for h in holds:
            hi = _as_int(h, denom)
            if hi is None:
                break
            holds_int.append(hi)
        else:
            override_int = -1
            ok = True
            if override_last_leg is not None:
                override_int = _as_int(override_last_leg, denom)
                ok = override_int is not None
            if ok:
                total = sum(holds_int) + max(override_int, 0)
                for i in range(len(verts)):
                    total += dist_int[verts[i]][verts[(i + 1) % len(verts)]]
                if 2 * total + max_value < _INT64_HEADROOM:
                    import numpy as np

                    dmat, rvec = inst.np_form
                    return bool(compiled_module.walk_feasible(
                        np.asarray(verts, dtype=np.int64),
                        np.asarray(holds_int, dtype=np.int64),
                        dmat, rvec, override_int))
    return pure_module.walk_feasible(list(verts), list(holds), inst.dist,
                                     inst.r, override_last_leg)


def two_opt_order(order, inst) -> list[int]:
    """2-opt local optimum of a cyclic visiting order under ``inst``'s
    distances (exact integer comparisons)."""
    denom, dist_int, r_int, max_value = inst.int_form
    n = len(order)
    if compiled_module is not None and n * max_value < _INT64_HEADROOM:
        import numpy as np

        dmat, _ = inst.np_form
        return list(compiled_module.two_opt(
            np.asarray(order, dtype=np.int64), dmat))
    return pure_module.two_opt(list(order), dist_int)


def oracle_find_cycle(dist_int, r_int, robots: int, horizon: int):
    """Bounded lasso search on an integer-grid instance; see the pure module
    for semantics. Dispatches to the compiled search when the packed state
    fits in 63 bits."""
    if compiled_module is not None:
        n = len(r_int)
        max_d = max(max(row) for row in dist_int)
        capacity = 1
        for rv in r_int:
            capacity *= rv + 1
        for _ in range(robots):
            capacity *= n * max_d
        if capacity < 2 ** 62:
            import numpy as np

            res = compiled_module.oracle_search(
                np.asarray(dist_int, dtype=np.int64),
                np.asarray(r_int, dtype=np.int64),
                robots, horizon)
            if res is None:
                return None
            frames, closing = res
            return ([tuple(tuple(sub) for sub in fr) for fr in frames],
                    tuple(tuple(sub) for sub in closing))
    return pure_module.oracle_search(
        [list(row) for row in dist_int], list(r_int), robots, horizon)
