"""Reference quadrature for distances between increment densities.

Every bound in :mod:`lecamjd.distances` is checked against direct numerical
integration of the densities involved.  Integrals are split into panels at
all structural points of both densities (support endpoints, breakpoints,
atom locations) so the adaptive integrator never straddles a kink, and each
panel must converge to a tight absolute tolerance or the computation raises
instead of returning a silently wrong number.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .laws import Density
from .model import QuadratureError

__all__ = [
    "l1_quadrature",
    "tv_quadrature",
    "hellinger_quadrature",
    "total_mass",
]

_PANEL_EPSABS = 1e-12
_PANEL_EPSREL = 1e-10
_PANEL_LIMIT = 200


def _panel_points(*densities: Density) -> np.ndarray:
    los = [d.support[0] for d in densities]
    his = [d.support[1] for d in densities]
    lo, hi = min(los), max(his)
    pts = {lo, hi}
    for d in densities:
        pts.update(d.support)
        pts.update(b for b in d.breakpoints if lo < b < hi)
        pts.update(a for a, _ in d.atoms if lo < a < hi)
    arr = np.array(sorted(pts))
    # merge panel edges that are numerically identical
    span = hi - lo
    keep = [arr[0]]
    for x in arr[1:]:
        if x - keep[-1] > 1e-13 * max(span, 1.0):
            keep.append(x)
    keep[-1] = hi
    return np.asarray(keep)


def _integrate_panels(fn, points: np.ndarray) -> float:
    total = 0.0
    for a, b in zip(points[:-1], points[1:]):
        res = integrate.quad(fn, a, b, epsabs=_PANEL_EPSABS,
                             epsrel=_PANEL_EPSREL, limit=_PANEL_LIMIT,
                             full_output=True)
        if len(res) > 3:
            raise QuadratureError(
                f"panel [{a:g}, {b:g}] did not converge: {res[3]}")
        total += res[0]
    return total


def _atom_map(d: Density) -> dict[float, float]:
    out: dict[float, float] = {}
    for loc, mass in d.atoms:
        out[loc] = out.get(loc, 0.0) + mass
    return out


def l1_quadrature(p: Density, q: Density) -> float:
    """L1 distance: integral of |p - q| plus atom mass differences."""
    points = _panel_points(p, q)
    cont = _integrate_panels(
        lambda x: abs(float(p.pdf(x)) - float(q.pdf(x))), points)
    ap, aq = _atom_map(p), _atom_map(q)
    atom_part = sum(abs(ap.get(loc, 0.0) - aq.get(loc, 0.0))
                    for loc in set(ap) | set(aq))
    return cont + atom_part


def tv_quadrature(p: Density, q: Density) -> float:
    """Total variation distance, half of the L1 distance."""
    return 0.5 * l1_quadrature(p, q)


def hellinger_quadrature(p: Density, q: Density) -> float:
    """Hellinger distance: the L2 distance between root densities."""
    points = _panel_points(p, q)
    cont = _integrate_panels(
        lambda x: (math.sqrt(max(float(p.pdf(x)), 0.0))
                   - math.sqrt(max(float(q.pdf(x)), 0.0))) ** 2,
        points)
    ap, aq = _atom_map(p), _atom_map(q)
    atom_part = sum((math.sqrt(ap.get(loc, 0.0))
                     - math.sqrt(aq.get(loc, 0.0))) ** 2
                    for loc in set(ap) | set(aq))
    return math.sqrt(max(cont + atom_part, 0.0))


def total_mass(p: Density) -> float:
    """Continuous mass plus atom mass; should be 1 up to truncation error."""
    points = _panel_points(p)
    cont = _integrate_panels(lambda x: float(p.pdf(x)), points)
    return cont + sum(mass for _, mass in p.atoms)
