"""Harmonic measure: exact Poisson quadrature and walk-on-spheres Monte Carlo.

Boundary arcs of the disc are integrated adaptively against the Poisson
kernel.  Slit domains (the disc minus a polyline) are handled by
walk-on-spheres: jump to a uniform point of the maximal inscribed circle,
absorb within eps of the boundary, classify by the nearest boundary part.
Estimates are unbiased up to O(eps) boundary-classification error.

Randomness comes from the counter-based Philox generator; walks are split
into fixed-size chunks with independently derived substreams, so chunk-level
parallel execution would reproduce the serial estimate bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import InvalidPointError
from .hypgeo import require_in_disk
from .maps import ModelMap, iterate
from .semiflow import make_trajectory

WOS_EPS = 1e-4
WOS_CAP = 10 ** 5
WOS_CHUNK = 1 << 14
DISCARD_FLAG_FRACTION = 0.01


@dataclass(frozen=True)
class HmEstimate:
    value: float
    method: str               # poisson-quadrature | arcsin-formula | wos-monte-carlo
    se: float = 0.0           # Monte Carlo standard error sqrt(p(1-p)/N); 0 otherwise
    n_walks: int = 0
    discards: int = 0
    mean_steps: float = 0.0
    flagged: bool = False     # more than 1% of walks discarded

    def to_dict(self):
        return {"value": self.value, "method": self.method, "se": self.se,
                "n_walks": self.n_walks, "discards": self.discards,
                "mean_steps": self.mean_steps, "flagged": self.flagged}


def arc_measure_from_diameter(diam):
    """Arc formula at the origin: measure = arcsin(diam/2) / pi."""
    if not 0.0 <= diam <= 2.0:
        raise InvalidPointError("arc diameter must lie in [0, 2]")
    return HmEstimate(value=math.asin(diam / 2.0) / math.pi, method="arcsin-formula")


def arc_diameter(theta1, theta2):
    """Euclidean diameter of the arc between the two angles (2 once it spans pi)."""
    spread = theta2 - theta1
    return 2.0 if spread >= math.pi else 2.0 * math.sin(spread / 2.0)


def hm_disk_arc(z, theta1, theta2, epsabs=1e-12):
    """Harmonic measure of a circle arc seen from z, by adaptive quadrature."""
    z = complex(require_in_disk(z, "hm_disk_arc"))
    if not theta1 <= theta2 <= theta1 + 2.0 * math.pi:
        raise InvalidPointError("need theta1 <= theta2 <= theta1 + 2*pi")
    if theta1 == theta2:
        return HmEstimate(value=0.0, method="poisson-quadrature")
    a = abs(z)

    def poisson(theta):
        return (1.0 - a * a) / abs(np.exp(1j * theta) - z) ** 2 / (2.0 * math.pi)

    val, _ = quad(poisson, theta1, theta2, epsabs=epsabs, epsrel=epsabs, limit=400)
    return HmEstimate(value=float(val), method="poisson-quadrature")


def hm_halfplane_interval(w, a, b):
    """Harmonic measure of the real interval [a, b] from w in the upper half-plane.

    Equals the subtended angle over pi; used as the closed-form side of the
    conformal-subordination cross-checks.
    """
    w = complex(w)
    if w.imag <= 0:
        raise InvalidPointError("w must lie in the upper half-plane")
    if not a < b:
        raise InvalidPointError("need a < b")
    return float(np.angle((b - w) / (a - w))) / math.pi


# ---------------------------------------------------------------------------
# Slit domains and walk-on-spheres
# ---------------------------------------------------------------------------

def _collapse_collinear(pts):
    if pts.size <= 2:
        return pts
    keep = [0]
    for k in range(1, pts.size - 1):
        a, b, c = pts[keep[-1]], pts[k], pts[k + 1]
        cross = (b - a).real * (c - a).imag - (b - a).imag * (c - a).real
        if cross != 0.0:
            keep.append(k)
    keep.append(pts.size - 1)
    return pts[keep]


def _orient(a, b, c):
    v = (b - a).real * (c - a).imag - (b - a).imag * (c - a).real
    return 0 if v == 0.0 else (1 if v > 0 else -1)


def _on_segment(a, b, p):
    return (min(a.real, b.real) <= p.real <= max(a.real, b.real)
            and min(a.imag, b.imag) <= p.imag <= max(a.imag, b.imag))


def _segments_cross(p1, p2, p3, p4):
    o1, o2 = _orient(p1, p2, p3), _orient(p1, p2, p4)
    o3, o4 = _orient(p3, p4, p1), _orient(p3, p4, p2)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and _on_segment(p1, p2, p3):
        return True
    if o2 == 0 and _on_segment(p1, p2, p4):
        return True
    if o3 == 0 and _on_segment(p3, p4, p1):
        return True
    if o4 == 0 and _on_segment(p3, p4, p2):
        return True
    return False


@dataclass(frozen=True)
class SlitDiskDomain:
    """The unit disc minus a polyline slit (possibly empty).

    The polyline must lie strictly inside the disc and be simple
    (non-self-intersecting).  Collinear interior vertices are collapsed, so a
    densely sampled straight tail costs one segment.
    """

    vertices: tuple

    def __init__(self, vertices):
        pts = np.asarray([complex(v) for v in vertices], dtype=complex)
        if pts.size and np.any(np.abs(pts) >= 1.0):
            raise InvalidPointError("slit polyline must lie strictly inside the disc")
        pts = _collapse_collinear(pts)
        segs = [(pts[i], pts[i + 1]) for i in range(pts.size - 1)]
        for i in range(len(segs)):
            for j in range(i + 2, len(segs)):
                if _segments_cross(*segs[i], *segs[j]):
                    raise InvalidPointError("slit polyline is self-intersecting")
        object.__setattr__(self, "vertices", tuple(pts.tolist()))

    @property
    def empty(self):
        return len(self.vertices) == 0

    def distance(self, p):
        """Euclidean distance from points p to the polyline (inf when empty)."""
        p = np.asarray(p, dtype=complex)
        if self.empty:
            return np.full(p.shape, np.inf)
        verts = np.asarray(self.vertices, dtype=complex)
        if verts.size == 1:
            return np.abs(p - verts[0])
        a = verts[:-1]
        ab = verts[1:] - a
        denom = np.abs(ab) ** 2
        pc = p[..., None]
        t = np.clip(((pc - a) * np.conj(ab)).real / denom, 0.0, 1.0)
        return np.abs(pc - (a + t * ab)).min(axis=-1)

    def contains(self, p):
        p = np.asarray(p, dtype=complex)
        inside = np.abs(p) < 1.0
        if self.empty:
            return inside
        return inside & (self.distance(p) > 0.0)


def _wos_run(domain: SlitDiskDomain, z, n_walks, eps, cap, seed, chunk=WOS_CHUNK):
    """Run walks; returns (kind, endpoint, steps) with kind 0=circle, 1=slit, -1=discard."""
    z = complex(z)
    kinds = np.full(n_walks, -1, dtype=np.int64)
    finals = np.zeros(n_walks, dtype=complex)
    steps = np.zeros(n_walks, dtype=np.int64)
    seeds = np.random.SeedSequence(seed).spawn(math.ceil(n_walks / chunk))
    for ci, child in enumerate(seeds):
        lo, hi = ci * chunk, min((ci + 1) * chunk, n_walks)
        m = hi - lo
        rng = np.random.Generator(np.random.Philox(child))
        pos = np.full(m, z, dtype=complex)
        alive = np.arange(m)
        for it in range(cap):
            if alive.size == 0:
                break
            p = pos[alive]
            d_circ = 1.0 - np.abs(p)
            d_slit = domain.distance(p)
            rho = np.minimum(d_circ, d_slit)
            hit = rho < eps
            if np.any(hit):
                idx = alive[hit]
                kinds[lo + idx] = (d_slit[hit] < d_circ[hit]).astype(np.int64)
                finals[lo + idx] = p[hit]
                steps[lo + idx] = it
            keep = ~hit
            if not np.any(keep):
                alive = alive[:0]
                break
            u = rng.random(int(keep.sum()))
            pos[alive[keep]] = p[keep] + rho[keep] * np.exp(2j * math.pi * u)
            alive = alive[keep]
        steps[lo + alive] = cap  # cap reached: discarded, kind stays -1
    return kinds, finals, steps


def hm_wos(domain: SlitDiskDomain, z, target="slit", arc=None, n_walks=10 ** 5,
           eps=WOS_EPS, cap=WOS_CAP, seed=0):
    """Walk-on-spheres estimate of the harmonic measure of a boundary part.

    target is 'slit' or 'circle'; with target='circle' an optional arc
    (theta1, theta2) restricts to walks absorbed at angles inside the arc.
    Walks exceeding the step cap are discarded and counted; the estimate is
    flagged when more than 1% are discarded.
    """
    z = complex(require_in_disk(z, "hm_wos"))
    if target not in ("slit", "circle"):
        raise InvalidPointError("target must be 'slit' or 'circle'")
    if target == "slit" and domain.empty:
        raise InvalidPointError("target='slit' needs a non-empty slit")
    if not np.all(domain.contains(z)):
        raise InvalidPointError("start point outside the slit domain")
    kinds, finals, steps = _wos_run(domain, z, int(n_walks), eps, cap, seed)
    done = kinds >= 0
    n_done = int(done.sum())
    discards = int(n_walks) - n_done
    if n_done == 0:
        raise InvalidPointError("all walks discarded; raise the cap")
    if target == "slit":
        success = kinds[done] == 1
    else:
        success = kinds[done] == 0
        if arc is not None:
            t1, t2 = arc
            ang = np.mod(np.angle(finals[done]) - t1, 2.0 * math.pi)
            success = success & (ang <= (t2 - t1))
    p_hat = float(np.mean(success))
    se = math.sqrt(p_hat * (1.0 - p_hat) / n_done)
    return HmEstimate(value=p_hat, method="wos-monte-carlo", se=se,
                      n_walks=int(n_walks), discards=discards,
                      mean_steps=float(np.mean(steps[done])) if n_done else math.nan,
                      flagged=bool(discards > DISCARD_FLAG_FRACTION * n_walks))


# ---------------------------------------------------------------------------
# Trajectory-tail series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailHmResult:
    ns: np.ndarray
    omega: np.ndarray
    se: np.ndarray
    discards: np.ndarray
    arcsin_floor: np.ndarray      # arcsin(|f^n z - tau|/2)/pi per grid point
    floor_holds: bool             # omega >= floor - 3 se everywhere
    max_omega_sqrt_n: float

    def csv_columns(self):
        return (["n", "omega_hat", "se", "discards"],
                [self.ns, self.omega, self.se, self.discards])

    def to_dict(self):
        return {"schema": "disciter/tail-hm/v1", "floor_holds": self.floor_holds,
                "max_omega_sqrt_n": self.max_omega_sqrt_n}


def tail_slit(f: ModelMap, z, n, cut=1e-6, samples=96):
    """Polyline sampling of the flow tail {phi_t(z) : t >= n}, truncated where
    the boundary gap drops below `cut` (Hausdorff error <= cut)."""
    traj = make_trajectory(f, z)
    gap_n = float(traj.boundary_gap(float(n)))
    if gap_n <= cut:
        raise InvalidPointError("tail already inside the cut; lower n or cut")
    # For the translation charts the gap is ~ 2/sqrt(t); invert to find the cut time.
    t_far = float(n) + max(1.0, (2.0 / cut) ** 2)
    offsets = np.concatenate([[0.0], np.geomspace(1e-3, t_far - float(n), samples - 1)])
    pts = traj.point(float(n) + offsets)
    return SlitDiskDomain(np.atleast_1d(pts))


def tail_hm_series(f: ModelMap, z, n_grid, n_walks=10 ** 5, seed=0, cut=1e-6,
                   eps=WOS_EPS, cap=WOS_CAP):
    """Monte Carlo series omega(0, tail_n, disc \\ tail_n) over the grid.

    Asserts the two-sided sanity chain: the arcsin floor from the tail
    diameter below, boundedness of omega * sqrt(n) above.
    """
    ns = np.asarray(n_grid, dtype=np.int64)
    orbit = iterate(f, z, int(ns[-1]))
    omega = np.zeros(ns.shape)
    se = np.zeros(ns.shape)
    discards = np.zeros(ns.shape, dtype=np.int64)
    floor = np.zeros(ns.shape)
    for i, n in enumerate(ns):
        slit = tail_slit(f, z, int(n), cut=cut)
        est = hm_wos(slit, 0.0, target="slit", n_walks=n_walks, eps=eps, cap=cap,
                     seed=seed + i)
        omega[i], se[i], discards[i] = est.value, est.se, est.discards
        floor[i] = math.asin(min(float(orbit.dist_to_tau(int(n))), 2.0) / 2.0) / math.pi
    floor_holds = bool(np.all(omega >= floor - 3.0 * se))
    max_scaled = float(np.max(omega * np.sqrt(ns.astype(float))))
    return TailHmResult(ns, omega, se, discards, floor, floor_holds, max_scaled)
