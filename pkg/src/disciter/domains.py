"""Concrete simply connected domains with exact Riemann maps.

Every descriptor supplies an exact membership test, the Euclidean boundary
distance, a closed-form Riemann map pair to/from the unit disc (except the
strip, which is kept only for classification displays), the hyperbolic metric
density, and exact hyperbolic distances by conformal transport.

The canonical slit plane is K = C \\ (-inf, -1], uniformized by

    g(z) = ((1+z)/(1-z))**2 - 1,

whose inverse uses the principal square root; arguments exactly on the branch
cut are rejected rather than resolved by convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidPointError, UnsupportedModelError
from . import hypgeo
from .hypgeo import as_complex, dist_disk, dist_halfplane, metric_disk, metric_halfplane


def slit_riemann(z):
    """Riemann map of the disc onto the slit plane K: ((1+z)/(1-z))^2 - 1."""
    z = hypgeo.require_in_disk(z, "slit_riemann")
    q = (1.0 + z) / (1.0 - z)
    return q * q - 1.0


def slit_riemann_inv(w):
    """Inverse of slit_riemann: (s-1)/(s+1) with s the principal root of w+1."""
    w = as_complex(w)
    on_slit = (np.imag(w) == 0.0) & (np.real(w) <= -1.0)
    if np.any(on_slit):
        raise InvalidPointError("slit_riemann_inv: point on the slit (-inf, -1]")
    s = np.sqrt(np.asarray(w, dtype=complex) + 1.0)
    return (s - 1.0) / (s + 1.0)


def _slit_contains(w):
    w = np.asarray(w, dtype=complex)
    return ~((np.imag(w) == 0.0) & (np.real(w) <= -1.0))


def _slit_boundary_distance(w):
    w = np.asarray(w, dtype=complex)
    x, y = np.real(w), np.imag(w)
    # Distance to the ray {x <= -1, y = 0}: |Im w| past the tip, |w+1| before it.
    return np.where(x <= -1.0, np.abs(y), np.abs(w + 1.0))


def _slit_metric(w):
    z = slit_riemann_inv(w)
    gprime = 4.0 * (1.0 + z) / (1.0 - z) ** 3
    return metric_disk(z) / np.abs(gprime)


@dataclass(frozen=True)
class SimplyConnectedDescriptor:
    """A named domain: membership, boundary distance, Riemann pair, metric.

    Tags: disc, right-half-plane, upper-half-plane, strip (param = half-width),
    slit-plane-k, horodisc (param = level R).  The strip supplies no Riemann
    pair and no transported distance.
    """

    tag: str
    param: float = None

    def __post_init__(self):
        if self.tag not in ("disc", "right-half-plane", "upper-half-plane",
                            "strip", "slit-plane-k", "horodisc"):
            raise ValueError(f"unknown domain tag {self.tag!r}")
        if self.tag in ("strip", "horodisc"):
            if self.param is None or not self.param > 0.0:
                raise InvalidPointError(f"{self.tag} requires a positive parameter")

    # -- horodisc geometry (contact point fixed at 1) ----------------------
    @property
    def _horo_radius(self):
        return self.param / (1.0 + self.param)

    @property
    def _horo_center(self):
        return complex(1.0 - self._horo_radius, 0.0)

    def contains(self, w):
        w = np.asarray(as_complex(w), dtype=complex)
        if self.tag == "disc":
            return np.abs(w) < 1.0
        if self.tag == "right-half-plane":
            return np.real(w) > 0.0
        if self.tag == "upper-half-plane":
            return np.imag(w) > 0.0
        if self.tag == "strip":
            return np.abs(np.imag(w)) < self.param
        if self.tag == "slit-plane-k":
            return _slit_contains(w)
        return np.abs(w - self._horo_center) < self._horo_radius

    def _require_inside(self, w, where):
        w = as_complex(w)
        if not np.all(self.contains(w)):
            raise InvalidPointError(f"{where}: point outside {self.tag}")
        return w

    def segment_inside(self, w1, w2):
        """Exact test that the straight segment [w1, w2] stays in the domain.

        All tags except the slit plane are convex; the slit plane checks the
        sign change of Im against the cut, which pointwise sampling would miss
        (the slit has measure zero).
        """
        w1 = self._require_inside(w1, "segment_inside")
        w2 = self._require_inside(w2, "segment_inside")
        if self.tag != "slit-plane-k":
            return True
        y1, y2 = np.imag(np.asarray(w1)), np.imag(np.asarray(w2))
        if y1 == 0.0 or y2 == 0.0 or (y1 > 0) == (y2 > 0):
            return True  # touches the real axis at an interior endpoint at most
        t = y1 / (y1 - y2)
        x_cross = (1.0 - t) * np.real(np.asarray(w1)) + t * np.real(np.asarray(w2))
        return bool(x_cross > -1.0)

    def boundary_distance(self, w):
        """Exact Euclidean distance to the boundary."""
        w = self._require_inside(w, "boundary_distance")
        wa = np.asarray(w, dtype=complex)
        if self.tag == "disc":
            out = 1.0 - np.abs(wa)
        elif self.tag == "right-half-plane":
            out = np.real(wa)
        elif self.tag == "upper-half-plane":
            out = np.imag(wa)
        elif self.tag == "strip":
            out = self.param - np.abs(np.imag(wa))
        elif self.tag == "slit-plane-k":
            out = _slit_boundary_distance(wa)
        else:
            out = self._horo_radius - np.abs(wa - self._horo_center)
        return out if isinstance(w, np.ndarray) else float(out)

    def to_disk(self, w):
        """Riemann map onto the unit disc (exact closed form)."""
        w = self._require_inside(w, "to_disk")
        if self.tag == "disc":
            return w
        if self.tag == "right-half-plane":
            return (w - 1.0) / (w + 1.0)
        if self.tag == "upper-half-plane":
            return (w - 1j) / (w + 1j)
        if self.tag == "slit-plane-k":
            return slit_riemann_inv(w)
        if self.tag == "horodisc":
            return (w - self._horo_center) / self._horo_radius
        raise UnsupportedModelError("strip supplies no Riemann pair")

    def from_disk(self, z):
        z = hypgeo.require_in_disk(z, "from_disk")
        if self.tag == "disc":
            return z
        if self.tag == "right-half-plane":
            return (1.0 + z) / (1.0 - z)
        if self.tag == "upper-half-plane":
            return 1j * (1.0 + z) / (1.0 - z)
        if self.tag == "slit-plane-k":
            return slit_riemann(z)
        if self.tag == "horodisc":
            return self._horo_center + self._horo_radius * z
        raise UnsupportedModelError("strip supplies no Riemann pair")

    def metric_density(self, w):
        w = self._require_inside(w, "metric_density")
        if self.tag == "disc":
            return metric_disk(w)
        if self.tag == "right-half-plane":
            return metric_halfplane(w, "right")
        if self.tag == "upper-half-plane":
            return metric_halfplane(w, "upper")
        if self.tag == "strip":
            a = self.param
            return math.pi / (4.0 * a) / np.cos(math.pi * np.imag(np.asarray(w)) / (2.0 * a))
        if self.tag == "slit-plane-k":
            return _slit_metric(w)
        r = self._horo_radius
        return r / (r * r - np.abs(np.asarray(w) - self._horo_center) ** 2)


DISC = SimplyConnectedDescriptor("disc")
RIGHT_HALF_PLANE = SimplyConnectedDescriptor("right-half-plane")
UPPER_HALF_PLANE = SimplyConnectedDescriptor("upper-half-plane")
SLIT_PLANE_K = SimplyConnectedDescriptor("slit-plane-k")


def strip(half_width):
    return SimplyConnectedDescriptor("strip", float(half_width))


def horodisc(level):
    return SimplyConnectedDescriptor("horodisc", float(level))


_CLI_NAMES = {"disc": DISC, "rhp": RIGHT_HALF_PLANE, "uhp": UPPER_HALF_PLANE,
              "k-slit": SLIT_PLANE_K}


def by_name(name):
    """Resolve a CLI domain name: disc, rhp, uhp, k-slit, horodisc:R, strip:a."""
    if name in _CLI_NAMES:
        return _CLI_NAMES[name]
    if ":" in name:
        tag, _, arg = name.partition(":")
        if tag == "horodisc":
            return horodisc(float(arg))
        if tag == "strip":
            return strip(float(arg))
    raise InvalidPointError(f"unknown domain name {name!r}")


def dist_domain(domain: SimplyConnectedDescriptor, w1, w2):
    """Hyperbolic distance of a tagged domain via conformal transport.

    Closed-form shortcuts are used on axes of symmetry: points of K on the
    real geodesic (-1, +inf) give d = (1/4) |log((1+b)/(1+a))|, and both
    half-planes use their chart closed forms directly.
    """
    w1 = domain._require_inside(w1, "dist_domain")
    w2 = domain._require_inside(w2, "dist_domain")
    tag = domain.tag
    if tag == "disc":
        return dist_disk(w1, w2)
    if tag == "right-half-plane":
        return dist_halfplane(w1, w2, "right")
    if tag == "upper-half-plane":
        return dist_halfplane(w1, w2, "upper")
    if tag == "strip":
        raise UnsupportedModelError("strip distance is not provided")
    if tag == "slit-plane-k":
        both_real = (np.imag(np.asarray(w1)) == 0.0) & (np.imag(np.asarray(w2)) == 0.0)
        if np.all(both_real):
            a = np.real(np.asarray(w1))
            b = np.real(np.asarray(w2))
            out = 0.25 * np.abs(np.log1p(b) - np.log1p(a))
            return float(out) if np.ndim(out) == 0 else out
        return dist_disk(slit_riemann_inv(w1), slit_riemann_inv(w2))
    return dist_disk(domain.to_disk(w1), domain.to_disk(w2))


def horodisc_tangency_ratio(level, z):
    """Metric blow-up ratio lambda_horodisc(z) / lambda_disc(z); always >= 1.

    The closed-form disc metric lambda_{D(c,r)}(z) = r / (r^2 - |z-c|^2) is
    evaluated through u = 1 - z, which removes the cancellation both member
    metrics suffer next to the contact point:

        ratio = r (2 Re u - |u|^2) / (2 r Re u - |u|^2).

    The ratio tends to 1 along any non-tangential approach to the contact
    point, quantifying the internal-tangency metric equivalence on the model
    pair (horodisc, disc).
    """
    if not level > 0.0:
        raise InvalidPointError("horodisc level must be > 0")
    z = as_complex(z)
    r = level / (1.0 + level)
    u = 1.0 - np.asarray(z, dtype=complex)
    usq = np.abs(u) ** 2
    denom = 2.0 * r * np.real(u) - usq
    if np.any(denom <= 0.0):
        raise InvalidPointError("point outside the horodisc")
    out = r * (2.0 * np.real(u) - usq) / denom
    return out if np.ndim(out) else float(out)


# ---------------------------------------------------------------------------
# The punctured-lattice domain C \ {-1, -2, ...} is kept only as a membership
# predicate plus the inclusion upper bound through K; no covering map here.
# ---------------------------------------------------------------------------

def omega_n_contains(w):
    """Membership in C \\ {-n : n = 1, 2, ...}."""
    w = np.asarray(as_complex(w), dtype=complex)
    x, y = np.real(w), np.imag(w)
    is_puncture = (y == 0.0) & (x <= -1.0) & (x == np.floor(x))
    return ~is_puncture


def omega_n_distance_upper(n):
    """Upper bound d(1, 1+n) <= d_K(1, 1+n) by domain inclusion; the left side
    is never computed."""
    n = np.asarray(n, dtype=float)
    if np.any(n < 0):
        raise InvalidPointError("n must be >= 0")
    return 0.25 * (np.log1p(1.0 + n) - math.log(2.0))
