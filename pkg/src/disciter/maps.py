"""Model zoo of non-elliptic self-maps of the disc, with exact linearizing charts.

Variants
--------
HyperbolicAut(lam)   w -> lam*w in the right half-plane chart; attracting
                     boundary point 1, angular derivative 1/lam.  Chart
                     h(z) = log((1+z)/(1-z)) / log(lam), image a horizontal
                     strip of half-width pi/(2 log lam).
ParabolicAut         w -> w + 1 in the upper half-plane chart; h is the upper
                     Cayley map itself, image the upper half-plane
                     (positive hyperbolic step: orbits approach tangentially).
KoebeShift           f = g^{-1}(g + 1) for the slit-plane map g; h = g, image
                     K = C \\ (-inf, -1] (zero hyperbolic step, orbits real
                     from real starts, hence non-tangential).
QuadraticParabolic   f(z) = (1 + z^2)/2, non-univalent (f(z) = f(-z)), no
                     closed-form chart; the designated black-box stress case.
                     Its asymptotics are certified externally by the
                     independent recurrence e_{n+1} = e_n - e_n^2/2.
Custom               user evaluation rule, optionally with a chart.

Orbits of charted variants are computed in chart coordinates; the hyperbolic
automorphism stores log-scale data so rates stay exact at iteration counts
where materialized doubles would saturate.  Disc materialization flags points
indistinguishable from the boundary instead of silently clipping.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidPointError, UnsupportedModelError
from . import domains
from .hypgeo import BoundaryPoint, dist_disk, require_in_disk
from .util import SATURATION_EPS, geometric_grid

N_CAP_CHARTED = 10 ** 7
N_CAP_BLACKBOX = 10 ** 6

HYPERBOLIC = "hyperbolic"
POSITIVE_PARABOLIC = "positive-parabolic"
ZERO_PARABOLIC = "zero-parabolic"


@dataclass(frozen=True)
class KoenigsChart:
    """Linearizing chart: forward/inverse maps, image domain, boundary data.

    Charts are only canonical up to additive translation; each zoo member
    pins one normalization by its stated closed form (the slit-plane map
    sends 0 to 0, the Cayley charts send 0 to their base point).
    """

    forward: callable
    inverse: callable
    omega: domains.SimplyConnectedDescriptor
    tau: BoundaryPoint
    declared_type: str


@dataclass(frozen=True)
class ModelMap:
    name: str
    variant: str  # hyp-aut | parab-aut | koebe | quad | custom
    func: callable
    tau: BoundaryPoint
    f_prime_tau: float
    chart: KoenigsChart = None
    univalent: bool = True
    omega_starlike: bool = False
    params: tuple = field(default_factory=tuple)

    @property
    def charted(self):
        return self.chart is not None

    @property
    def n_cap(self):
        # Custom maps iterate by direct composition even when they declare a
        # chart, so they keep the black-box cap.
        if self.charted and self.variant != "custom":
            return N_CAP_CHARTED
        return N_CAP_BLACKBOX

    def __call__(self, z):
        return self.func(z)


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def _cayley_right(z):
    return (1.0 + z) / (1.0 - z)


def _cayley_right_inv(w):
    return (w - 1.0) / (w + 1.0)


def _cayley_upper(z):
    return 1j * (1.0 + z) / (1.0 - z)


def _cayley_upper_inv(w):
    return (w - 1j) / (w + 1j)


def hyperbolic_automorphism(lam):
    """Disc automorphism conjugate to w -> lam*w on the right half-plane."""
    if not lam > 1.0:
        raise InvalidPointError("hyperbolic automorphism needs lam > 1")
    lam = float(lam)
    loglam = math.log(lam)

    def f(z):
        return _cayley_right_inv(lam * _cayley_right(z))

    chart = KoenigsChart(
        forward=lambda z: np.log(np.asarray(_cayley_right(z), dtype=complex)) / loglam,
        inverse=lambda w: _cayley_right_inv(np.exp(np.asarray(w, dtype=complex) * loglam)),
        omega=domains.strip(math.pi / (2.0 * loglam)),
        tau=BoundaryPoint(0.0),
        declared_type=HYPERBOLIC,
    )
    return ModelMap(name=f"hyp:{lam:g}", variant="hyp-aut", func=f,
                    tau=BoundaryPoint(0.0), f_prime_tau=1.0 / lam, chart=chart,
                    univalent=True, omega_starlike=True, params=(lam,))


def parabolic_automorphism():
    """Disc automorphism conjugate to w -> w + 1 on the upper half-plane."""

    def f(z):
        return _cayley_upper_inv(_cayley_upper(z) + 1.0)

    chart = KoenigsChart(
        forward=_cayley_upper,
        inverse=_cayley_upper_inv,
        omega=domains.UPPER_HALF_PLANE,
        tau=BoundaryPoint(0.0),
        declared_type=POSITIVE_PARABOLIC,
    )
    return ModelMap(name="parab-aut", variant="parab-aut", func=f,
                    tau=BoundaryPoint(0.0), f_prime_tau=1.0, chart=chart,
                    univalent=True, omega_starlike=True)


def koebe_shift():
    """Unit translation transported through the slit-plane Riemann map."""

    def f(z):
        return domains.slit_riemann_inv(domains.slit_riemann(z) + 1.0)

    chart = KoenigsChart(
        forward=domains.slit_riemann,
        inverse=domains.slit_riemann_inv,
        omega=domains.SLIT_PLANE_K,
        tau=BoundaryPoint(0.0),
        declared_type=ZERO_PARABOLIC,
    )
    return ModelMap(name="koebe", variant="koebe", func=f,
                    tau=BoundaryPoint(0.0), f_prime_tau=1.0, chart=chart,
                    univalent=True, omega_starlike=True)


def quadratic_parabolic():
    """f(z) = (1 + z^2)/2: non-univalent, boundary fixed point 1, f'(1) = 1."""

    def f(z):
        return (1.0 + np.asarray(z, dtype=complex) ** 2) / 2.0 if isinstance(z, np.ndarray) \
            else (1.0 + complex(z) ** 2) / 2.0

    return ModelMap(name="quad", variant="quad", func=f,
                    tau=BoundaryPoint(0.0), f_prime_tau=1.0, chart=None,
                    univalent=False, omega_starlike=False)


def custom_map(func, tau_angle=0.0, f_prime_tau=None, univalent=False,
               chart=None, name="custom"):
    """Black-box map from a user evaluation rule, optionally with a chart.

    A declared chart on a custom map supplies metadata (image domain, declared
    type for the classification cross-check); iteration still composes the
    evaluation rule directly.
    """
    return ModelMap(name=name, variant="custom", func=func,
                    tau=BoundaryPoint(tau_angle), f_prime_tau=f_prime_tau,
                    chart=chart, univalent=univalent, omega_starlike=False)


def resolve_map(name):
    """Registry lookup for CLI names: hyp:<lam>, parab-aut, koebe, quad.

    The zoo deliberately contains no candidate with Koenigs image equal to the
    whole plane; all charted members have a proper image domain.
    """
    if name == "koebe":
        return koebe_shift()
    if name == "parab-aut":
        return parabolic_automorphism()
    if name == "quad":
        return quadratic_parabolic()
    if name.startswith("hyp:"):
        return hyperbolic_automorphism(float(name.partition(":")[2]))
    raise UnsupportedModelError(f"unknown map name {name!r}")


def eval_map(f: ModelMap, z):
    """Evaluate f at a disc point; result is again a strict disc point.

    Points whose image is indistinguishable from the boundary at working
    precision are the caller's concern: orbit accessors flag them explicitly.
    """
    z = require_in_disk(z, "eval_map")
    return f.func(z)


def is_boundary_saturated(z):
    """True when 1 - |z| is below the working-precision floor."""
    return (1.0 - np.abs(np.asarray(z, dtype=complex))) < SATURATION_EPS


# ---------------------------------------------------------------------------
# Chart-space distance helpers (exact where doubles allow)
# ---------------------------------------------------------------------------

def _ray_dist(L, theta):
    """d(w, e^L w) in the right half-plane for w on the ray arg w = theta.

    Stable for all L >= 0: underflow of exp(-L) reproduces the exact limit
    L/2 + log(1/|cos theta|).
    """
    L = np.asarray(L, dtype=float)
    u = np.exp(-L)
    one_minus_u = -np.expm1(-L)
    c2 = 2.0 * math.cos(theta) ** 2  # = 1 + cos(2 theta), no cancellation
    core = np.sqrt(one_minus_u ** 2 + 2.0 * u * c2) + one_minus_u
    out = 0.5 * L + np.log(core) - 0.5 * np.log(2.0 * c2)
    return out if out.ndim else float(out)


def _upper_offset_dist(b, s):
    """d(w, w + s) in the upper half-plane, Im w = b > 0, real offset s >= 0."""
    s = np.asarray(s, dtype=float)
    rho = np.hypot(s, 2.0 * b)
    out = 0.5 * np.log1p(s * (rho + s) / (2.0 * b * b))
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Orbits
# ---------------------------------------------------------------------------

class OrbitRecord:
    """Orbit of one start point, stored in chart coordinates when available.

    Disc points are materialized on demand and carry a saturation flag; the
    analysis accessors (distances, Euclidean gaps, slope angles, Julia
    quotients) are computed in chart coordinates for charted variants, so they
    remain exact at indices where materialized doubles fail.  f^0 is the
    identity.  Accessors take an int or an integer array of indices.
    """

    def __init__(self, map_, z0, n_max):
        n_max = int(n_max)
        if n_max < 0:
            raise InvalidPointError("orbit length must be >= 0")
        if n_max > map_.n_cap:
            raise InvalidPointError(
                f"n_max = {n_max} exceeds the {map_.name} cap {map_.n_cap}")
        self.map = map_
        self.z0 = complex(require_in_disk(z0, "orbit start"))
        self.n_max = n_max
        self.tau = map_.tau.value
        self.declared_type = map_.chart.declared_type if map_.charted else None

    # -- interface ----------------------------------------------------------
    def _check(self, n):
        n = np.asarray(n, dtype=np.int64)
        if np.any(n < 0) or np.any(n > self.n_max):
            raise InvalidPointError("orbit index out of range")
        return n

    def disc_point(self, n):
        raise NotImplementedError

    def one_minus_mod_sq(self, n):
        return np.exp(self.log_one_minus_mod_sq(n))

    def one_minus_mod(self, n):
        return np.exp(self.log_one_minus_mod(n))

    def log_one_minus_mod(self, n):
        q = self.log_one_minus_mod_sq(n)
        m = np.sqrt(-np.expm1(np.minimum(q, 0.0)))  # |z| = sqrt(1 - (1-|z|^2))
        return q - np.log1p(m)

    def dist_to_tau(self, n):
        return np.exp(self.log_dist_to_tau(n))

    def log_julia_quotient(self, n):
        """log of u(n+1)/u(n) for the boundary quotient u = |tau-z|^2/(1-|z|^2)."""
        n = self._check(n)
        logu = lambda k: 2.0 * self.log_dist_to_tau(k) - self.log_one_minus_mod_sq(k)
        return logu(n + 1) - logu(n)

    def steps_prefix(self, m):
        """Cumulative step sums S[k] = sum_{j<k} step(j), k = 0..m."""
        m = int(m)
        steps = self.step(np.arange(m, dtype=np.int64))
        out = np.zeros(m + 1)
        np.cumsum(steps, out=out[1:])
        return out


class _HyperbolicOrbit(OrbitRecord):
    """Orbit stored as log|w| in the right half-plane chart (log-scale)."""

    def __init__(self, map_, z0, n_max):
        super().__init__(map_, z0, n_max)
        w0 = complex(_cayley_right(self.z0))
        self._logr0 = math.log(abs(w0))
        self._theta = math.atan2(w0.imag, w0.real)
        self._loglam = math.log(map_.params[0])

    def _logw(self, n):
        return self._logr0 + np.asarray(n, dtype=float) * self._loglam

    def koenigs(self, n):
        n = self._check(n)
        return (self._logr0 + 1j * self._theta) / self._loglam + n

    def _log_abs_w_plus_1(self, n):
        L = self._logw(n)
        u = np.exp(-L)
        c = math.cos(self._theta)
        return L + 0.5 * np.log1p(u * (2.0 * c + u))

    def disc_point(self, n):
        n = self._check(n)
        L = self._logw(n)
        sat = self.log_one_minus_mod(n) < math.log(SATURATION_EPS)
        w = np.exp(np.minimum(L, 700.0)) * cmath.exp(1j * self._theta)
        z = np.where(sat, self.tau, _cayley_right_inv(w))
        z = np.where(n == 0, self.z0, z)  # f^0 is the identity, exactly
        return (z, sat) if np.ndim(n) else (complex(z), bool(sat))

    def log_one_minus_mod_sq(self, n):
        n = self._check(n)
        L = self._logw(n)
        return math.log(4.0 * math.cos(self._theta)) + L - 2.0 * self._log_abs_w_plus_1(n)

    def log_dist_to_tau(self, n):
        n = self._check(n)
        return math.log(2.0) - self._log_abs_w_plus_1(n)

    def dist_from_start(self, n):
        n = self._check(n)
        return _ray_dist(np.asarray(n, dtype=float) * self._loglam, self._theta)

    def pair_dist(self, n, m):
        n, m = self._check(n), self._check(m)
        return _ray_dist(np.abs(m - n).astype(float) * self._loglam, self._theta)

    def step(self, n):
        n = self._check(n)
        s = _ray_dist(self._loglam, self._theta)
        return np.full(np.shape(n), s) if np.ndim(n) else s

    def slope_angle(self, n):
        # arg(1 - z_n) = -arg(w_n + 1) = -arg(e^{i theta} + e^{-L})
        n = self._check(n)
        L = self._logw(n)
        u = np.exp(-L)
        out = -np.arctan2(math.sin(self._theta), math.cos(self._theta) + u)
        return out if np.ndim(n) else float(out)


class _TranslationOrbit(OrbitRecord):
    """Charted orbit with w_n = w0 + n (slit plane or upper half-plane image)."""

    def __init__(self, map_, z0, n_max):
        super().__init__(map_, z0, n_max)
        self._w0 = complex(map_.chart.forward(self.z0))
        self._upper = map_.variant == "parab-aut"

    def koenigs(self, n):
        n = self._check(n)
        return self._w0 + n

    def _s(self, n):
        # For the slit chart, s = principal sqrt(w + 1) lives in the right
        # half-plane and z = (s-1)/(s+1).
        return np.sqrt(np.asarray(self._w0 + n, dtype=complex) + 1.0)

    def disc_point(self, n):
        n = self._check(n)
        if self._upper:
            z = _cayley_upper_inv(self._w0 + n.astype(complex))
        else:
            z = _cayley_right_inv(self._s(n))
        z = np.where(n == 0, self.z0, z)  # f^0 is the identity, exactly
        sat = is_boundary_saturated(z)
        return (z, sat) if np.ndim(n) else (complex(z), bool(sat))

    def log_one_minus_mod_sq(self, n):
        n = self._check(n)
        if self._upper:
            w = self._w0 + n.astype(complex)
            return np.log(4.0 * np.imag(w)) - 2.0 * np.log(np.abs(w + 1j))
        s = self._s(n)
        return np.log(4.0 * np.real(s)) - 2.0 * np.log(np.abs(s + 1.0))

    def log_dist_to_tau(self, n):
        n = self._check(n)
        if self._upper:
            return math.log(2.0) - np.log(np.abs(self._w0 + n.astype(complex) + 1j))
        return math.log(2.0) - np.log(np.abs(self._s(n) + 1.0))

    def _pair_dist_upper(self, n, m):
        return _upper_offset_dist(self._w0.imag, np.abs(m - n).astype(float))

    def pair_dist(self, n, m):
        n, m = self._check(n), self._check(m)
        if self._upper:
            return self._pair_dist_upper(n, m)
        if self._w0.imag == 0.0:
            # Real orbits ride the real geodesic of the slit plane.
            a = self._w0.real + np.asarray(n, dtype=float)
            b = self._w0.real + np.asarray(m, dtype=float)
            out = 0.25 * np.abs(np.log1p(b) - np.log1p(a))
            return out if np.ndim(out) else float(out)
        return dist_disk(_cayley_right_inv(self._s(n)), _cayley_right_inv(self._s(m)))

    def dist_from_start(self, n):
        return self.pair_dist(np.zeros_like(self._check(n)), n) if np.ndim(n) \
            else self.pair_dist(0, n)

    def step(self, n):
        n = self._check(n)
        return self.pair_dist(n, n + 1)

    def slope_angle(self, n):
        n = self._check(n)
        if self._upper:
            u = 2j / (self._w0 + n.astype(complex) + 1j)  # 1 - z_n
        else:
            u = 2.0 / (self._s(n) + 1.0)
        out = np.angle(u)
        return out if np.ndim(n) else float(out)


class _BlackBoxOrbit(OrbitRecord):
    """Orbit by direct composition, materialized only at requested indices."""

    def __init__(self, map_, z0, n_max):
        super().__init__(map_, z0, n_max)
        self._cache = {0: self.z0}

    def _ensure(self, indices):
        needed = sorted(set(int(i) for i in np.atleast_1d(indices)) - set(self._cache))
        if not needed:
            return
        have = sorted(self._cache)
        start = max(i for i in have if i <= needed[0])
        z = self._cache[start]
        need_iter = iter(needed)
        nxt = next(need_iter)
        f = self.map.func
        for k in range(start, needed[-1]):
            z = f(z)
            if k + 1 == nxt:
                self._cache[k + 1] = complex(z)
                nxt = next(need_iter, None)
                if nxt is None:
                    break

    def _points(self, n):
        n = self._check(n)
        self._ensure(n)
        pts = np.array([self._cache[int(k)] for k in np.atleast_1d(n)], dtype=complex)
        return pts if np.ndim(n) else pts[0]

    def disc_point(self, n):
        z = self._points(n)
        sat = is_boundary_saturated(z)
        return (z, sat) if np.ndim(n) else (complex(z), bool(sat))

    def koenigs(self, n):
        return None

    def log_one_minus_mod_sq(self, n):
        z = np.asarray(self._points(n), dtype=complex)
        a = np.abs(z)
        return np.log((1.0 - a) * (1.0 + a))

    def log_one_minus_mod(self, n):
        z = np.asarray(self._points(n), dtype=complex)
        return np.log(1.0 - np.abs(z))

    def log_dist_to_tau(self, n):
        z = np.asarray(self._points(n), dtype=complex)
        return np.log(np.abs(z - self.tau))

    def pair_dist(self, n, m):
        return dist_disk(self._points(n), self._points(m))

    def dist_from_start(self, n):
        return dist_disk(self.z0, self._points(n))

    def step(self, n):
        n = self._check(n)
        return self.pair_dist(n, n + 1)

    def slope_angle(self, n):
        z = np.asarray(self._points(n), dtype=complex)
        u = 1.0 - np.conj(self.tau) * z
        out = np.angle(u)
        return out if np.ndim(n) else float(out)


def iterate(f: ModelMap, z, n):
    """Orbit record for f^0(z), ..., f^n(z).

    Charted variants compute in chart coordinates (cap 1e7); black-box
    variants compose directly (cap 1e6) and flag boundary saturation instead
    of clipping.
    """
    if f.variant == "hyp-aut":
        return _HyperbolicOrbit(f, z, n)
    if f.variant in ("parab-aut", "koebe"):
        return _TranslationOrbit(f, z, n)
    return _BlackBoxOrbit(f, z, n)


# ---------------------------------------------------------------------------
# Numeric diagnostics
# ---------------------------------------------------------------------------

# Heuristic threshold: a step below this value at n = 1e5 is called zero-step.
STEP_ZERO_THRESHOLD = 1e-4
JULIA_PARABOLIC_BAND = 1e-3


@dataclass(frozen=True)
class ClassificationReport:
    declared_type: str  # None for black-box maps without a declared chart type
    inferred_type: str
    step_estimate: float
    step_tag: str  # positive-step | zero-step
    f_prime_tau_estimate: float
    slope_flag: str  # non-tangential | tangential | inconclusive
    mismatch: bool

    def to_dict(self):
        return {
            "declared_type": self.declared_type,
            "inferred_type": self.inferred_type,
            "step_estimate": self.step_estimate,
            "step_tag": self.step_tag,
            "f_prime_tau_estimate": self.f_prime_tau_estimate,
            "slope_flag": self.slope_flag,
            "mismatch": self.mismatch,
        }


def classify_numeric(f: ModelMap, z0, n_max=10 ** 5):
    """Diagnostics from one orbit: step limit, Julia quotient, slope flag.

    These are heuristics; a mismatch against the declared type is reported,
    never raised, and a declared type is never overridden.
    """
    from . import slope as slope_mod  # local import to avoid a cycle

    n_max = min(int(n_max), f.n_cap - 1)
    orbit = iterate(f, z0, n_max + 1)
    grid = geometric_grid(n_max)

    steps = orbit.step(grid)
    step_estimate = float(steps[-1])
    step_tag = "zero-step" if step_estimate < STEP_ZERO_THRESHOLD else "positive-step"

    jq = np.exp(orbit.log_julia_quotient(grid))
    fprime_est = float(np.median(jq[-5:]) if jq.size >= 5 else jq[-1])

    thetas = orbit.slope_angle(grid)
    cluster = slope_mod.cluster_estimate(thetas)
    slope_flag = slope_mod.tangentiality_verdict(cluster)

    if fprime_est < 1.0 - JULIA_PARABOLIC_BAND:
        inferred = HYPERBOLIC
    elif step_tag == "zero-step":
        inferred = ZERO_PARABOLIC
    else:
        inferred = POSITIVE_PARABOLIC

    declared = orbit.declared_type
    mismatch = declared is not None and inferred != declared
    return ClassificationReport(declared, inferred, step_estimate, step_tag,
                                fprime_est, slope_flag, mismatch)


@dataclass(frozen=True)
class DenjoyWolffEstimate:
    angle: float
    error_estimate: float
    converged: bool

    def to_dict(self):
        return {"angle": self.angle, "error_estimate": self.error_estimate,
                "converged": self.converged}


def denjoy_wolff_estimate(f: ModelMap, z0, n_max=None):
    """Limiting boundary angle of the orbit, with a stabilization error bound."""
    if n_max is None:
        n_max = f.n_cap
    n_max = min(int(n_max), f.n_cap)
    orbit = iterate(f, z0, n_max)

    def angle_at(n):
        # z_n = tau * (1 - u_n) with u_n = 1 - conj(tau) z_n; arg through u is
        # stable arbitrarily close to the boundary.
        theta = orbit.slope_angle(n)
        r = float(orbit.dist_to_tau(n))
        u = r * cmath.exp(1j * theta)
        return math.atan2(f.tau.value.imag, f.tau.value.real) + cmath.phase(1.0 - u), r

    a_full, r_full = angle_at(n_max)
    a_half, _ = angle_at(max(1, n_max // 2))
    err = abs(a_full - a_half) + r_full
    return DenjoyWolffEstimate(angle=a_full % (2.0 * math.pi),
                               error_estimate=err,
                               converged=bool(err < 1e-3))
