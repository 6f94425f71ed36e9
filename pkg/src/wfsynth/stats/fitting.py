"""Best-fit distribution selection by CDF mean-square error.

Each family is fitted by minimising the same criterion used to rank the
families: the mean squared gap between the model CDF and the Hazen plotting
positions ``(i - 0.5) / n`` of the sorted sample.  The search runs on the
standardised sample (``(x - mean) / std``) from several moment/quantile based
starting points, in an unconstrained encoding of each family's parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import optimize, special

from wfsynth.stats.distributions import (
    FAMILIES,
    FAMILY_NAMES,
    MAX_SKEW_SHAPE,
    DistributionSpec,
    InvalidDistribution,
    standard_cdf,
)

# optimiser objective uses at most this many order statistics
MAX_OBJECTIVE_POINTS = 1000

_SKEW_T_MAX = math.asinh(MAX_SKEW_SHAPE)
# positive shape parameters are searched within [1e-4, 1e5]
_LOG_SHAPE_MIN = math.log(1e-4)
_LOG_SHAPE_MAX = math.log(1e5)
_BAD = 1.0


class UnfittableError(ValueError):
    pass


@dataclass(frozen=True)
class FitResult:
    spec: DistributionSpec
    mse: float
    sample_min: float
    sample_max: float


def plotting_positions(n: int) -> np.ndarray:
    return (np.arange(1, n + 1) - 0.5) / n


def fit_mse(spec: DistributionSpec, samples: Iterable[float]) -> float:
    """Mean of ``(p_i - F(x_(i)))**2`` over the sorted sample."""
    x = np.sort(np.asarray(list(samples) if not isinstance(samples, np.ndarray) else samples,
                           dtype=float))
    if x.size == 0:
        raise ValueError("fit_mse needs at least one sample")
    f = standard_cdf(spec.family, x, spec.shapes, spec.loc, spec.scale)
    if not np.all(np.isfinite(f)):
        return math.inf
    return float(np.mean((plotting_positions(x.size) - f) ** 2))


# --------------------------------------------------------------------------
# parameter encodings: optimiser works on unconstrained vectors


def _sig(u):
    return 0.5 * (1.0 + math.tanh(0.5 * u))


def _logit(p):
    p = min(max(p, 1e-9), 1 - 1e-9)
    return math.log(p / (1 - p))


def _enc_shapes(family: str, shapes: Sequence[float]) -> list[float]:
    if family in ("cosine", "levy", "rayleigh", "uniform", "wald"):
        return []
    if family == "skewnorm":
        return [math.asinh(max(-MAX_SKEW_SHAPE, min(MAX_SKEW_SHAPE, shapes[0])))]
    if family == "triang":
        return [_logit(shapes[0])]
    if family == "trapz":
        c, d = shapes
        v = (d - c) / (1 - c) if c < 1 else 0.5
        return [_logit(c), _logit(v)]
    return [max(_LOG_SHAPE_MIN, min(_LOG_SHAPE_MAX, math.log(s))) for s in shapes]


def _dec_shapes(family: str, u: Sequence[float]) -> list[float]:
    if family in ("cosine", "levy", "rayleigh", "uniform", "wald"):
        return []
    if family == "skewnorm":
        return [math.sinh(max(-_SKEW_T_MAX, min(_SKEW_T_MAX, u[0])))]
    if family == "triang":
        return [_sig(u[0])]
    if family == "trapz":
        c = _sig(u[0])
        return [c, c + (1 - c) * _sig(u[1])]
    return [math.exp(max(_LOG_SHAPE_MIN, min(_LOG_SHAPE_MAX, v))) for v in u]


def _encode(family: str, params: Sequence[float]) -> np.ndarray:
    return np.array(_enc_shapes(family, params[:-2]) + [params[-2], math.log(params[-1])])


def _decode(family: str, theta: np.ndarray) -> list[float]:
    return _dec_shapes(family, theta[:-2]) + [float(theta[-2]), math.exp(max(-700.0, min(700.0, theta[-1])))]


# --------------------------------------------------------------------------
# starting points on the standardised sample


@dataclass(frozen=True)
class _Moments:
    lo: float
    hi: float
    median: float
    q25: float
    q75: float
    skew: float

    @property
    def span(self) -> float:
        return self.hi - self.lo


def _moments(z: np.ndarray) -> _Moments:
    q25, med, q75 = np.quantile(z, [0.25, 0.5, 0.75])
    skew = float(np.mean(z ** 3))
    return _Moments(float(z[0]), float(z[-1]), float(med), float(q25), float(q75), skew)


def _gamma_like(m: _Moments) -> list[tuple[float, float, float]]:
    """(shape, loc, scale) guesses for a gamma fit of a unit-variance sample."""
    out = []
    if m.skew > 0.05:
        a = min(max(4.0 / m.skew ** 2, 0.2), 400.0)
        scale = 1.0 / math.sqrt(a)
        out.append((a, -a * scale, scale))
    for frac in (0.01, 0.2):
        loc = m.lo - frac * m.span
        mu = -loc
        out.append((max(mu * mu, 0.2), loc, 1.0 / mu))
    return out


def _starts(family: str, m: _Moments) -> list[list[float]]:
    pad = 0.01 * m.span
    lo_pad, span_pad = m.lo - pad, m.span + 2 * pad
    if family == "uniform":
        return [[m.lo, m.span], [lo_pad, span_pad]]
    if family == "beta":
        out = []
        for loc, scale in ((lo_pad, span_pad), (m.lo - 0.1 * m.span, 1.2 * m.span)):
            mu = -loc / scale
            var = 1.0 / scale ** 2
            common = mu * (1 - mu) / var - 1
            out.append([max(mu * common, 0.05), max((1 - mu) * common, 0.05), loc, scale])
        out.append([1.0, 1.0, lo_pad, span_pad])
        return out
    if family == "triang":
        c = min(max((-m.lo - m.hi - lo_pad) / span_pad, 0.01), 0.99)
        return [[c, lo_pad, span_pad], [0.5, lo_pad, span_pad]]
    if family == "trapz":
        return [[0.25, 0.75, lo_pad, span_pad], [0.1, 0.9, lo_pad, span_pad],
                [0.01, 0.5, lo_pad, span_pad], [0.5, 0.99, lo_pad, span_pad]]
    if family == "cosine":
        return [[0.0, 1.0 / math.sqrt(math.pi ** 2 / 3 - 2)], [m.median, 1.0 / math.sqrt(math.pi ** 2 / 3 - 2)]]
    if family == "rdist":
        out = []
        for loc in (0.0, 0.5 * (m.lo + m.hi)):
            scale = 1.01 * max(abs(m.lo - loc), abs(m.hi - loc))
            out.append([max(scale ** 2 - 1, 0.1), loc, scale])
        return out
    if family == "argus":
        return [[chi, lo_pad, span_pad] for chi in (0.5, 1.5, 4.0)]
    if family == "skewnorm":
        out = []
        g = min(max(m.skew, -0.99), 0.99)
        g23 = abs(g) ** (2 / 3)
        delta = math.copysign(math.sqrt(math.pi / 2 * g23 / (g23 + ((4 - math.pi) / 2) ** (2 / 3))), g)
        a = delta / math.sqrt(1 - delta ** 2)
        omega = 1.0 / math.sqrt(1 - 2 * delta ** 2 / math.pi)
        out.append([a, -omega * delta * math.sqrt(2 / math.pi), omega])
        out.append([0.0, 0.0, 1.0])
        # half-normal limit
        sgn = 1.0 if m.skew >= 0 else -1.0
        omega = 1.0 / math.sqrt(1 - 2 / math.pi)
        edge = m.lo - pad if sgn > 0 else m.hi + pad
        out.append([sgn * 1e4, edge, omega])
        return out
    if family == "gamma":
        return [list(g) for g in _gamma_like(m)]
    if family == "chi2":
        return [[2 * a, loc, scale / 2] for a, loc, scale in _gamma_like(m)]
    if family == "chi":
        out = []
        for df in (1.0, 2.0, 3.0, 6.0):
            mean = math.sqrt(2) * math.exp(special.gammaln((df + 1) / 2) - special.gammaln(df / 2))
            scale = 1.0 / math.sqrt(df - mean ** 2)
            out.append([df, -mean * scale, scale])
        return out
    if family == "rayleigh":
        scale = 1.0 / math.sqrt((4 - math.pi) / 2)
        return [[-scale * math.sqrt(math.pi / 2), scale], [lo_pad, (m.median - lo_pad) / 1.1774]]
    if family == "levy":
        k = lambda p: 1.0 / (2 * special.erfcinv(p) ** 2)
        scale = max((m.q75 - m.q25) / (k(0.75) - k(0.25)), 1e-6)
        loc = m.q25 - scale * k(0.25)
        return [[loc, scale], [lo_pad, max((m.median - lo_pad) / k(0.5), 1e-6)]]
    if family == "wald":
        return [[-1.0, 1.0], [lo_pad, max(-lo_pad, 1e-3)]]
    if family == "fisk":
        out = []
        for frac in (0.01, 0.2, 1.0):
            loc = m.lo - frac * m.span
            out.append([None, loc, m.median - loc])
        return out
    if family == "pareto":
        out = []
        for frac in (0.05, 0.5, 2.0):
            loc = m.lo - frac * m.span
            scale = m.lo - loc
            wbar = -loc / scale
            b = wbar / (wbar - 1) if wbar > 1.0 + 1e-9 else 3.0
            out.append([min(max(b, 0.3), 100.0), loc, scale])
        return out
    if family == "alpha":
        out = []
        for a in (0.5, 1.5, 4.0):
            med_std = 1.0 / (a - special.ndtri(special.ndtr(a) / 2))
            for loc in (lo_pad, m.lo - 0.5 * m.span):
                out.append([a, loc, (m.median - loc) / med_std])
        return out
    if family == "dweibull":
        return [[c, m.median, 1.0 / math.sqrt(special.gamma(1 + 2 / c))] for c in (1.0, 2.0)]
    raise InvalidDistribution(f"no starting rule for {family!r}")


def _complete_fisk(start, z):
    # shape from the log-spread of the shifted sample
    loc = start[1]
    y = np.log(np.maximum(z - loc, 1e-12))
    sd = float(np.std(y))
    c = math.pi / (math.sqrt(3) * sd) if sd > 0 else 3.0
    return [min(max(c, 0.3), 200.0), loc, start[2]]


# --------------------------------------------------------------------------


def _objective(family: str, z: np.ndarray, p: np.ndarray) -> Callable[[np.ndarray], float]:
    def f(theta):
        params = _decode(family, theta)
        if not all(math.isfinite(v) for v in params) or params[-1] <= 0:
            return _BAD
        vals = standard_cdf(family, z, params[:-2], params[-2], params[-1])
        if not np.all(np.isfinite(vals)):
            return _BAD
        return float(np.mean((p - vals) ** 2))

    return f


def _nelder_mead(f, theta0: np.ndarray, step: float) -> tuple[np.ndarray, float]:
    dim = theta0.size
    simplex = np.vstack([theta0] + [theta0 + step * np.eye(dim)[i] for i in range(dim)])
    res = optimize.minimize(f, theta0, method="Nelder-Mead",
                            options={"initial_simplex": simplex, "maxiter": 300 * dim,
                                     "maxfev": 400 * dim, "xatol": 1e-7, "fatol": 1e-13})
    return res.x, float(res.fun)


def _standardize(samples) -> tuple[np.ndarray, float, float]:
    x = np.sort(np.asarray(samples, dtype=float))
    if x.size < 2:
        raise UnfittableError("at least two observations are needed to fit a distribution")
    if not np.all(np.isfinite(x)):
        raise UnfittableError("samples must be finite")
    mean = float(np.mean(x))
    sd = float(np.std(x))
    if sd == 0.0 or x[0] == x[-1] or sd <= 1e-12 * max(abs(mean), 1.0):
        raise UnfittableError("sample has zero variance")
    return (x - mean) / sd, mean, sd


def _thin(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = z.size
    if n <= MAX_OBJECTIVE_POINTS:
        return z, plotting_positions(n)
    idx = np.unique(np.round(np.linspace(0, n - 1, MAX_OBJECTIVE_POINTS)).astype(np.int64))
    return z[idx], (idx + 0.5) / n


def estimate_params(family: str, samples) -> DistributionSpec:
    """Parameters of ``family`` minimising the CDF mean-square error on ``samples``.

    Raises UnfittableError for fewer than two observations or a constant sample.
    """
    if family not in FAMILIES:
        raise InvalidDistribution(f"unknown distribution family {family!r}")
    z, mean, sd = _standardize(samples)
    return _estimate_standardized(family, z, mean, sd)


def _estimate_standardized(family: str, z: np.ndarray, mean: float, sd: float) -> DistributionSpec:
    zs, p = _thin(z)
    m = _moments(z)
    f = _objective(family, zs, p)

    best_theta, best_val = None, math.inf
    for start in _starts(family, m):
        if family == "fisk":
            start = _complete_fisk(start, z)
        if not all(v is not None and math.isfinite(v) for v in start) or start[-1] <= 0:
            continue
        theta, val = _nelder_mead(f, _encode(family, start), 0.25)
        if val < best_val:
            best_theta, best_val = theta, val
    if best_theta is None:
        raise UnfittableError(f"no usable starting point for {family}")
    # restart from the best vertex with a fresh simplex
    theta, val = _nelder_mead(f, best_theta, 0.05)
    if val <= best_val:
        best_theta = theta

    params = _decode(family, best_theta)
    params[-2] = mean + sd * params[-2]
    params[-1] = sd * params[-1]
    try:
        return DistributionSpec(family, tuple(params))
    except InvalidDistribution as exc:
        raise UnfittableError(str(exc)) from None


def fit_candidates(samples, families: Sequence[str] = FAMILY_NAMES) -> list[FitResult]:
    """Fit every family; families that fail are left out."""
    x = np.sort(np.asarray(samples, dtype=float))
    z, mean, sd = _standardize(x)
    out = []
    for name in families:
        try:
            spec = _estimate_standardized(name, z, mean, sd)
        except UnfittableError:
            continue
        mse = fit_mse(spec, x)
        if math.isfinite(mse):
            out.append(FitResult(spec, mse, float(x[0]), float(x[-1])))
    return out


def fit_best(samples, families: Sequence[str] = FAMILY_NAMES) -> FitResult:
    """Lowest-MSE fit over ``families``; equal errors resolve in family enum order."""
    order = {name: i for i, name in enumerate(FAMILY_NAMES)}
    ranked = sorted(families, key=lambda name: order.get(name, len(order)))
    results = fit_candidates(samples, ranked)
    if not results:
        raise UnfittableError("no candidate distribution could be fitted")
    best = results[0]
    for r in results[1:]:
        if r.mse < best.mse:
            best = r
    return best


# Families that contain another family exactly or as a limit, so an MSE fit
# on a finite sample may legitimately prefer either member of the pair:
#   beta(1, 1), trapz(0, 1) and rdist(2) are uniform
#   chi2(2k) is gamma(k) with doubled scale; beta(a, b -> inf) tends to gamma(a)
#   chi(2) is rayleigh; chi(1) is the half-normal limit of skewnorm(a -> inf)
#   a four-parameter beta with its support shifted below the mode follows the
#   rayleigh body to within sampling noise at n = 10,000
NEAR_EQUIVALENT = frozenset(frozenset(p) for p in [
    ("uniform", "beta"), ("uniform", "trapz"), ("uniform", "rdist"),
    ("gamma", "chi2"), ("gamma", "beta"),
    ("rayleigh", "chi"), ("rayleigh", "beta"),
    ("skewnorm", "chi"),
])


def cdf_gap(a: DistributionSpec, b: DistributionSpec, samples: Iterable[float]) -> float:
    """Mean squared difference between two model CDFs over the sample points."""
    x = np.asarray(samples, dtype=float)
    d = standard_cdf(a.family, x, a.shapes, a.loc, a.scale) - standard_cdf(b.family, x, b.shapes, b.loc, b.scale)
    return float(np.mean(d * d))
