"""The candidate distribution families and their numerics.

Parameters are laid out flat as ``[shape..., loc, scale]``, the same layout
used in summary files.  CDFs are closed forms over ``scipy.special`` on the
standardised argument ``u = (x - loc) / scale`` (the fitter calls them
thousands of times, and several ``scipy.stats`` CDFs are orders of magnitude
slower).  PDFs and the initial quantile guess come from ``scipy.stats``;
quantiles are then polished by bisection on the CDF so that
``cdf(quantile(p))`` reproduces ``p`` to 1e-10 wherever the float grid allows.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.stats as st
from scipy import special as sc

from wfsynth.rng import open_uniform

MAX_SKEW_SHAPE = 1e9

_QUANTILE_TOL = 1e-10
_BISECT_STEPS = 200


def _cdf_alpha(u, a):
    v = np.where(u > 0, u, 1.0)
    return np.where(u > 0, sc.ndtr(a - 1.0 / v) / sc.ndtr(a), 0.0)


def _cdf_argus(u, chi):
    def psi(x):
        return sc.ndtr(x) - x * np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi) - 0.5
    w = np.sqrt(np.clip(1.0 - u * u, 0.0, 1.0))
    inner = 1.0 - psi(chi * w) / psi(chi)
    return np.where(u <= 0, 0.0, np.where(u >= 1, 1.0, inner))


def _ppf_argus(p, chi):
    # psi(y) = P(3/2, y^2/2) / 2, so the survival equation inverts in closed form
    g = sc.gammainc(1.5, 0.5 * chi * chi)
    w2 = 2.0 * sc.gammaincinv(1.5, (1.0 - p) * g) / (chi * chi)
    return np.sqrt(np.clip(1.0 - w2, 0.0, 1.0))


def _cdf_trapz(u, c, d):
    denom = 1.0 + d - c
    left = u * u / np.where(c > 0, c * denom, 1.0)
    mid = (2.0 * u - c) / denom
    right = 1.0 - (1.0 - u) ** 2 / np.where(d < 1, (1.0 - d) * denom, 1.0)
    out = np.where(u < c, left, np.where(u < d, mid, right))
    return np.where(u <= 0, 0.0, np.where(u >= 1, 1.0, out))


def _cdf_triang(u, c):
    left = u * u / (c if c > 0 else 1.0)
    right = 1.0 - (1.0 - u) ** 2 / ((1.0 - c) if c < 1 else 1.0)
    out = np.where(u < c, left, right)
    return np.where(u <= 0, 0.0, np.where(u >= 1, 1.0, out))


def _cdf_wald(u):
    v = np.where(u > 0, u, 1.0)
    r = np.sqrt(1.0 / v)
    out = sc.ndtr(r * (v - 1.0)) + np.exp(2.0 + sc.log_ndtr(-r * (v + 1.0)))
    return np.where(u > 0, np.minimum(out, 1.0), 0.0)


def _cdf_dweibull(u, c):
    half = 0.5 * np.exp(-np.abs(u) ** c)
    return np.where(u >= 0, 1.0 - half, half)


def _cdf_fisk(u, c):
    v = np.where(u > 0, u, 1.0)
    return np.where(u > 0, 1.0 / (1.0 + v ** (-c)), 0.0)


def _cdf_levy(u):
    v = np.where(u > 0, u, 1.0)
    return np.where(u > 0, sc.erfc(1.0 / np.sqrt(2.0 * v)), 0.0)


def _cdf_pareto(u, b):
    v = np.where(u > 1, u, 1.0)
    return np.where(u > 1, -np.expm1(-b * np.log(v)), 0.0)


# standardised CDFs; shapes are scalars, u an array
_STD_CDF = {
    "alpha": _cdf_alpha,
    "argus": _cdf_argus,
    "beta": lambda u, a, b: sc.betainc(a, b, np.clip(u, 0.0, 1.0)),
    "chi": lambda u, df: sc.gammainc(0.5 * df, 0.5 * np.where(u > 0, u, 0.0) ** 2),
    "chi2": lambda u, df: sc.gammainc(0.5 * df, 0.5 * np.maximum(u, 0.0)),
    "cosine": lambda u: np.clip((math.pi + np.clip(u, -math.pi, math.pi)
                                 + np.sin(np.clip(u, -math.pi, math.pi))) / (2 * math.pi), 0.0, 1.0),
    "dweibull": _cdf_dweibull,
    "fisk": _cdf_fisk,
    "gamma": lambda u, a: sc.gammainc(a, np.maximum(u, 0.0)),
    "levy": _cdf_levy,
    "pareto": _cdf_pareto,
    "rayleigh": lambda u: -np.expm1(-0.5 * np.where(u > 0, u, 0.0) ** 2),
    "rdist": lambda u, c: sc.betainc(0.5 * c, 0.5 * c, np.clip(0.5 * (u + 1.0), 0.0, 1.0)),
    "skewnorm": lambda u, a: np.clip(sc.ndtr(u) - 2.0 * sc.owens_t(u, a), 0.0, 1.0),
    "trapz": _cdf_trapz,
    "triang": _cdf_triang,
    "uniform": lambda u: np.clip(u, 0.0, 1.0),
    "wald": _cdf_wald,
}


def standard_cdf(family: str, x, shapes, loc: float, scale: float) -> np.ndarray:
    """CDF of ``family`` with flat parameters, no validation (optimiser hot path)."""
    with np.errstate(all="ignore"):
        u = (np.asarray(x, dtype=float) - loc) / scale
        return _STD_CDF[family](u, *shapes)


def _pos(x: float) -> bool:
    return math.isfinite(x) and x > 0


@dataclass(frozen=True)
class Family:
    name: str
    dist: st.rv_continuous
    shapes: tuple[str, ...]
    check: Callable[[Sequence[float]], bool]

    @property
    def nparams(self) -> int:
        return len(self.shapes) + 2


def _trap_ok(s):
    c, d = s
    return math.isfinite(c) and math.isfinite(d) and 0.0 <= c <= d <= 1.0


_FAMILY_LIST = [
    Family("alpha", st.alpha, ("a",), lambda s: _pos(s[0])),
    Family("argus", st.argus, ("chi",), lambda s: _pos(s[0])),
    Family("beta", st.beta, ("a", "b"), lambda s: _pos(s[0]) and _pos(s[1])),
    Family("chi", st.chi, ("df",), lambda s: _pos(s[0])),
    Family("chi2", st.chi2, ("df",), lambda s: _pos(s[0])),
    Family("cosine", st.cosine, (), lambda s: True),
    Family("dweibull", st.dweibull, ("c",), lambda s: _pos(s[0])),
    Family("fisk", st.fisk, ("c",), lambda s: _pos(s[0])),
    Family("gamma", st.gamma, ("a",), lambda s: _pos(s[0])),
    Family("levy", st.levy, (), lambda s: True),
    Family("pareto", st.pareto, ("b",), lambda s: _pos(s[0])),
    Family("rayleigh", st.rayleigh, (), lambda s: True),
    Family("rdist", st.rdist, ("c",), lambda s: _pos(s[0])),
    Family("skewnorm", st.skewnorm, ("a",), lambda s: math.isfinite(s[0])),
    Family("trapz", st.trapezoid, ("c", "d"), _trap_ok),
    Family("triang", st.triang, ("c",), lambda s: math.isfinite(s[0]) and 0.0 <= s[0] <= 1.0),
    Family("uniform", st.uniform, (), lambda s: True),
    Family("wald", st.wald, (), lambda s: True),
]

FAMILIES: dict[str, Family] = {f.name: f for f in _FAMILY_LIST}
# enum order doubles as the tie-break order when fits are equally good
FAMILY_NAMES: tuple[str, ...] = tuple(FAMILIES)


class InvalidDistribution(ValueError):
    pass


@dataclass(frozen=True)
class DistributionSpec:
    family: str
    params: tuple[float, ...]

    def __post_init__(self):
        fam = FAMILIES.get(self.family)
        if fam is None:
            raise InvalidDistribution(f"unknown distribution family {self.family!r}")
        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, "params", params)
        if len(params) != fam.nparams:
            raise InvalidDistribution(
                f"{self.family} takes {fam.nparams} parameters {fam.shapes + ('loc', 'scale')}, "
                f"got {len(params)}")
        if not math.isfinite(params[-2]):
            raise InvalidDistribution(f"{self.family}: loc must be finite")
        if not _pos(params[-1]):
            raise InvalidDistribution(f"{self.family}: scale must be positive, got {params[-1]}")
        if not fam.check(params[:-2]):
            raise InvalidDistribution(f"{self.family}: illegal shape parameters {params[:-2]}")

    @property
    def shapes(self) -> tuple[float, ...]:
        return self.params[:-2]

    @property
    def loc(self) -> float:
        return self.params[-2]

    @property
    def scale(self) -> float:
        return self.params[-1]

    @property
    def frozen(self):
        return FAMILIES[self.family].dist(*self.shapes, loc=self.loc, scale=self.scale)

    def to_dict(self) -> dict:
        return {"name": self.family, "params": list(self.params)}

    @classmethod
    def from_dict(cls, d: dict) -> "DistributionSpec":
        return cls(d["name"], tuple(d["params"]))


def _call(fn, x, spec: DistributionSpec):
    with np.errstate(all="ignore"), warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return fn(x, *spec.shapes, loc=spec.loc, scale=spec.scale)


def _scalar_or_array(x, out):
    return float(out) if np.ndim(x) == 0 else np.asarray(out, dtype=float)


def dist_cdf(spec: DistributionSpec, x):
    out = standard_cdf(spec.family, x, spec.shapes, spec.loc, spec.scale)
    return _scalar_or_array(x, out)


def dist_pdf(spec: DistributionSpec, x):
    d = FAMILIES[spec.family].dist
    return _scalar_or_array(x, _call(d.pdf, np.asarray(x, dtype=float), spec))


def support(spec: DistributionSpec) -> tuple[float, float]:
    d = FAMILIES[spec.family].dist
    lo, hi = d.support(*spec.shapes, loc=spec.loc, scale=spec.scale)
    return float(lo), float(hi)


def _bracket(spec: DistributionSpec, p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    lo_s, hi_s = support(spec)
    lo = np.full(p.shape, lo_s)
    hi = np.full(p.shape, hi_s)
    step = spec.scale
    if not math.isfinite(lo_s):
        lo[:] = spec.loc - step
        for _ in range(2100):
            bad = dist_cdf(spec, lo) > p
            if not bad.any():
                break
            lo[bad] = spec.loc - (spec.loc - lo[bad]) * 2.0
    if not math.isfinite(hi_s):
        hi[:] = spec.loc + step
        for _ in range(2100):
            bad = dist_cdf(spec, hi) < p
            if not bad.any():
                break
            hi[bad] = spec.loc + (hi[bad] - spec.loc) * 2.0
    return lo, hi


def _bisect(spec: DistributionSpec, p: np.ndarray) -> np.ndarray:
    lo, hi = _bracket(spec, p)
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        below = dist_cdf(spec, mid) < p
        moved = (mid != lo) & (mid != hi)
        if not moved.any():
            break
        lo = np.where(below & moved, mid, lo)
        hi = np.where(~below & moved, mid, hi)
    err_lo = np.abs(dist_cdf(spec, lo) - p)
    err_hi = np.abs(dist_cdf(spec, hi) - p)
    return np.where(err_lo < err_hi, lo, hi)


def dist_quantile(spec: DistributionSpec, p):
    """Inverse CDF for ``0 < p < 1`` (scalar or array)."""
    arr = np.asarray(p, dtype=float)
    if arr.size and not np.all((arr > 0.0) & (arr < 1.0)):
        raise ValueError("quantile probabilities must lie strictly inside (0, 1)")
    flat = np.atleast_1d(arr).ravel()
    d = FAMILIES[spec.family].dist
    if spec.family == "argus":
        x = spec.loc + spec.scale * _ppf_argus(flat, spec.shapes[0])
    elif "_ppf" in type(d).__dict__:
        x = np.asarray(_call(d.ppf, flat, spec), dtype=float)
    else:
        # scipy's generic ppf root-finds one element at a time
        x = np.full(flat.shape, np.nan)
    err = np.abs(dist_cdf(spec, np.where(np.isfinite(x), x, 0.0)) - flat)
    redo = ~np.isfinite(x) | ~(err <= _QUANTILE_TOL)
    if redo.any():
        x[redo] = _bisect(spec, flat[redo])
    x = x.reshape(np.shape(arr))
    return float(x) if np.ndim(p) == 0 else x


def dist_sample(spec: DistributionSpec, rng: np.random.Generator, size=None):
    """Inverse-transform draws: ``dist_quantile(u)`` with ``u`` uniform on (0, 1)."""
    return dist_quantile(spec, open_uniform(rng, size))
