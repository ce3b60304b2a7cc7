"""Wiener-Hopf factors and the laws of the running extrema at e(q).

For rational models the factors are finite products over the cleared
exponent-equation roots and the jump-transform poles; partial fractions
turn them into exact exponential mixtures (route A).  Density-specified
spectrally negative models evaluate the factor ratio directly and invert
it numerically by Gaver-Stehfest with a Talbot cross-check (route B).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import integrate

from .errors import PoleError, RegularityError
from .grids import GridFunction, GridSpec
from .laplace import invert_cdf
from .levy_models import LevySpec, laplace_exponent, laplace_exponent_derivative
from .mixtures import ExpMixture, mixture_from_transform
from .roots import QContext, cramer_lundberg_roots

__all__ = ["ExtremaLaw", "factor_sup", "factor_inf", "sup_law", "inf_law",
           "inf_law_cdf", "default_dx", "tail_length", "default_inf_grid",
           "large_s_ratio_estimates"]

_MASS_TOL = 1e-8
_ATOM_PROBE_S = 1e8


# ---------------------------------------------------------------------------
# factors


def _pole_list(model: LevySpec, side: str) -> list:
    spec = model.pos_jumps if side == "up" else model.neg_jumps
    if spec.kind in ("none", "density"):
        return []
    return spec.pole_rates()


def _product(entries, s):
    """prod (r/(r+s))^m over root entries times prod ((p+s)/p)^n over poles."""
    roots, poles = entries
    val = np.ones_like(np.asarray(s, dtype=complex))
    s = np.asarray(s, dtype=complex)
    for r, m in roots:
        denom = r + s
        if np.any(np.abs(denom) < 1e-13 * max(1.0, abs(r))):
            raise PoleError(f"factor evaluated at its pole s = {-r}")
        val = val * (r / denom) ** m
    for p, n in poles:
        val = val * ((p + s) / p) ** n
    return val


def _sup_entries(ctx: QContext, process: str):
    sup_set, _ = ctx.roots_for(process)
    roots = [(r, m) for r, m in sup_set.roots]
    poles = _pole_list(ctx.model, "up")
    return roots, poles


def _inf_entries(ctx: QContext, process: str):
    _, inf_set = ctx.roots_for(process)
    roots = [(-r, m) for r, m in inf_set.roots]     # decay rates rho = -root
    poles = _pole_list(ctx.model, "down")
    return roots, poles


def _scalarize(val):
    arr = np.asarray(val)
    if arr.ndim == 0:
        v = complex(arr)
        return v.real if abs(v.imag) <= 1e-9 * max(1.0, abs(v)) else v
    return val


def factor_sup(ctx: QContext, process: str, s):
    """E[exp(-s * running sup at e(q))] for X, or the same under the
    refracted drift for Y; equals rate/(rate+s) for spectrally negative
    models with rate Phi(q) (X) or varphi(q) (Y)."""
    if ctx.model.is_rational:
        return _scalarize(_product(_sup_entries(ctx, process), s))
    rate = ctx.rate_for(process)
    return _scalarize(rate / (rate + np.asarray(s, dtype=complex)))


def factor_inf(ctx: QContext, process: str, s):
    """E[exp(s * running inf at e(q))]; always in (0, 1] for s >= 0.

    Rational models use the root/pole product form (no removable
    singularities); density-specified spectrally negative models use the
    exponent-ratio form with the L'Hopital limit at s = Phi(q) (or
    varphi(q) for Y).
    """
    if ctx.model.is_rational:
        return _scalarize(_product(_inf_entries(ctx, process), s))

    model, q, delta = ctx.model, ctx.q, ctx.delta
    rate = ctx.rate_for(process)
    shift = 0.0 if process == "X" else delta

    def one(sv):
        sv = complex(sv)
        if abs(sv - rate) < 1e-8 * max(1.0, rate):
            dpsi = laplace_exponent_derivative(model, rate) - shift
            return q / rate / dpsi
        if sv.imag == 0.0:
            psi_v = laplace_exponent(model, sv.real) - shift * sv.real
        else:
            psi_v = _psi_complex(model, sv) - shift * sv
        den = q - psi_v
        if abs(den) < 1e-13 * max(1.0, q):
            raise PoleError(f"non-removable singularity at s = {sv}")
        return (q / rate) * (rate - sv) / den

    arr = np.asarray(s)
    if arr.ndim == 0:
        return _scalarize(one(complex(arr)))
    return np.asarray([_scalarize(one(v)) for v in arr.ravel()]).reshape(arr.shape)


def _psi_complex(model: LevySpec, z: complex) -> complex:
    """Exponent at complex argument for density-specified models
    (real/imag quadratures of the compensated integrand)."""
    dens = model.levy_density

    def big(f):
        return dens.integrate(f, 1.0, dens.upper)

    def small(f):
        return dens.integrate(f, dens.lower, 1.0)

    re = (big(lambda x: 1.0 - math.exp(-z.real * x) * math.cos(z.imag * x))
          + small(lambda x: 1.0 - math.exp(-z.real * x) * math.cos(z.imag * x)
                  - z.real * x))
    im = (big(lambda x: math.exp(-z.real * x) * math.sin(z.imag * x))
          + small(lambda x: math.exp(-z.real * x) * math.sin(z.imag * x)
                  - z.imag * x))
    jump_part = complex(re, im)
    return 0.5 * model.gaussian_coeff**2 * z * z + model.drift * z - jump_part


# ---------------------------------------------------------------------------
# extrema laws


@dataclass(frozen=True)
class ExtremaLaw:
    """Law of a running extremum at e(q).

    The continuous part is stored as the law of the magnitude on (0, inf):
    the actual support is [0, inf) for ``side='sup'`` and (-inf, 0] for
    ``side='inf'``.  ``atom_at_zero`` is the point mass at 0.
    """

    side: str
    process: str
    representation: str       # 'exponential-rate' | 'mixture-of-exponentials' | 'grid'
    atom_at_zero: float
    mixture: Optional[ExpMixture] = None
    grid: Optional[GridFunction] = None

    def __post_init__(self):
        if self.side not in ("sup", "inf"):
            raise ValueError("side must be 'sup' or 'inf'")
        if self.mixture is not None:
            mass = self.atom_at_zero + self.mixture.total_weight()
            if abs(mass - 1.0) > _MASS_TOL:
                raise ValueError(f"extrema law mass {mass} != 1")

    @property
    def rate(self) -> float:
        if self.representation != "exponential-rate":
            raise ValueError("not a pure exponential law")
        return float(np.real(self.mixture.rates[0]))

    def cdf(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=float))
        if self.grid is not None and self.mixture is None:
            vals = self.grid(z)
            if self.side == "sup":
                vals = np.where(z < self.grid.x0, 0.0, vals)
                vals = np.where(z >= self.grid.x1, 1.0, vals)
            else:
                vals = np.where(z > self.grid.x1, 1.0, vals)
                vals = np.where(z <= self.grid.x0, 0.0, vals)
            return vals
        if self.side == "sup":
            out = self.atom_at_zero + self.mixture.cdf(np.maximum(z, 0.0))
            return np.where(z < 0.0, 0.0, out)
        out = self.mixture.sf(-z) + self.atom_at_zero
        return np.where(z >= 0.0, 1.0, out)

    def density(self, z) -> np.ndarray:
        """Continuous-part density on the actual support."""
        z = np.atleast_1d(np.asarray(z, dtype=float))
        if self.mixture is None:
            d = self.grid.derivative().values
            g = GridFunction(self.grid.x0, self.grid.dx, d, kind="raw")
            return np.maximum(g(z), 0.0)
        mag = z if self.side == "sup" else -z
        return self.mixture.pdf(mag)

    def transform(self, s):
        """E[e^{-s sup}] or E[e^{s inf}] of the whole law at s >= 0."""
        if self.mixture is None:
            raise ValueError("transform available for mixture laws only")
        return self.atom_at_zero + self.mixture.transform(s)


def _mixture_from_product(entries) -> tuple:
    """(atom, ExpMixture) inverting prod (r/(r+s))^m prod ((p+s)/p)^n."""
    roots, poles = entries
    num = np.asarray([1.0 + 0.0j])
    scale = 1.0 + 0.0j
    for r, m in roots:
        scale *= complex(r) ** m
    for p, n in poles:
        scale /= complex(p) ** n
        num = P.polymul(num, P.polypow(np.asarray([complex(p), 1.0 + 0.0j]), n))
    num = num * scale
    den_roots = [(-complex(r), int(m)) for r, m in roots]
    return mixture_from_transform(num, den_roots, den_lead=1.0)


def sup_law(ctx: QContext, process: str) -> ExtremaLaw:
    """Law of the running supremum at e(q).

    Spectrally negative members are exponential with rate Phi(q) (X) or
    varphi(q) (Y) and no atom.  Two-sided rational models return the
    exact mixture with its atom at 0 (positive for bounded-variation
    paths that are irregular upward)."""
    if ctx.model.is_spectrally_negative:
        rate = ctx.rate_for(process)
        mix = ExpMixture((1.0,), (rate,), (1,))
        return ExtremaLaw("sup", process, "exponential-rate", 0.0, mixture=mix)
    atom, mix = _mixture_from_product(_sup_entries(ctx, process))
    if atom < -_MASS_TOL:
        raise RegularityError(f"negative atom {atom} in sup law")
    rep = "mixture-of-exponentials"
    return ExtremaLaw("sup", process, rep, max(atom, 0.0), mixture=mix)


def inf_law(ctx: QContext, process: str,
            grid: Optional[GridSpec] = None, route: str = "auto") -> ExtremaLaw:
    """Law of the running infimum at e(q).

    route 'mixture' (A): exact partial-fraction mixture, rational models.
    route 'inversion' (B): numerical Laplace inversion of the factor on a
    grid (the only route for density-specified models).
    """
    if route == "auto":
        route = "mixture" if ctx.model.is_rational else "inversion"
    if route == "mixture":
        atom, mix = _mixture_from_product(_inf_entries(ctx, process))
        if atom < -_MASS_TOL:
            raise RegularityError(f"negative atom {atom} in inf law")
        return ExtremaLaw("inf", process, "mixture-of-exponentials",
                          max(atom, 0.0), mixture=mix)
    if grid is None:
        grid = default_inf_grid(ctx)
    gf = _inf_cdf_by_inversion(ctx, process, grid)
    atom = float(np.real(factor_inf(ctx, process, _ATOM_PROBE_S)))
    return ExtremaLaw("inf", process, "grid", atom, grid=gf)


def _inf_cdf_by_inversion(ctx: QContext, process: str,
                          grid: GridSpec) -> GridFunction:
    """Route B: P(inf <= z) from  E[e^{s inf}] = 1 - s * int e^{sz} P(inf<=z) dz."""
    zs = grid.points()
    if zs[-1] > 1e-12 or zs[0] >= 0.0:
        raise ValueError("infimum grid must cover (-L, 0]")

    def h_hat(s):
        return (1.0 - float(np.real(factor_inf(ctx, process, float(s))))) / float(s)

    def h_hat_complex(s):
        return (1.0 - complex(factor_inf(ctx, process, complex(s)))) / complex(s)

    ts = -zs[zs < 0.0]
    vals = invert_cdf(h_hat, ts, complex_transform=h_hat_complex)
    out = np.ones(zs.size)
    out[zs < 0.0] = vals
    out = np.maximum.accumulate(np.clip(out, 0.0, 1.0))
    return GridFunction(zs[0], grid.dx, out, kind="cdf")


def inf_law_cdf(ctx: QContext, process: str,
                grid: Optional[GridSpec] = None,
                route: str = "auto") -> GridFunction:
    """CDF of the running infimum at e(q) sampled on a uniform grid."""
    if grid is None:
        grid = default_inf_grid(ctx)
    if route == "auto":
        route = "mixture" if ctx.model.is_rational else "inversion"
    if route == "inversion":
        return _inf_cdf_by_inversion(ctx, process, grid)
    law = inf_law(ctx, process, route="mixture")
    return GridFunction(grid.left, grid.dx, law.cdf(grid.points()), kind="cdf")


# ---------------------------------------------------------------------------
# grid geometry defaults


def decay_rates(ctx: QContext) -> list:
    rates = [ctx.phi_q, ctx.varphi_q]
    for pair in (ctx.x_roots, ctx.y_roots):
        if pair is not None:
            for r, _ in pair[1].roots:
                rates.append(abs(r.real))
    return [r for r in rates if r > 0.0]


def tail_length(ctx: QContext, tol: float = 1e-8) -> float:
    """Window length L with exp(-r L) < tol for the slowest decay rate."""
    r = min(decay_rates(ctx))
    return -math.log(tol) / r


def default_dx(ctx: QContext) -> float:
    """dx = 2^-9 * max(1, 1/min(Phi, varphi)): at least 2^9 samples per
    unit decay length of the steepest exponential."""
    return 2.0 ** -9 * max(1.0, 1.0 / min(ctx.phi_q, ctx.varphi_q))


def default_inf_grid(ctx: QContext) -> GridSpec:
    dx = default_dx(ctx)
    L = tail_length(ctx)
    n = int(np.ceil(L / dx))
    return GridSpec(-n * dx, 0.0, dx)


# ---------------------------------------------------------------------------
# admissibility proxies


def large_s_ratio_estimates(model: LevySpec, q: float, delta: float,
                            s_values=(1e4, 1e6)) -> dict:
    """Numerically estimated large-s limits of the factor ratios entered
    in the two-sided admissibility condition; exposed as evidence, not as
    a decision procedure."""
    x_sup, x_inf = cramer_lundberg_roots(model, q, 0.0)
    y_sup, y_inf = cramer_lundberg_roots(model, q, delta)
    up, down = _pole_list(model, "up"), _pole_list(model, "down")
    out = {}
    for s in s_values:
        fs_x = _product(([(r, m) for r, m in x_sup.roots], up), s)
        fs_y = _product(([(r, m) for r, m in y_sup.roots], up), s)
        fi_x = _product(([(-r, m) for r, m in x_inf.roots], down), s)
        fi_y = _product(([(-r, m) for r, m in y_inf.roots], down), s)
        out[f"sup_ratio@{s:.0e}"] = float(np.real(fs_y / fs_x))
        out[f"inf_ratio@{s:.0e}"] = float(np.real(fi_x / fi_y))
    return out
