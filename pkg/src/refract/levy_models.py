"""Levy model catalog: Laplace exponents, path variation, admissibility.

The catalog covers spectrally negative Brownian/jump-diffusion models,
bounded-variation compound Poisson models, two-sided rational jump
diffusions, and density-specified spectrally negative models used by the
staged approximation machinery.

Two drift parameterizations coexist:

* finite-activity models (``levy_density is None``): ``drift`` is the
  actual linear rate mu, so for sigma = 0 it coincides with the
  bounded-variation drift d;
* density-specified models: ``drift`` is the compensated coefficient
  gamma, with small jumps (< 1) compensated in the exponent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from .errors import IntegrationError, PoleError

__all__ = [
    "MixtureTerm", "JumpSpec", "LevyDensity", "LevySpec", "VariationClass",
    "AdmissibilityReport", "laplace_exponent", "laplace_exponent_derivative",
    "classify_and_admit",
    "brownian_motion", "bv_hyperexp", "jump_diffusion",
    "two_sided_jump_diffusion", "tempered_stable_ladder", "power_law_density",
    "cp_positive_drift_up_jumps", "two_sided_bv_negative_drift",
]

_QUAD_TOL = 1e-10
_JUMP_KINDS = ("none", "exponential", "hyper-exponential", "rational-mixture", "density")


@dataclass(frozen=True)
class MixtureTerm:
    """One rational-density component: weight * rate^p z^{p-1}/(p-1)! e^{-rate z}."""

    weight: complex
    rate: complex
    power: int = 1


@dataclass(frozen=True)
class JumpSpec:
    """One-sided jump component of a Levy model.

    ``intensity`` is the Poisson arrival rate; ``terms`` describe the
    normalized jump-size density (weights sum to 1).  ``density`` backs
    the ``density`` kind with an explicit callable on (lower, upper).
    """

    kind: str = "none"
    intensity: float = 0.0
    terms: tuple = ()
    density: Optional[Callable[[np.ndarray], np.ndarray]] = None
    support: tuple = (0.0, np.inf)

    def __post_init__(self):
        if self.kind not in _JUMP_KINDS:
            raise ValueError(f"unknown jump kind {self.kind!r}")
        if self.intensity < 0.0:
            raise ValueError("jump intensity must be nonnegative")
        if self.kind == "none":
            if self.intensity != 0.0 or self.terms:
                raise ValueError("kind 'none' carries no intensity or terms")
            return
        if self.kind == "density":
            if self.density is None:
                raise ValueError("kind 'density' needs a callable")
            return
        if not self.terms:
            raise ValueError(f"kind {self.kind!r} needs mixture terms")
        for t in self.terms:
            if complex(t.rate).real <= 0.0:
                raise ValueError("mixture rates need positive real part")
            if int(t.power) < 1:
                raise ValueError("mixture powers are positive integers")
        total = sum(complex(t.weight) for t in self.terms)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"mixture weights integrate to {total}, expected 1")
        self._check_real_nonnegative_density()

    def _check_real_nonnegative_density(self):
        """Complex parameters are allowed but must pair into a real,
        nonnegative density; checked on a 64-point grid (tol 1e-9)."""
        rmin = min(complex(t.rate).real for t in self.terms)
        z = np.geomspace(1e-3 / rmin, 20.0 / rmin, 64)
        vals = self._density_values(z)
        scale = max(1.0, float(np.max(np.abs(vals))))
        if float(np.max(np.abs(vals.imag))) > 1e-9 * scale:
            raise ValueError("mixture density has a nonvanishing imaginary part")
        if float(vals.real.min()) < -1e-9 * scale:
            raise ValueError("mixture density is negative on the sample grid")

    def _density_values(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        out = np.zeros(z.shape, dtype=complex)
        for t in self.terms:
            w, r, p = complex(t.weight), complex(t.rate), int(t.power)
            out += w * r**p * z**(p - 1) / math.factorial(p - 1) * np.exp(-r * z)
        return out

    @property
    def is_rational(self) -> bool:
        return self.kind in ("exponential", "hyper-exponential", "rational-mixture")

    def transform(self, s) -> complex:
        """Laplace transform of the jump-size density at ``s`` (analytic
        continuation of the rational form; quadrature for densities)."""
        if self.kind == "none":
            return 1.0
        if self.is_rational:
            acc = 0.0 + 0.0j
            for t in self.terms:
                r = complex(t.rate)
                denom = r + s
                if abs(denom) < 1e-12 * max(1.0, abs(r)):
                    raise PoleError(f"jump transform pole at s = {-r}")
                acc += complex(t.weight) * (r / denom) ** int(t.power)
            return acc
        lo, hi = self.support
        hi = min(hi, 1e3)
        val, err = integrate.quad(lambda z: float(np.real(self.density(z))) * math.exp(-np.real(s) * z),
                                  lo, hi, limit=200, epsabs=_QUAD_TOL)
        if not np.isfinite(val):
            raise IntegrationError("jump density transform did not converge")
        return val

    def transform_derivative(self, s) -> complex:
        """d/ds of :meth:`transform` (rational kinds only)."""
        acc = 0.0 + 0.0j
        for t in self.terms:
            r, p = complex(t.rate), int(t.power)
            acc += complex(t.weight) * (-p) * r**p / (r + s) ** (p + 1)
        return acc

    def mean(self) -> float:
        if self.kind == "none":
            return 0.0
        if self.is_rational:
            acc = sum(complex(t.weight) * int(t.power) / complex(t.rate)
                      for t in self.terms)
            return float(np.real(acc))
        lo, hi = self.support
        return integrate.quad(lambda z: z * float(np.real(self.density(z))),
                              lo, min(hi, 1e3), limit=200)[0]

    def pole_rates(self) -> list:
        """(rate, total multiplicity) of the transform's poles."""
        acc = {}
        for t in self.terms:
            key = complex(t.rate)
            acc[key] = max(acc.get(key, 0), int(t.power))
        return sorted(acc.items(), key=lambda kv: (kv[0].real, kv[0].imag))


@dataclass(frozen=True)
class LevyDensity:
    """A (one-sided, downward) Levy density with truncation bounds.

    ``func`` is the density of the Levy measure on (lower, upper); it may
    blow up at 0 as long as int (x^2 ^ 1) Pi(dx) is finite.  ``scales``
    hints interior breakpoints to the adaptive quadrature.
    """

    func: Callable[[np.ndarray], np.ndarray]
    lower: float = 0.0
    upper: float = np.inf
    scales: tuple = ()

    def __call__(self, z):
        return self.func(z)

    def quad_points(self, a: float, b: float) -> list:
        return [s for s in self.scales if a < s < b]

    def integrate(self, f: Callable[[float], float], a: float, b: float) -> float:
        """Adaptive quadrature of f(x)*density(x) over (a, b)."""
        a = max(a, self.lower)
        b = min(b, self.upper)
        if b <= a:
            return 0.0
        pts = self.quad_points(a, b)
        val, err = integrate.quad(lambda x: f(x) * float(self.func(x)), a, b,
                                  limit=400, epsabs=_QUAD_TOL,
                                  points=pts or None)
        if not np.isfinite(val) or err > max(1e-6, 1e-6 * abs(val)):
            raise IntegrationError(
                f"levy density quadrature error {err:.2e} on ({a}, {b})")
        return val


@dataclass(frozen=True)
class LevySpec:
    """A Levy model: Gaussian coefficient, drift, jump specification."""

    gaussian_coeff: float
    drift: float
    neg_jumps: JumpSpec = field(default_factory=JumpSpec)
    pos_jumps: JumpSpec = field(default_factory=JumpSpec)
    levy_density: Optional[LevyDensity] = None
    name: str = ""

    def __post_init__(self):
        if self.gaussian_coeff < 0.0:
            raise ValueError("gaussian coefficient must be nonnegative")
        if self.levy_density is not None:
            if self.neg_jumps.kind != "none" or self.pos_jumps.kind != "none":
                raise ValueError("density-specified models carry no separate jump specs")
            # integrability of the Levy measure near 0 and at the tail
            chk = self.levy_density.integrate(lambda x: min(x * x, 1.0),
                                              self.levy_density.lower,
                                              self.levy_density.upper)
            if not np.isfinite(chk):
                raise ValueError("int (x^2 ^ 1) Pi(dx) diverges on the window")

    @property
    def is_spectrally_negative(self) -> bool:
        return self.pos_jumps.kind == "none"

    @property
    def is_rational(self) -> bool:
        """True when the exponent is a rational function of theta."""
        return (self.levy_density is None
                and (self.neg_jumps.kind == "none" or self.neg_jumps.is_rational)
                and (self.pos_jumps.kind == "none" or self.pos_jumps.is_rational))

    def has_jumps(self) -> bool:
        return (self.neg_jumps.kind != "none" or self.pos_jumps.kind != "none"
                or self.levy_density is not None)

    def pos_pole_min(self) -> float:
        """Smallest positive real pole of the exponent (from up-jump rates)."""
        if self.pos_jumps.kind in ("none", "density"):
            return np.inf
        return min(r.real for r, _ in self.pos_jumps.pole_rates())


@dataclass(frozen=True)
class VariationClass:
    """Path-variation tag; ``bv_drift`` is present iff bounded."""

    tag: str
    bv_drift: Optional[float] = None

    def __post_init__(self):
        if self.tag not in ("bounded", "unbounded"):
            raise ValueError("tag must be 'bounded' or 'unbounded'")
        if (self.tag == "bounded") != (self.bv_drift is not None):
            raise ValueError("bv_drift present iff tag == 'bounded'")


@dataclass(frozen=True)
class AdmissibilityReport:
    """Outcome of the structural admissibility checks for (model, delta)."""

    admitted: bool
    reasons: tuple
    is_spectrally_negative: bool
    snlp_member: bool
    variation: VariationClass
    sup_atom_x: bool
    inf_atom_x: bool
    sup_atom_y: bool
    inf_atom_y: bool
    sup_ratio_finite: bool
    inf_ratio_finite: bool
    condition_ratios_ok: bool
    kq_continuous: bool
    refraction_exceeds_bv_drift: bool
    ratio_estimates: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Laplace exponent


def _psi_rational(model: LevySpec, theta) -> complex:
    s2 = model.gaussian_coeff**2
    psi = 0.5 * s2 * theta * theta + model.drift * theta
    if model.neg_jumps.kind != "none":
        psi += model.neg_jumps.intensity * (model.neg_jumps.transform(theta) - 1.0)
    if model.pos_jumps.kind != "none":
        psi += model.pos_jumps.intensity * (model.pos_jumps.transform(-theta) - 1.0)
    return psi


def _psi_density(model: LevySpec, theta: float) -> float:
    """Exponent of a density-specified model; quadrature split at the
    compensation threshold x = 1 (the integrand changes form there)."""
    dens = model.levy_density
    th = float(theta)
    big = dens.integrate(lambda x: 1.0 - math.exp(-th * x), 1.0, dens.upper)
    small = dens.integrate(lambda x: 1.0 - math.exp(-th * x) - th * x,
                           dens.lower, 1.0)
    return 0.5 * model.gaussian_coeff**2 * th * th + model.drift * th - big - small


def laplace_exponent(model: LevySpec, theta) -> float:
    """psi(theta) = ln E[exp(theta X_1)].

    Rational jump specs evaluate the closed rational expression (its
    analytic continuation past the up-jump abscissa); density-specified
    models integrate the compensated exponent numerically.
    """
    if model.levy_density is not None:
        return _psi_density(model, theta)
    val = _psi_rational(model, theta)
    if isinstance(theta, complex) or np.iscomplexobj(np.asarray(theta)):
        return val
    return float(np.real(val))


def laplace_exponent_derivative(model: LevySpec, theta) -> float:
    """psi'(theta); analytic for rational models, central difference else."""
    if model.levy_density is None:
        s2 = model.gaussian_coeff**2
        d = s2 * theta + model.drift
        if model.neg_jumps.kind != "none":
            d += model.neg_jumps.intensity * model.neg_jumps.transform_derivative(theta)
        if model.pos_jumps.kind != "none":
            d += -model.pos_jumps.intensity * model.pos_jumps.transform_derivative(-theta)
        if isinstance(theta, complex):
            return d
        return float(np.real(d))
    h = 1e-6 * max(1.0, abs(theta))
    lo = max(theta - h, 0.0)
    return (_psi_density(model, theta + h) - _psi_density(model, lo)) / (theta + h - lo)


def mean_at_one(model: LevySpec) -> float:
    """E[X_1] = psi'(0+)."""
    if model.levy_density is None:
        m = model.drift
        if model.neg_jumps.kind != "none":
            m -= model.neg_jumps.intensity * model.neg_jumps.mean()
        if model.pos_jumps.kind != "none":
            m += model.pos_jumps.intensity * model.pos_jumps.mean()
        return m
    dens = model.levy_density
    return model.drift - dens.integrate(lambda x: x, 1.0, dens.upper)


# ---------------------------------------------------------------------------
# Classification and admissibility


def _variation(model: LevySpec) -> VariationClass:
    if model.gaussian_coeff > 0.0:
        return VariationClass("unbounded")
    if model.levy_density is not None:
        dens = model.levy_density
        try:
            small_mass = dens.integrate(lambda x: x, dens.lower, 1.0)
        except IntegrationError:
            return VariationClass("unbounded")
        if not np.isfinite(small_mass) or small_mass > 1e8:
            return VariationClass("unbounded")
        return VariationClass("bounded", bv_drift=model.drift + small_mass)
    # finite-activity jumps: always bounded variation when sigma = 0
    return VariationClass("bounded", bv_drift=model.drift)


def _atoms_for_drift(variation: VariationClass, drift: float,
                     has_up_jumps: bool, has_down_jumps: bool) -> tuple:
    """(sup_atom, inf_atom) at an independent exponential time,
    decided structurally from regularity of 0."""
    if variation.tag == "unbounded":
        return False, False
    up_regular = drift > 0.0
    down_regular = drift < 0.0
    sup_atom = not up_regular
    inf_atom = not down_regular
    if drift <= 0.0 and not has_up_jumps:
        sup_atom = True      # monotone nonincreasing paths: sup stays at 0
    if drift >= 0.0 and not has_down_jumps:
        inf_atom = True
    return sup_atom, inf_atom


def classify_and_admit(model: LevySpec, delta: float,
                       q: Optional[float] = None) -> tuple:
    """Classify path variation and evaluate admissibility for (model, delta).

    Always returns ``(VariationClass, AdmissibilityReport)``; callers
    decide whether to proceed.  With ``q`` given and a rational model,
    the report also carries numerically estimated large-s factor ratios
    (the constructive finiteness proxies; no decision procedure is
    claimed for them).
    """
    var = _variation(model)
    is_sn = model.is_spectrally_negative
    reasons = []

    d = var.bv_drift if var.tag == "bounded" else None
    snlp_member = is_sn and (var.tag == "unbounded"
                             or (d is not None and d > delta > 0.0))

    has_up = model.pos_jumps.kind != "none"
    has_down = model.neg_jumps.kind != "none" or model.levy_density is not None
    drift_x = d if var.tag == "bounded" else model.drift
    sup_x, inf_x = _atoms_for_drift(var, drift_x if d is None else d,
                                    has_up, has_down)
    # Y = X - delta t shares the jump structure; only the drift shifts
    var_y = (VariationClass("bounded", bv_drift=d - delta)
             if var.tag == "bounded" else var)
    sup_y, inf_y = _atoms_for_drift(var_y, (d - delta) if d is not None else 0.0,
                                    has_up, has_down)

    sup_ratio_finite = not (sup_y and not sup_x)
    inf_ratio_finite = not (inf_x and not inf_y)
    cond_ratios = (delta <= 0.0) or (sup_ratio_finite and inf_ratio_finite)
    kq_continuous = not (sup_x and inf_y)
    remark_pattern = (var.tag == "bounded" and d is not None
                      and d > 0.0 and delta > d)

    if is_sn:
        admitted = snlp_member
        if not admitted:
            if var.tag == "bounded":
                reasons.append(
                    f"bounded variation requires d > delta > 0 (d={d}, delta={delta})")
            else:
                reasons.append("spectrally negative membership check failed")
    else:
        admitted = cond_ratios and kq_continuous and not remark_pattern
        if not cond_ratios:
            reasons.append("large-s factor-ratio finiteness condition fails")
        if not kq_continuous:
            reasons.append("running sup of X and running inf of Y both carry "
                           "an atom at 0: the extrema convolution is discontinuous")
        if remark_pattern:
            reasons.append("bounded variation with refraction rate exceeding "
                           "the drift: no solution of the refraction equation")

    estimates = {}
    if q is not None and model.is_rational:
        try:
            from .wiener_hopf import large_s_ratio_estimates
            estimates = large_s_ratio_estimates(model, q, delta)
        except Exception:
            estimates = {}

    report = AdmissibilityReport(
        admitted=admitted,
        reasons=tuple(reasons),
        is_spectrally_negative=is_sn,
        snlp_member=snlp_member,
        variation=var,
        sup_atom_x=sup_x, inf_atom_x=inf_x,
        sup_atom_y=sup_y, inf_atom_y=inf_y,
        sup_ratio_finite=sup_ratio_finite,
        inf_ratio_finite=inf_ratio_finite,
        condition_ratios_ok=cond_ratios,
        kq_continuous=kq_continuous,
        refraction_exceeds_bv_drift=remark_pattern,
        ratio_estimates=estimates,
    )
    return var, report


# ---------------------------------------------------------------------------
# Catalog


def brownian_motion(sigma: float = 1.0, drift: float = 0.0,
                    name: str = "bm") -> LevySpec:
    """Brownian motion with drift (model M1 with defaults)."""
    return LevySpec(gaussian_coeff=sigma, drift=drift, name=name)


def bv_hyperexp(drift: float = 2.0, intensity: float = 1.0,
                rates=(1.0,), weights=(1.0,), name: str = "bv") -> LevySpec:
    """Bounded-variation spectrally negative compound Poisson with drift
    and hyper-exponential downward jumps (model M2 with defaults)."""
    terms = tuple(MixtureTerm(w, r) for w, r in zip(weights, rates))
    kind = "exponential" if len(terms) == 1 else "hyper-exponential"
    return LevySpec(gaussian_coeff=0.0, drift=drift,
                    neg_jumps=JumpSpec(kind, intensity, terms), name=name)


def jump_diffusion(sigma: float = 1.0, drift: float = 0.0,
                   intensity: float = 1.0, terms=(MixtureTerm(1.0, 1.0),),
                   name: str = "jd") -> LevySpec:
    """Unbounded-variation spectrally negative jump diffusion with
    rational downward jumps."""
    if sigma <= 0.0:
        raise ValueError("jump diffusion class needs sigma > 0")
    kind = "rational-mixture" if any(
        int(t.power) > 1 or complex(t.weight).imag != 0 for t in terms) else (
        "exponential" if len(terms) == 1 else "hyper-exponential")
    return LevySpec(gaussian_coeff=sigma, drift=drift,
                    neg_jumps=JumpSpec(kind, intensity, tuple(terms)), name=name)


def two_sided_jump_diffusion(sigma: float = 1.0, drift: float = 0.0,
                             up_intensity: float = 1.0, up_rates=(2.0,),
                             up_weights=(1.0,), down_intensity: float = 1.0,
                             down_rates=(3.0,), down_weights=(1.0,),
                             name: str = "two-sided") -> LevySpec:
    """Rational two-sided jump diffusion (model M3 with defaults)."""
    up = JumpSpec("exponential" if len(up_rates) == 1 else "hyper-exponential",
                  up_intensity,
                  tuple(MixtureTerm(w, r) for w, r in zip(up_weights, up_rates)))
    down = JumpSpec("exponential" if len(down_rates) == 1 else "hyper-exponential",
                    down_intensity,
                    tuple(MixtureTerm(w, r) for w, r in zip(down_weights, down_rates)))
    return LevySpec(gaussian_coeff=sigma, drift=drift,
                    neg_jumps=down, pos_jumps=up, name=name)


_LADDER_RATES = 0.5 * 4.0 ** np.arange(8)
_LADDER_WEIGHTS = 0.6 * _LADDER_RATES ** 0.8


def tempered_stable_ladder(sigma: float = 1.0, gamma: float = 1.5,
                           name: str = "ts-ladder") -> LevySpec:
    """Density-specified model whose Levy density is a geometric ladder of
    exponential rungs, self-similar over five decades (~ z^{-1.8}) with an
    exponential tail.  Shipped for the staged-approximation diagnostics:
    every truncated restriction is exactly representable by the
    hyper-exponential class, so stage errors reflect the construction,
    not fitting noise.
    """
    rates, weights = _LADDER_RATES.copy(), _LADDER_WEIGHTS.copy()

    def dens(z):
        scalar = np.ndim(z) == 0
        za = np.atleast_1d(np.asarray(z, dtype=float))
        out = (weights[None, :] * rates[None, :]
               * np.exp(-np.outer(za, rates))).sum(axis=1)
        return float(out[0]) if scalar else out

    scales = tuple(sorted(set([1.0 / r for r in rates] + [1.0])))
    return LevySpec(gaussian_coeff=sigma, drift=gamma,
                    levy_density=LevyDensity(dens, lower=0.0, upper=40.0,
                                             scales=scales),
                    name=name)


def power_law_density(alpha: float = 1.5, amplitude: float = 1.0,
                      upper: float = 30.0, sigma: float = 1.0,
                      gamma: float = 1.0, name: str = "ts-power") -> LevySpec:
    """Density-specified model with Levy density amplitude * z^{-alpha} e^{-z};
    infinite activity for alpha > 1, bounded variation for alpha < 2."""
    if not (1.0 < alpha < 2.0):
        raise ValueError("alpha must lie in (1, 2)")

    def dens(z):
        z = np.asarray(z, dtype=float)
        return amplitude * z**(-alpha) * np.exp(-z)

    return LevySpec(gaussian_coeff=sigma, drift=gamma,
                    levy_density=LevyDensity(dens, lower=0.0, upper=upper,
                                             scales=(1e-3, 1e-2, 0.1, 1.0)),
                    name=name)


def cp_positive_drift_up_jumps(drift: float = 0.5, intensity: float = 1.0,
                               rate: float = 1.0,
                               name: str = "cp-updrift") -> LevySpec:
    """Compound Poisson with positive drift and upward jumps.  With
    delta > drift the refraction equation has no solution; shipped as the
    canonical rejection case."""
    return LevySpec(gaussian_coeff=0.0, drift=drift,
                    pos_jumps=JumpSpec("exponential", intensity,
                                       (MixtureTerm(1.0, rate),)),
                    name=name)


def two_sided_bv_negative_drift(drift: float = -1.0, up_intensity: float = 1.0,
                                up_rate: float = 2.0, down_intensity: float = 1.0,
                                down_rate: float = 3.0,
                                name: str = "bv-negdrift") -> LevySpec:
    """Pure-jump bounded-variation two-sided model with negative drift;
    for delta < drift both running extrema carry atoms and the extrema
    convolution is discontinuous (flagged, not admitted)."""
    return LevySpec(
        gaussian_coeff=0.0, drift=drift,
        pos_jumps=JumpSpec("exponential", up_intensity, (MixtureTerm(1.0, up_rate),)),
        neg_jumps=JumpSpec("exponential", down_intensity, (MixtureTerm(1.0, down_rate),)),
        name=name)
