"""Roots of the exponent equations and the (q, delta) problem context.

``phi_root`` and ``varphi_root`` solve psi(theta) = q and
psi(theta) - delta*theta = q for their largest nonnegative solutions.
For rational models, ``cramer_lundberg_roots`` clears the equation to a
polynomial and returns every complex root grouped by half-plane; those
roots parameterize the Wiener-Hopf factors and all partial-fraction
inversions downstream.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import BracketError, DegenerateError
from .levy_models import (LevySpec, VariationClass, classify_and_admit,
                          laplace_exponent, laplace_exponent_derivative)

__all__ = ["RootSet", "QContext", "phi_root", "varphi_root",
           "cramer_lundberg_roots", "solve_context"]

_MERGE_TOL = 1e-7
_RESIDUAL_GATE = 1e-9


@dataclass(frozen=True)
class RootSet:
    """Roots of one cleared exponent equation in one half-plane.

    side is 'sup-equation' for roots with positive real part and
    'inf-equation' for roots with negative real part.
    """

    roots: tuple          # of (location: complex, multiplicity: int)
    side: str

    def locations(self) -> list:
        return [r for r, _ in self.roots]

    def with_multiplicity(self) -> list:
        out = []
        for r, m in self.roots:
            out.extend([r] * m)
        return out


def _psi_shifted(model: LevySpec, delta: float):
    def f(theta):
        return laplace_exponent(model, theta) - delta * theta
    def fprime(theta):
        return laplace_exponent_derivative(model, theta) - delta
    return f, fprime


def _largest_root(model: LevySpec, q: float, delta: float) -> float:
    """Largest nonnegative solution of psi(theta) - delta*theta = q.

    Doubling bracket (capped below the smallest up-jump pole), bisection
    to width 1e-14, then Newton polish.
    """
    if q <= 0.0:
        raise ValueError("q must be positive")
    f, fp = _psi_shifted(model, delta)
    pole = model.pos_pole_min()
    hi = min(1.0, 0.5 * pole)
    # double toward the pole (or freely for spectrally negative models)
    k = 0
    while f(hi) <= q:
        k += 1
        if np.isfinite(pole):
            hi = pole * (1.0 - 2.0 ** (-k - 1))
        else:
            hi *= 2.0
        if hi > 1e6 or k > 200:
            raise BracketError(
                f"no bracket for the exponent root below theta = {hi:.3g}")
    lo = 0.0
    while hi - lo > 1e-14 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if f(mid) > q:
            hi = mid
        else:
            lo = mid
    theta = 0.5 * (lo + hi)
    for _ in range(3):
        d = fp(theta)
        if d == 0.0:
            break
        step = (f(theta) - q) / d
        theta -= step
        if not np.isfinite(theta) or theta < 0.0:
            theta = 0.5 * (lo + hi)
            break
    return float(theta)


def phi_root(model: LevySpec, q: float) -> float:
    """Largest nonnegative root of psi(theta) = q."""
    return _largest_root(model, q, 0.0)


def varphi_root(model: LevySpec, q: float, delta: float) -> float:
    """Largest nonnegative root of psi(theta) - delta*theta = q."""
    return _largest_root(model, q, delta)


def _jump_factor_polys(spec) -> tuple:
    """(denominator poly, compensated transform numerator) for a rational
    jump spec, both ascending:  transform(s) = num(s)/den(s)."""
    den = np.asarray([1.0 + 0.0j])
    poles = spec.pole_rates()
    for rate, mult in poles:
        den = P.polymul(den, P.polypow(np.asarray([rate, 1.0 + 0.0j]), mult))
    num = np.zeros(1, dtype=complex)
    for t in spec.terms:
        r, p, w = complex(t.rate), int(t.power), complex(t.weight)
        other = np.asarray([1.0 + 0.0j])
        for rate, mult in poles:
            m_eff = mult - (p if rate == r else 0)
            if rate == r and m_eff < 0:
                raise ValueError("inconsistent pole multiplicities")
            other = P.polymul(other, P.polypow(np.asarray([rate, 1.0 + 0.0j]), m_eff))
        num = P.polyadd(num, w * r**p * other)
    return num, den


def _cleared_polynomial(model: LevySpec, q: float, delta: float) -> np.ndarray:
    """Ascending coefficients of (q - psi(s) + delta*s) * prod(denominators)."""
    if not model.is_rational:
        raise ValueError("cleared equation exists only for rational models")
    sigma2 = model.gaussian_coeff**2
    base = np.asarray([q, delta - model.drift, -0.5 * sigma2], dtype=complex)
    base = np.trim_zeros(base, "b")
    if base.size == 0:
        base = np.zeros(1, dtype=complex)

    den_total = np.asarray([1.0 + 0.0j])
    jump_terms = []
    if model.neg_jumps.kind != "none":
        num_n, den_n = _jump_factor_polys(model.neg_jumps)
        jump_terms.append((model.neg_jumps.intensity, num_n, den_n, +1))
    if model.pos_jumps.kind != "none":
        num_p, den_p = _jump_factor_polys(model.pos_jumps)
        # up jumps enter through transform(-s): substitute s -> -s
        num_p = np.asarray([c * (-1.0) ** i for i, c in enumerate(num_p)])
        den_p = np.asarray([c * (-1.0) ** i for i, c in enumerate(den_p)])
        jump_terms.append((model.pos_jumps.intensity, num_p, den_p, +1))

    for _, _, den, _ in jump_terms:
        den_total = P.polymul(den_total, den)

    poly = P.polymul(base, den_total)
    for lam, num, den, _ in jump_terms:
        other = np.asarray([1.0 + 0.0j])
        for lam2, num2, den2, _ in jump_terms:
            if den2 is not den:
                other = P.polymul(other, den2)
        # psi carries lam*(transform - 1): subtract lam*num*other, add back lam*den*other
        poly = P.polyadd(poly, P.polymul(np.asarray([lam + 0.0j]),
                                         P.polysub(P.polymul(den, other),
                                                   P.polymul(num, other))))
    return np.trim_zeros(poly, "b")


def cramer_lundberg_roots(model: LevySpec, q: float,
                          delta: float = 0.0) -> tuple:
    """All complex roots of q - (psi(s) - delta*s) = 0, by half-plane.

    Returns ``(sup_side, inf_side)``: roots with positive real part feed
    the running-supremum factor, roots with negative real part the
    running-infimum factor.  With delta = 0 this is the equation for X
    itself and the unique positive real root equals ``phi_root``; with
    the refraction drift it equals ``varphi_root``.

    Roots closer than 1e-7 are merged into a single root with raised
    multiplicity.  Each root is Newton-polished on the cleared
    polynomial and must satisfy the original equation to residual 1e-9.
    """
    poly = _cleared_polynomial(model, q, delta)
    deg = poly.size - 1
    if deg < 1:
        raise DegenerateError("cleared equation has polynomial degree 0")
    raw = P.polyroots(poly)
    dpoly = P.polyder(poly)
    polished = []
    for r in raw:
        d = P.polyval(r, dpoly)
        if abs(d) > 0:
            r = r - P.polyval(r, poly) / d
        polished.append(r)

    # merge near-coincident roots into multiplicities
    merged = []
    for r in sorted(polished, key=lambda z: (round(z.real, 12), round(z.imag, 12))):
        for i, (r0, m0) in enumerate(merged):
            if abs(r - r0) < _MERGE_TOL * max(1.0, abs(r0)):
                merged[i] = ((r0 * m0 + r) / (m0 + 1), m0 + 1)
                break
        else:
            merged.append((r, 1))

    scale = max(1.0, abs(q))
    for r, m in merged:
        if m > 1:
            continue    # the rational residual is unreliable at a multiple root
        val = q - (laplace_exponent(model, complex(r)) - delta * complex(r))
        if abs(val) > _RESIDUAL_GATE * scale:
            raise ArithmeticError(
                f"root {r} fails the exponent equation (residual {abs(val):.2e})")

    sup = tuple((r, m) for r, m in merged if r.real > 0.0)
    inf = tuple((r, m) for r, m in merged if r.real < 0.0)
    if sum(m for _, m in sup) + sum(m for _, m in inf) != deg:
        raise ArithmeticError("a cleared-equation root sits on the imaginary axis")
    return (RootSet(sup, "sup-equation"), RootSet(inf, "inf-equation"))


@dataclass(frozen=True)
class QContext:
    """Fixed (q, delta) problem context with solved roots and, for
    rational models, the cached root sets of both exponent equations."""

    model: LevySpec
    q: float
    delta: float
    phi_q: float
    varphi_q: float
    variation: VariationClass
    x_roots: Optional[tuple] = None          # (sup RootSet, inf RootSet)
    y_roots: Optional[tuple] = None
    admissibility: object = field(default=None, repr=False)

    def psi(self, theta):
        return laplace_exponent(self.model, theta)

    def psi_y(self, theta):
        return laplace_exponent(self.model, theta) - self.delta * theta

    def psi_prime(self, theta):
        return laplace_exponent_derivative(self.model, theta)

    def roots_for(self, process: str) -> tuple:
        pair = self.x_roots if process == "X" else self.y_roots
        if pair is None:
            raise ValueError("no cached root sets (non-rational model)")
        return pair

    def rate_for(self, process: str) -> float:
        """Exponent-root rate of the running-sup law: Phi(q) or varphi(q)."""
        if process == "X":
            return self.phi_q
        if process == "Y":
            return self.varphi_q
        raise ValueError("process must be 'X' or 'Y'")


def solve_context(model: LevySpec, q: float, delta: float) -> QContext:
    """Build the QContext: solve both roots, verify residual and ordering
    invariants, and cache the cleared-equation root sets when available."""
    if q <= 0.0:
        raise ValueError("q must be positive")
    phi = phi_root(model, q)
    vphi = varphi_root(model, q, delta)

    scale = 1e-12 * max(1.0, q)
    res_phi = abs(laplace_exponent(model, phi) - q)
    res_vphi = abs(laplace_exponent(model, vphi) - delta * vphi - q)
    if res_phi > scale or res_vphi > scale:
        raise ArithmeticError(
            f"root residuals too large: {res_phi:.2e}, {res_vphi:.2e}")
    gap = vphi - phi
    tol = 1e-9 * max(1.0, phi)
    if delta > 0.0 and gap <= -tol:
        raise ArithmeticError("varphi(q) must exceed Phi(q) for delta > 0")
    if delta < 0.0 and gap >= tol:
        raise ArithmeticError("varphi(q) must lie below Phi(q) for delta < 0")
    if delta == 0.0 and abs(gap) > tol:
        raise ArithmeticError("delta = 0 requires varphi(q) = Phi(q)")

    x_roots = y_roots = None
    if model.is_rational:
        x_roots = cramer_lundberg_roots(model, q, 0.0)
        y_roots = cramer_lundberg_roots(model, q, delta)

    variation, report = classify_and_admit(model, delta)
    return QContext(model=model, q=q, delta=delta, phi_q=phi, varphi_q=vphi,
                    variation=variation, x_roots=x_roots, y_roots=y_roots,
                    admissibility=report)
