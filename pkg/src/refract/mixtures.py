"""Mixtures of (possibly complex) exponential/Erlang terms.

Rational Laplace transforms invert to finite combinations of terms
``w * rate**p * t**(p-1)/(p-1)! * exp(-rate*t)`` on ``t > 0``.  Complex
rates and weights appear in conjugate pairs, so all evaluated quantities
are real up to roundoff; evaluation keeps complex arithmetic internally
and returns the real part after checking the imaginary residue.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

__all__ = ["ExpMixture", "partial_fractions", "RationalFn"]

_IMAG_TOL = 1e-8


def _real(values, what: str):
    values = np.asarray(values)
    if np.iscomplexobj(values):
        scale = max(1.0, float(np.max(np.abs(values))) if values.size else 1.0)
        worst = float(np.max(np.abs(values.imag))) if values.size else 0.0
        if worst > _IMAG_TOL * scale:
            raise ArithmeticError(
                f"{what}: imaginary residue {worst:.3e} exceeds tolerance "
                "(conjugate pairing broken)")
        return np.ascontiguousarray(values.real)
    return values


def _upper_gamma_reg(p: int, y: np.ndarray) -> np.ndarray:
    """Regularized upper incomplete gamma Q(p, y) for integer p >= 1.

    Finite sum exp(-y) * sum_{k<p} y^k/k!; valid for complex y.
    """
    acc = np.zeros_like(y, dtype=complex)
    term = np.ones_like(y, dtype=complex)
    for k in range(p):
        if k > 0:
            term = term * y / k
        acc = acc + term
    return np.exp(-y) * acc


@dataclass(frozen=True)
class ExpMixture:
    """Finite mixture sum_j w_j * Erlang(p_j, r_j) on (0, inf).

    The weights need not be positive or sum to one; the mixture is a
    signed (complex-paired) combination whose evaluations are real.
    """

    weights: tuple
    rates: tuple
    powers: tuple

    def __post_init__(self):
        if not (len(self.weights) == len(self.rates) == len(self.powers)):
            raise ValueError("terms must have equal lengths")
        for r in self.rates:
            if complex(r).real <= 0.0:
                raise ValueError("mixture rates need positive real part")
        for p in self.powers:
            if int(p) < 1:
                raise ValueError("powers are positive integers")

    @property
    def n_terms(self) -> int:
        return len(self.weights)

    def total_weight(self) -> float:
        return float(_real(np.sum(np.asarray(self.weights, dtype=complex)),
                           "total_weight"))

    def pdf(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros(t.shape, dtype=complex)
        pos = t > 0
        tp = t[pos]
        for w, r, p in zip(self.weights, self.rates, self.powers):
            w, r, p = complex(w), complex(r), int(p)
            out[pos] += w * r**p * tp**(p - 1) / math.factorial(p - 1) * np.exp(-r * tp)
        return _real(out, "pdf")

    def sf(self, t) -> np.ndarray:
        """sum_j w_j * P(Erlang_j > t); equals total_weight() at t <= 0."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros(t.shape, dtype=complex)
        for w, r, p in zip(self.weights, self.rates, self.powers):
            w, r, p = complex(w), complex(r), int(p)
            y = r * np.maximum(t, 0.0)
            out += w * _upper_gamma_reg(p, y)
        return _real(out, "sf")

    def cdf(self, t) -> np.ndarray:
        return self.total_weight() - self.sf(t)

    def transform(self, s) -> np.ndarray:
        """sum_j w_j * (r_j/(r_j+s))**p_j  (Laplace transform at s >= 0)."""
        s = np.atleast_1d(np.asarray(s, dtype=complex))
        out = np.zeros(s.shape, dtype=complex)
        for w, r, p in zip(self.weights, self.rates, self.powers):
            out += complex(w) * (complex(r) / (complex(r) + s)) ** int(p)
        return _real(out, "transform")

    def transform_complex(self, s) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=complex))
        out = np.zeros(s.shape, dtype=complex)
        for w, r, p in zip(self.weights, self.rates, self.powers):
            out += complex(w) * (complex(r) / (complex(r) + s)) ** int(p)
        return out

    def moment(self, k: int) -> float:
        """sum_j w_j * E[Erlang_j^k] for integer k >= 0."""
        acc = 0.0 + 0.0j
        for w, r, p in zip(self.weights, self.rates, self.powers):
            w, r, p = complex(w), complex(r), int(p)
            acc += w * math.factorial(p + k - 1) / math.factorial(p - 1) / r**k
        return float(_real(np.asarray(acc), "moment"))

    def scaled(self, c: float) -> "ExpMixture":
        return ExpMixture(tuple(complex(w) * c for w in self.weights),
                          self.rates, self.powers)


@dataclass(frozen=True)
class RationalFn:
    """Rational function num(s)/den(s), ascending coefficient order."""

    num: tuple
    den: tuple

    def __call__(self, s):
        s = np.asarray(s, dtype=complex)
        return P.polyval(s, np.asarray(self.num)) / P.polyval(s, np.asarray(self.den))


def _taylor_coeffs(coeffs: np.ndarray, center: complex, n: int) -> np.ndarray:
    """First n Taylor coefficients of the polynomial at ``center``."""
    out = np.empty(n, dtype=complex)
    c = np.asarray(coeffs, dtype=complex)
    for k in range(n):
        out[k] = P.polyval(center, c) / math.factorial(k)
        c = P.polyder(c)
    return out


def partial_fractions(num, den_roots, den_lead=1.0):
    """Decompose num(s) / (den_lead * prod (s - p)^m) into pole terms.

    Parameters
    ----------
    num : ascending polynomial coefficients of the numerator.
    den_roots : list of (pole, multiplicity) pairs.
    den_lead : leading coefficient of the denominator.

    Returns
    -------
    (const, terms) with ``terms`` a list of (pole, i, c) meaning
    ``c / (s - pole)**i``; ``const`` is the degree-0 polynomial part.
    The rational function must be proper (deg num <= deg den).
    """
    num = np.trim_zeros(np.asarray(num, dtype=complex), "b")
    if num.size == 0:
        num = np.zeros(1, dtype=complex)
    den = np.asarray([complex(den_lead)])
    for p, m in den_roots:
        for _ in range(int(m)):
            den = P.polymul(den, np.asarray([-complex(p), 1.0]))
    deg_n, deg_d = num.size - 1, den.size - 1
    if deg_n > deg_d:
        raise ValueError("partial_fractions requires a proper rational function")
    const = 0.0 + 0.0j
    if deg_n == deg_d:
        const = num[-1] / den[-1]
        num = P.polysub(num, const * den)
        num = np.trim_zeros(np.asarray(num, dtype=complex), "b")
        if num.size == 0:
            num = np.zeros(1, dtype=complex)

    terms = []
    for k, (pole, mult) in enumerate(den_roots):
        pole, mult = complex(pole), int(mult)
        # deflated denominator: den without this pole's factor
        defl = np.asarray([complex(den_lead)])
        for j, (p2, m2) in enumerate(den_roots):
            m_eff = int(m2) - (mult if j == k else 0)
            for _ in range(m_eff):
                defl = P.polymul(defl, np.asarray([-complex(p2), 1.0]))
        # power-series division num/defl around the pole
        a = _taylor_coeffs(num, pole, mult)
        b = _taylor_coeffs(defl, pole, mult)
        if abs(b[0]) == 0.0:
            raise ZeroDivisionError("deflated denominator vanishes at its own pole")
        g = np.empty(mult, dtype=complex)
        for i in range(mult):
            acc = a[i]
            for j in range(i):
                acc -= g[j] * b[i - j]
            g[i] = acc / b[0]
        for i in range(1, mult + 1):
            c = g[mult - i]
            if c != 0.0:
                terms.append((pole, i, c))
    return const, terms


def mixture_from_transform(num, den_roots, den_lead=1.0):
    """Invert a proper rational Laplace transform into (atom, ExpMixture).

    The transform is num(s)/den(s) with all denominator roots in the open
    left half-plane, written as poles ``p = -rate``.  Terms
    ``c/(s - p)**i`` map to weight ``c/rate**i`` on an Erlang(i, rate)
    component; a nonzero degree-0 part becomes a point mass at 0.
    """
    const, terms = partial_fractions(num, den_roots, den_lead)
    weights, rates, powers = [], [], []
    for pole, i, c in terms:
        rate = -pole
        if rate.real <= 0.0:
            raise ValueError("transform pole in the right half-plane")
        weights.append(c / rate**i)
        rates.append(rate)
        powers.append(i)
    atom = float(_real(np.asarray(const), "transform constant part"))
    return atom, ExpMixture(tuple(weights), tuple(rates), tuple(powers))
