"""Quadratic L-series over F_q(x): exact coefficients, functional-equation
completion, central values in Q(sqrt q), complex evaluation, and the
Lindelof-type / root-modulus checks.

The character attached to d = unit * b0 (b0 monic square-free) is
chi_d(m) = (d/m).  For non-constant b0 the L-series is a polynomial in
u = q**-s of degree deg(b0) - 1; constant conductors give the two tagged
special forms 1/(1 - q**(1-s)) and 1/(1 + q**(1-s)).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from . import fq
from .fq import FqField
from .rings import QuadValue


# ---------------------------------------------------------------------------
# fast symbol tables per small prime
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _residue_symbol_table(field_key, p):
    """(r/p) for every residue r mod the irreducible p, as a dict."""
    F = fq.build_field(*field_key)
    np = F.q ** fq.deg(p)
    table = {}
    exp = (np - 1) // 2
    # enumerate residues: all polys of degree < deg p
    def residues(d):
        if d == 0:
            yield ()
            return
        for idx in range(F.q ** d):
            coeffs = []
            c = idx
            for _ in range(d):
                coeffs.append(c % F.q)
                c //= F.q
            yield fq.trim(tuple(coeffs))
    seen = set()
    for r in residues(fq.deg(p)):
        if r in seen:
            continue
        seen.add(r)
        if not r:
            table[r] = 0
        else:
            t = fq.ppow_mod(F, r, exp, p)
            table[r] = 1 if t == fq.P_ONE else -1
    return table


def prime_symbol(F: FqField, top, p) -> int:
    """chi_top(p) = (top/p); cached residue table for small primes, plain
    Euclidean reduction otherwise."""
    if F.q ** fq.deg(p) <= 2048:
        r = fq.pmod(F, top, p)
        return _residue_symbol_table((F.p, F.e), p)[r]
    return fq.kronecker(F, top, p)


@lru_cache(maxsize=None)
def _primes_up_to(field_key, n_max):
    F = fq.build_field(*field_key)
    out = []
    for d in range(1, n_max + 1):
        out.extend(fq.irreducibles(F, d))
    return tuple(out)


@lru_cache(maxsize=None)
def _symbol_plan(field_key, n_max):
    """Per-prime evaluation strategy: linear primes by root evaluation,
    small primes by residue table, the rest by Euclidean reduction."""
    F = fq.build_field(*field_key)
    plan = []
    for p in _primes_up_to(field_key, n_max):
        dp = fq.deg(p)
        if dp == 1:
            plan.append((p, dp, "root", F.neg[p[0]]))
        elif F.q ** dp <= 2048:
            plan.append((p, dp, "table", _residue_symbol_table(field_key, p)))
        else:
            plan.append((p, dp, "euclid", None))
    return tuple(plan)


def coeff_sums(F: FqField, top, n_max: int, skip=()):
    """[c_0..c_n_max] with c_n = sum over monic m of degree n of chi_top(m),
    omitting primes in ``skip`` from the support (restricted L-series).

    Computed as the degree-truncated Euler product over primes of degree
    <= n_max from the per-prime symbol values.
    """
    coeffs = [0] * (n_max + 1)
    coeffs[0] = 1
    skipset = set(skip)
    chi2 = F.chi2
    for p, dp, kind, data in _symbol_plan((F.p, F.e), n_max):
        if p in skipset:
            continue
        if kind == "root":
            s = chi2[fq.peval(F, top, data)]
        elif kind == "table":
            s = data[fq.pmod(F, top, p)]
        else:
            s = fq.kronecker(F, top, p)
        # multiply coeffs by (1 + s t^dp + s^2 t^2dp + ...)
        if s == 0:
            continue
        new = coeffs[:]
        power = s
        shift = dp
        while shift <= n_max:
            for j in range(0, n_max + 1 - shift):
                if coeffs[j]:
                    new[j + shift] += power * coeffs[j]
            power *= s
            shift += dp
        coeffs = new
    return coeffs


def coeff_sums_direct(F: FqField, top, n_max: int, skip=()):
    """Oracle: the same sums by direct enumeration of monic m."""
    out = []
    for n in range(n_max + 1):
        total = 0
        for m in fq.enumerate_monic(F, n):
            mm = m
            ok = True
            for p in skip:
                if not fq.pmod(F, mm, p):
                    ok = False
                    break
            if not ok:
                continue
            total += fq.kronecker(F, top, m)
        out.append(total)
    return out


# ---------------------------------------------------------------------------
# L-polynomials
# ---------------------------------------------------------------------------

class LPolynomial:
    """The L-series of chi_d as a polynomial in u = q**-s.

    ``special`` tags the constant-conductor cases: 'zeta' for
    1/(1 - q**(1-s)), 'minus' for 1/(1 + q**(1-s)).
    """

    def __init__(self, F: FqField, unit: int, b0, coeffs, special=None):
        self.F = F
        self.unit = unit
        self.b0 = b0
        self.coeffs = list(coeffs)
        self.special = special
        D = fq.deg(b0)
        self.conductor_degree = D
        # genus bookkeeping: 2g = D-1 (odd D) or D-2 (even D), non-constant b0
        self.two_g = 0 if D <= 0 else (D - 1 if D % 2 else D - 2)

    @property
    def sgn(self) -> int:
        return 1 if self.F.is_square[self.unit] else -1

    def central_value(self) -> QuadValue:
        """L at u = q**(-1/2), exactly in Q(sqrt q)."""
        q = self.F.q
        if self.special == "zeta":
            return 1 / (1 - QuadValue.sqrt_q(q))
        if self.special == "minus":
            return 1 / (1 + QuadValue.sqrt_q(q))
        a = Fraction(0)
        b = Fraction(0)
        for n, c in enumerate(self.coeffs):
            if n % 2 == 0:
                a += Fraction(c, q ** (n // 2))
            else:
                b += Fraction(c, q ** ((n + 1) // 2))
        return QuadValue(q, a, b)

    def eval_u(self, u):
        """Evaluate the polynomial at a numeric/complex u."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * u + c
        return acc


def _fe_complete(F: FqField, sgn: int, D: int, lower):
    """Extend c_0..c_h to the full coefficient list via the functional
    equation; exact integer arithmetic throughout."""
    q = F.q
    deg_l = D - 1
    c = {n: Fraction(v) for n, v in enumerate(lower)}

    def get(n):
        if n < 0 or n > deg_l:
            return Fraction(0)
        return c[n]

    if D % 2 == 1:
        half = (D - 1) // 2
        for k in range(half + 1):
            c[deg_l - k] = Fraction(q) ** (half - k) * get(k)
    else:
        # L(u) (u - sgn/q) = q^(D/2-1) (1 - sgn u) sum_k c_k q^-k u^(D-1-k)
        scale = Fraction(q) ** (D // 2 - 1)
        for j in range(D, D // 2, -1):
            rhs = scale * (get(D - 1 - j) * Fraction(1, q) ** (D - 1 - j)
                           - sgn * get(D - j) * Fraction(1, q) ** (D - j))
            c[j - 1] = rhs + Fraction(sgn, q) * get(j)
    out = []
    for n in range(deg_l + 1):
        v = c[n]
        if v.denominator != 1:
            raise ArithmeticError("functional-equation completion left a denominator")
        out.append(int(v))
    return out


def l_polynomial(F: FqField, b0, unit: int = 1, mode: str = "fe_completed") -> LPolynomial:
    """Build L(s, chi_{unit*b0}) for monic square-free b0.

    mode 'full' sums characters for every coefficient; 'fe_completed'
    computes the lower half by summation and completes with the functional
    equation.  Constant b0 yields the tagged special values.
    """
    if not b0:
        raise ValueError("zero conductor")
    D = fq.deg(b0)
    if D == 0:
        sgn_u = 1 if F.is_square[unit] else -1
        return LPolynomial(F, unit, b0, [], special="zeta" if sgn_u == 1 else "minus")
    if not fq.is_monic(b0):
        raise ValueError("conductor must be unit * monic")
    if not fq.is_squarefree(F, b0):
        raise ValueError("conductor must be square-free")
    top = fq.pscale(F, b0, unit)
    deg_l = D - 1
    if mode == "full":
        coeffs = coeff_sums(F, top, deg_l)
    elif mode == "fe_completed":
        half = (D - 1) // 2 if D % 2 else D // 2 - 1
        lower = coeff_sums(F, top, max(half, 0))
        sgn_u = 1 if F.is_square[unit] else -1
        coeffs = _fe_complete(F, sgn_u, D, lower)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return LPolynomial(F, unit, b0, coeffs)


def central_value(F: FqField, b0, unit: int = 1) -> QuadValue:
    return l_polynomial(F, b0, unit).central_value()


def zeta_half(q: int) -> QuadValue:
    """zeta(1/2) = 1/(1 - sqrt q)."""
    return 1 / (1 - QuadValue.sqrt_q(q))


def l_nonsquare_half(q: int) -> QuadValue:
    """L(1/2) for the non-square constant-conductor character: 1/(1+sqrt q)."""
    return 1 / (1 + QuadValue.sqrt_q(q))


# ---------------------------------------------------------------------------
# complex evaluation and analytic checks
# ---------------------------------------------------------------------------

def eval_l(F: FqField, b0, s, digits: int = 30, unit: int = 1):
    """L(s, chi) at a complex point, high-precision."""
    import mpmath
    L = l_polynomial(F, b0, unit)
    with mpmath.workdps(digits + 10):
        u = mpmath.power(F.q, -mpmath.mpmathify(s))
        return complex(L.eval_u(u))


def check_lindelof(F: FqField, b0, t_samples: int = 32):
    """Central-line bound |L(1/2+it)| < 4 |d|**(10/log D) for deg >= 3.

    The polynomial in q**(-it) is periodic in t with period 2*pi/log q, so
    equispaced samples over one period cover all values up to grid density.
    """
    import math
    import cmath
    D = fq.deg(b0)
    if D < 3:
        return {"skipped": True, "reason": "degree below 3"}
    L = l_polynomial(F, b0)
    q = F.q
    bound = 4.0 * math.exp(10.0 * D * math.log(q) / math.log(D))
    worst = 0.0
    for k in range(t_samples):
        u = q ** -0.5 * cmath.exp(-2j * math.pi * k / t_samples)
        worst = max(worst, abs(L.eval_u(u)))
    return {"skipped": False, "max_abs": worst, "bound": bound,
            "ok": worst < bound, "samples": t_samples}


def check_weil(F: FqField, b0, tol: float = 1e-9):
    """All inverse roots of the completed polynomial have modulus sqrt q.

    For even conductor degree the polynomial carries one unit root (at +1 or
    -1), which is peeled off exactly before the modulus test.
    """
    import numpy as np
    D = fq.deg(b0)
    L = l_polynomial(F, b0)
    coeffs = list(L.coeffs)
    if D <= 1:
        return {"vacuous": True}
    if D % 2 == 0:
        for u0 in (1, -1):
            if L.eval_u(u0) == 0:
                # exact synthetic division by (u - u0); remainder must vanish
                d = len(coeffs) - 1
                quot = [0] * d
                quot[d - 1] = coeffs[d]
                for k in range(d - 1, 0, -1):
                    quot[k - 1] = coeffs[k] + u0 * quot[k]
                assert coeffs[0] + u0 * quot[0] == 0
                coeffs = quot
                break
        else:
            return {"vacuous": False, "error": "no unit root found for even degree"}
    if len(coeffs) <= 1:
        return {"vacuous": True}
    roots = np.roots(coeffs[::-1])
    target = F.q ** -0.5
    devs = [abs(abs(r) - target) for r in roots]
    return {"vacuous": False, "max_deviation": max(devs), "tol": tol,
            "ok": max(devs) < tol, "count": len(roots)}
