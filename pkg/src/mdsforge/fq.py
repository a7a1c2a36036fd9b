"""Finite fields F_q with q = p**e = 1 (mod 4), and F_q[x] arithmetic.

Field elements are ints in 0..q-1.  For prime fields the int is the residue;
for extension fields it encodes the coefficient vector of F_p[y]/(modulus)
in base p, constant digit least significant.  Polynomials over F_q are
tuples of element codes, constant term first, no trailing zeros; () is the
zero polynomial.

The quadratic symbol is computed by reciprocity-based Euclidean reduction
(q = 1 mod 4 keeps the law sign-free); the factorization-based definition
is kept as a cross-check oracle.
"""

from __future__ import annotations

from functools import lru_cache


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, isqrt_int(n) + 1):
        if n % d == 0:
            return False
    return True


def isqrt_int(n: int) -> int:
    from math import isqrt
    return isqrt(n)


class FqField:
    """F_q with precomputed tables; create via build_field(p, e)."""

    def __init__(self, p: int, e: int):
        if p == 2:
            raise ValueError("characteristic 2 is not supported (need odd q = 1 mod 4)")
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        q = p ** e
        if q % 4 != 1:
            raise ValueError(
                f"q = {p}^{e} = {q} fails the congruence q = 1 (mod 4) "
                f"(it is {q % 4} mod 4)")
        self.p = p
        self.e = e
        self.q = q
        self.modulus = self._lex_min_irreducible() if e > 1 else None
        self._build_tables()
        self.nonsquare_unit = next(a for a in range(1, q) if not self.is_square[a])
        assert self.pow_el(self.nonsquare_unit, (q - 1) // 2) == self.neg[1]

    # -- construction helpers -------------------------------------------
    def _poly_p_mul_mod(self, a, b, mod):
        """Multiply coefficient vectors over F_p modulo the vector `mod`."""
        p = self.p
        res = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    res[i + j] = (res[i + j] + ai * bj) % p
        # reduce by monic mod
        dm = len(mod) - 1
        while len(res) - 1 >= dm:
            lead = res[-1]
            if lead:
                off = len(res) - 1 - dm
                for k in range(dm + 1):
                    res[off + k] = (res[off + k] - lead * mod[k]) % p
            res.pop()
        while res and res[-1] == 0:
            res.pop()
        return res

    def _is_irreducible_p(self, mod) -> bool:
        """Rabin test for a monic coefficient vector over F_p."""
        p = self.p
        e = len(mod) - 1
        # x^(p^k) mod `mod` via repeated Frobenius
        def powmod_x(exp_steps):
            cur = [0, 1]
            for _ in range(exp_steps):
                # raise to the p-th power: repeated squaring on exponent p
                acc = [1]
                base = cur
                n = p
                while n:
                    if n & 1:
                        acc = self._poly_p_mul_mod(acc, base, mod)
                    base = self._poly_p_mul_mod(base, base, mod)
                    n >>= 1
                cur = acc
            return cur

        xq = powmod_x(e)
        if xq != [0, 1]:
            return False
        for r in {d for d in range(1, e) if e % d == 0}:
            xr = powmod_x(r)
            diff = list(xr)
            while len(diff) < 2:
                diff.append(0)
            diff[1] = (diff[1] - 1) % p
            while diff and diff[-1] == 0:
                diff.pop()
            # gcd(x^(p^r) - x, mod) must be 1
            a, b = mod[:], diff
            while b:
                # a mod b over F_p
                a = a[:]
                db = len(b) - 1
                inv = pow(b[-1], p - 2, p)
                while len(a) - 1 >= db and a:
                    lead = a[-1]
                    if lead:
                        c = lead * inv % p
                        off = len(a) - 1 - db
                        for k in range(db + 1):
                            a[off + k] = (a[off + k] - c * b[k]) % p
                    a.pop()
                    while a and a[-1] == 0:
                        a.pop()
                a, b = b, a
            if len(a) != 1:
                return False
        return True

    def _lex_min_irreducible(self):
        """Smallest monic irreducible of degree e over F_p, ordered by the
        base-p encoding of (c_0, ..., c_{e-1}) with c_0 least significant."""
        p, e = self.p, self.e
        for code in range(p ** e):
            coeffs = []
            c = code
            for _ in range(e):
                coeffs.append(c % p)
                c //= p
            mod = coeffs + [1]
            if self._is_irreducible_p(mod):
                return tuple(mod)
        raise RuntimeError("no irreducible modulus found")  # unreachable

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        if e == 1:
            self.mul = [[(a * b) % p for b in range(q)] for a in range(q)]
        else:
            mod = list(self.modulus)

            def decode(code):
                v = []
                for _ in range(e):
                    v.append(code % p)
                    code //= p
                return v

            def encode(vec):
                code = 0
                for c in reversed(vec):
                    code = code * p + c
                return code

            self.mul = [[0] * q for _ in range(q)]
            vecs = [decode(c) for c in range(q)]
            for a in range(q):
                for b in range(a, q):
                    prod = self._poly_p_mul_mod(vecs[a], vecs[b], mod)
                    code = encode(prod + [0] * (e - len(prod)))
                    self.mul[a][b] = code
                    self.mul[b][a] = code
            self._decode = decode
            self._encode = encode
        # addition
        if e == 1:
            self.addtab = [[(a + b) % p for b in range(q)] for a in range(q)]
        else:
            def addc(a, b):
                va = self._decode(a)
                vb = self._decode(b)
                return self._encode([(x + y) % p for x, y in zip(va, vb)])
            self.addtab = [[addc(a, b) for b in range(q)] for a in range(q)]
        self.neg = [self.addtab[0][0]] * q
        for a in range(q):
            row = self.addtab[a]
            self.neg[a] = next(b for b in range(q) if row[b] == 0)
        self.inv = [0] * q
        for a in range(1, q):
            self.inv[a] = next(b for b in range(1, q) if self.mul[a][b] == 1)
        squares = {self.mul[a][a] for a in range(1, q)}
        self.is_square = [a in squares for a in range(q)]
        self.is_square[0] = True  # convention: only used for units via sgn
        # quadratic character on F_q (0 on 0)
        self.chi2 = [0] * q
        for a in range(1, q):
            self.chi2[a] = 1 if self.is_square[a] else -1

    # -- element ops -----------------------------------------------------
    def add_el(self, a, b):
        return self.addtab[a][b]

    def mul_el(self, a, b):
        return self.mul[a][b]

    def pow_el(self, a, n):
        r = 1
        while n:
            if n & 1:
                r = self.mul[r][a]
            a = self.mul[a][a]
            n >>= 1
        return r

    def __repr__(self):
        return f"FqField(p={self.p}, e={self.e}, q={self.q})"


@lru_cache(maxsize=None)
def build_field(p: int, e: int = 1) -> FqField:
    return FqField(p, e)


# ---------------------------------------------------------------------------
# polynomials over F_q: tuples, constant first, no trailing zeros
# ---------------------------------------------------------------------------

P_ZERO = ()
P_ONE = (1,)


def deg(a) -> int:
    return len(a) - 1


def is_monic(a) -> bool:
    return bool(a) and a[-1] == 1


def trim(a):
    i = len(a)
    while i and a[i - 1] == 0:
        i -= 1
    return tuple(a[:i])


def padd(F: FqField, a, b):
    tab = F.addtab
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = tab[out[i]][c]
    return trim(out)


def pneg(F: FqField, a):
    neg = F.neg
    return tuple(neg[c] for c in a)


def psub(F: FqField, a, b):
    return padd(F, a, pneg(F, b))


def pmul(F: FqField, a, b):
    if not a or not b:
        return P_ZERO
    mul = F.mul
    tab = F.addtab
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            rowm = mul[ai]
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = tab[out[i + j]][rowm[bj]]
    return trim(out)


def pscale(F: FqField, a, c):
    if c == 0:
        return P_ZERO
    row = F.mul[c]
    return tuple(row[x] for x in a)


def pdivmod(F: FqField, a, b):
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if len(a) < len(b):
        return P_ZERO, a
    mul = F.mul
    tab = F.addtab
    neg = F.neg
    inv_lead = F.inv[b[-1]]
    rem = list(a)
    db = len(b) - 1
    quot = [0] * (len(a) - db)
    for top in range(len(a) - 1, db - 1, -1):
        lead = rem[top]
        if lead:
            c = mul[lead][inv_lead]
            quot[top - db] = c
            rowc = mul[c]
            off = top - db
            for k in range(db + 1):
                rem[off + k] = tab[rem[off + k]][neg[rowc[b[k]]]]
    return trim(quot), trim(rem[:db])


def pmod(F: FqField, a, b):
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    db = len(b) - 1
    if len(a) <= db:
        return a
    mul = F.mul
    tab = F.addtab
    neg = F.neg
    inv_lead = F.inv[b[-1]]
    rem = list(a)
    for top in range(len(a) - 1, db - 1, -1):
        lead = rem[top]
        if lead:
            rowc = mul[mul[lead][inv_lead]]
            off = top - db
            for k in range(db):
                rem[off + k] = tab[rem[off + k]][neg[rowc[b[k]]]]
    return trim(rem[:db])


def pgcd_monic(F: FqField, a, b):
    while b:
        a, b = b, pmod(F, a, b)
    if not a:
        return P_ZERO
    return pscale(F, a, F.inv[a[-1]])


def derivative(F: FqField, a):
    # the image of the integer k in F_q has code k mod p (a constant digit)
    p = F.p
    mul = F.mul
    out = []
    for k in range(1, len(a)):
        kk = k % p
        out.append(mul[a[k]][kk] if kk else 0)
    return trim(out)


def peval(F: FqField, a, x):
    """Evaluate at a field element (Horner)."""
    mul = F.mul
    tab = F.addtab
    acc = 0
    for c in reversed(a):
        acc = tab[mul[acc][x]][c]
    return acc


def ppow_mod(F: FqField, a, n, mod):
    r = P_ONE
    a = pmod(F, a, mod)
    while n:
        if n & 1:
            r = pmod(F, pmul(F, r, a), mod)
        a = pmod(F, pmul(F, a, a), mod)
        n >>= 1
    return r


def sgn(F: FqField, d) -> int:
    """+1 iff the leading coefficient is a square in F_q^x."""
    if not d:
        raise ValueError("sgn of the zero polynomial")
    return 1 if F.is_square[d[-1]] else -1


# -- enumeration -------------------------------------------------------------

def monic_by_index(F: FqField, n: int, idx: int):
    """idx in [0, q**n): base-q digits give c_0..c_{n-1}; leading coeff 1."""
    q = F.q
    coeffs = []
    for _ in range(n):
        coeffs.append(idx % q)
        idx //= q
    coeffs.append(1)
    return tuple(coeffs) if n else P_ONE


def enumerate_monic(F: FqField, n: int, filt: str = "all", start: int = 0, stop=None):
    """Stream monic polynomials of degree n in base-q counting order.

    filt: 'all' | 'squarefree' | 'irreducible'.  [start, stop) indexes the
    underlying q**n range, so streams partition cleanly across workers.
    """
    if n < 0:
        raise ValueError("negative degree")
    total = F.q ** n
    if stop is None:
        stop = total
    for idx in range(start, stop):
        m = monic_by_index(F, n, idx)
        if filt == "all":
            yield m
        elif filt == "squarefree":
            if is_squarefree(F, m):
                yield m
        elif filt == "irreducible":
            if is_irreducible(F, m):
                yield m
        else:
            raise ValueError(f"unknown filter {filt!r}")


def is_squarefree(F: FqField, m) -> bool:
    if deg(m) <= 0:
        return bool(m)
    d = derivative(F, m)
    if not d:
        return False
    return deg(pgcd_monic(F, m, d)) == 0


@lru_cache(maxsize=None)
def _irreducibles_cached(field_key, n):
    F = build_field(*field_key)
    if n == 1:
        return tuple(monic_by_index(F, 1, i) for i in range(F.q))
    smaller = []
    for k in range(1, n // 2 + 1):
        smaller.extend(_irreducibles_cached(field_key, k))
    out = []
    for idx in range(F.q ** n):
        m = monic_by_index(F, n, idx)
        if all(pmod(F, m, p) for p in smaller):
            out.append(m)
    return tuple(out)


def irreducibles(F: FqField, n: int):
    """All monic irreducibles of degree n, enumeration order."""
    return _irreducibles_cached((F.p, F.e), n)


def is_irreducible(F: FqField, m) -> bool:
    n = deg(m)
    if n <= 0:
        return False
    if n == 1:
        return True
    for k in range(1, n // 2 + 1):
        for p in irreducibles(F, k):
            if not pmod(F, m, p):
                return False
    return True


def irreducible_count(F: FqField, n: int) -> int:
    """Irr_q(n) by the divisor-sum recurrence sum_{d|n} d*Irr(d) = q**n."""
    q = F.q
    total = q ** n
    for d in range(1, n):
        if n % d == 0:
            total -= d * irreducible_count(F, d)
    return total // n


# -- factorization -----------------------------------------------------------

def factor(F: FqField, m):
    """Complete factorization: (unit, ((irreducible, multiplicity), ...))."""
    if not m:
        raise ValueError("factor of the zero polynomial")
    key = (F.p, F.e, m)
    cached = _factor_cache.get(key)
    if cached is not None:
        return cached
    unit = m[-1]
    work = m if unit == 1 else pscale(F, m, F.inv[unit])
    factors = []
    while deg(work) > 0:
        p = None
        half = deg(work) // 2
        for dp in range(1, half + 1):
            for cand in irreducibles(F, dp):
                if not pmod(F, work, cand):
                    p = cand
                    break
            if p:
                break
        if p is None:
            p = work  # irreducible remainder
        mult = 0
        while True:
            quot, rem = pdivmod(F, work, p)
            if rem:
                break
            work = quot
            mult += 1
        factors.append((p, mult))
    factors.sort()
    result = (unit, tuple(factors))
    _factor_cache[key] = result
    return result


_factor_cache = {}


def mobius(F: FqField, m) -> int:
    unit, fs = factor(F, m)
    if any(mult > 1 for _, mult in fs):
        return 0
    return -1 if len(fs) % 2 else 1


def omega(F: FqField, m) -> int:
    return len(factor(F, m)[1])


def square_decomposition(F: FqField, m):
    """monic m = d0 * d1**2 with d0 monic square-free; returns (d0, d1)."""
    unit, fs = factor(F, m)
    if unit != 1:
        raise ValueError("square decomposition expects a monic polynomial")
    d0 = P_ONE
    d1 = P_ONE
    for p, mult in fs:
        if mult % 2:
            d0 = pmul(F, d0, p)
        for _ in range(mult // 2):
            d1 = pmul(F, d1, p)
    return d0, d1


def euler_phi(F: FqField, m) -> int:
    """|(F_q[x]/m)^x|; multiplicative with phi(p^k) = |p|^(k-1)(|p|-1)."""
    if not m:
        raise ValueError("euler_phi of the zero polynomial")
    q = F.q
    total = 1
    for p, mult in factor(F, m)[1]:
        np = q ** deg(p)
        total *= np ** (mult - 1) * (np - 1)
    return total


def poly_norm(F: FqField, m) -> int:
    return F.q ** deg(m)


# -- quadratic symbol ---------------------------------------------------------

def kronecker(F: FqField, d, m) -> int:
    """(d/m) for monic m; completely multiplicative in both arguments.

    Uses (b/m) = sgn(b)**deg(m) for constants and the sign-free reciprocity
    law available at q = 1 (mod 4).
    """
    if not is_monic(m):
        raise ValueError("lower argument must be monic")
    result = 1
    while True:
        if deg(m) == 0:
            return result
        if len(d) >= len(m):
            d = pmod(F, d, m)
        if not d:
            return 0
        lead = d[-1]
        if lead != 1:
            if not F.is_square[lead] and deg(m) % 2:
                result = -result
            d = pscale(F, d, F.inv[lead])
        if deg(d) == 0:
            return result
        d, m = m, d


def kronecker_factored(F: FqField, d, m) -> int:
    """Oracle: square test of d modulo each irreducible factor of m."""
    if not is_monic(m):
        raise ValueError("lower argument must be monic")
    result = 1
    for p, mult in factor(F, m)[1]:
        r = pmod(F, d, p)
        if not r:
            return 0
        np = F.q ** deg(p)
        t = ppow_mod(F, r, (np - 1) // 2, p)
        s = 1 if t == P_ONE else -1
        if mult % 2:
            result *= s
    return result


def coprime_part(F: FqField, m, d0):
    """The part of m coprime to d0 (divide out every shared irreducible)."""
    while True:
        g = pgcd_monic(F, m, d0)
        if deg(g) == 0:
            return m
        m = pdivmod(F, m, g)[0]


def divisors_monic(F: FqField, m):
    """All monic divisors of m."""
    unit, fs = factor(F, m)
    divs = [P_ONE]
    for p, mult in fs:
        more = []
        pk = P_ONE
        for k in range(mult + 1):
            more.extend(pmul(F, d, pk) for d in divs)
            if k < mult:
                pk = pmul(F, pk, p)
        divs = more
    return divs


def poly_str(m) -> str:
    if not m:
        return "0"
    bits = []
    for k, c in enumerate(m):
        if not c:
            continue
        if k == 0:
            bits.append(str(c))
        elif k == 1:
            bits.append("x" if c == 1 else f"{c}*x")
        else:
            bits.append(f"x^{k}" if c == 1 else f"{c}*x^{k}")
    return " + ".join(bits)


def poly_from_coeffs(coeffs):
    return trim(tuple(coeffs))
