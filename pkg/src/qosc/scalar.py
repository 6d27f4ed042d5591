"""Exact arithmetic in Q(t), t = q^(1/2), plus signed q-combinatorics.

A RatFunc is stored as t**shift * num(t)/den(t) where num and den are
integer-coefficient polynomials with nonzero constant term, gcd(num, den) = 1,
positive leading denominator coefficient, and coprime integer contents.  This
makes equality a representation identity and the order at t = 0 an O(1) read.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import lru_cache

from .errors import PoleAtPoint

Poly = tuple  # int coefficients, index = t-exponent, last entry nonzero

_PZERO: Poly = (0,)
_PONE: Poly = (1,)


# ---------------------------------------------------------------------------
# dense integer polynomial helpers
# ---------------------------------------------------------------------------

def _ptrim(c: list) -> Poly:
    k = len(c)
    while k > 0 and c[k - 1] == 0:
        k -= 1
    return tuple(c[:k]) if k else _PZERO


def _padd(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    c = list(a)
    for i, x in enumerate(b):
        c[i] += x
    return _ptrim(c)


def _pneg(a: Poly) -> Poly:
    return tuple(-x for x in a)


def _kron_pack(a: Poly, s: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc << s) | c
    return acc


def _pmul(a: Poly, b: Poly) -> Poly:
    if a == _PZERO or b == _PZERO:
        return _PZERO
    if a == _PONE:
        return b
    if b == _PONE:
        return a
    if len(a) == 1:
        x = a[0]
        return tuple(x * y for y in b)
    if len(b) == 1:
        y = b[0]
        return tuple(x * y for x in a)
    if len(a) * len(b) > 512:
        # Kronecker substitution: one bigint product per sign part
        ap = tuple(x if x > 0 else 0 for x in a)
        an = tuple(-x if x < 0 else 0 for x in a)
        bp = tuple(x if x > 0 else 0 for x in b)
        bn = tuple(-x if x < 0 else 0 for x in b)
        s = (
            max(max(ap), max(an)).bit_length()
            + max(max(bp), max(bn)).bit_length()
            + min(len(a), len(b)).bit_length()
            + 1
        )
        pos = _kron_pack(ap, s) * _kron_pack(bp, s) + _kron_pack(an, s) * _kron_pack(bn, s)
        neg = _kron_pack(ap, s) * _kron_pack(bn, s) + _kron_pack(an, s) * _kron_pack(bp, s)
        nout = len(a) + len(b) - 1
        mask = (1 << s) - 1
        c = [0] * nout
        for i in range(nout):
            c[i] = (pos & mask) - (neg & mask)
            pos >>= s
            neg >>= s
        return _ptrim(c)
    c = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    c[i + j] += x * y
    return _ptrim(c)


def _pcontent(a: Poly) -> int:
    g = 0
    for x in a:
        if x:
            g = math.gcd(g, x)
            if g == 1:
                return 1
    return g if g else 1


def _pdiv_exact(a: Poly, b: Poly) -> Poly:
    """Quotient a/b assuming the division is exact."""
    if a == _PZERO:
        return _PZERO
    if b == _PONE:
        return a
    if len(b) == 1:
        d = b[0]
        return tuple(x // d for x in a)
    ra = list(a)
    db, lb = len(b) - 1, b[-1]
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(a) - 1, db - 1, -1):
        if ra[i]:
            c = ra[i] // lb
            q[i - db] = c
            for j in range(len(b)):
                ra[i - db + j] -= c * b[j]
    return _ptrim(q)


def _pdiv_checked(a: Poly, b: Poly):
    """Quotient a/b, or None when b does not divide a (early abort)."""
    if a == _PZERO:
        return _PZERO
    if len(a) < len(b):
        return None
    ra = list(a)
    db, lb = len(b) - 1, b[-1]
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(a) - 1, db - 1, -1):
        if ra[i]:
            c, rem = divmod(ra[i], lb)
            if rem:
                return None
            q[i - db] = c
            for j in range(db):
                ra[i - db + j] -= c * b[j]
            ra[i] = 0
    for x in ra:
        if x:
            return None
    return _ptrim(q)


def _pprem(a: Poly, b: Poly) -> Poly:
    """Pseudo-remainder of a by b (lc(b)^(deg a - deg b + 1) * a mod b)."""
    da, db = len(a) - 1, len(b) - 1
    lb = b[-1]
    r = list(a)
    for i in range(da, db - 1, -1):
        ri = r[i]
        for j in range(len(r)):
            r[j] *= lb
        if ri:
            for j in range(db + 1):
                r[i - db + j] -= ri * b[j]
        r[i] = 0
    return _ptrim(r)


_GCD_PRIMES = (2305843009213693951, 4611686018427387847)  # 2^61-1, near 2^62


def _mod_gcd_image(a: Poly, b: Poly):
    """(monic gcd of the images mod p, p), or None if no prime fits.

    The reduction of the true gcd divides the modular gcd whenever p misses
    both leading coefficients, so a constant image proves coprimality and a
    nontrivial image is a lift candidate (verified by trial division).
    """
    for p in _GCD_PRIMES:
        if a[-1] % p == 0 or b[-1] % p == 0:
            continue
        ra = [x % p for x in a]
        rb = [x % p for x in b]
        while True:
            while rb and rb[-1] == 0:
                rb.pop()
            if not rb:
                break
            if len(rb) == 1:
                return (1,), p
            if len(ra) < len(rb):
                ra, rb = rb, ra
                continue
            inv = pow(rb[-1], -1, p)
            db = len(rb) - 1
            for i in range(len(ra) - 1, db - 1, -1):
                c = ra[i] * inv % p
                if c:
                    for j in range(db + 1):
                        ra[i - db + j] = (ra[i - db + j] - c * rb[j]) % p
            ra, rb = rb, ra
        inv = pow(ra[-1], -1, p)
        return tuple(x * inv % p for x in ra), p
    return None


_gcd_cache = {}


def _pgcd(a: Poly, b: Poly) -> Poly:
    """Primitive gcd in Z[t] with positive leading coefficient."""
    if a == _PZERO:
        return b if b[-1] > 0 else _pneg(b)
    if b == _PZERO:
        return a if a[-1] > 0 else _pneg(a)
    if a == _PONE or b == _PONE:
        return _PONE
    if len(a) == 1 or len(b) == 1:
        return (math.gcd(_pcontent(a), _pcontent(b)),)
    if a == b:
        return a if a[-1] > 0 else _pneg(a)
    key = (a, b)
    hit = _gcd_cache.get(key)
    if hit is not None:
        return hit
    ca, cb = _pcontent(a), _pcontent(b)
    cont = math.gcd(ca, cb)
    pa = tuple(x // ca for x in a)
    pb = tuple(x // cb for x in b)
    img = _mod_gcd_image(pa, pb)
    g = None
    if img is not None:
        gp, p = img
        if len(gp) == 1:
            g = _PONE
        else:
            # lift with the leading coefficient bound and verify by division
            lc = math.gcd(pa[-1], pb[-1])
            half = p // 2
            cand = []
            ok = True
            for x in gp:
                v = x * lc % p
                if v > half:
                    v -= p
                cand.append(v)
            cc = _pcontent(tuple(cand))
            cand = tuple(x // cc for x in cand)
            if cand[-1] < 0:
                cand = _pneg(cand)
            if _pdiv_checked(pa, cand) is not None and _pdiv_checked(pb, cand) is not None:
                g = cand
            else:
                ok = False
        if g is None and not ok:
            g = None  # fall through to PRS
    if g is None:
        if len(pa) < len(pb):
            pa, pb = pb, pa
        while True:
            r = _pprem(pa, pb)
            if r == _PZERO:
                g = pb
                break
            cr = _pcontent(r)
            pa, pb = pb, tuple(x // cr for x in r)
            if len(pb) == 1:
                g = _PONE
                break
        if g[-1] < 0:
            g = _pneg(g)
    if cont != 1:
        g = _pmul((cont,), g)
    if len(_gcd_cache) < 1 << 17:
        _gcd_cache[key] = g
    return g


def _peval(a: Poly, t0: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * t0 + c
    return acc


# ---------------------------------------------------------------------------
# RatFunc
# ---------------------------------------------------------------------------

class RatFunc:
    __slots__ = ("shift", "num", "den")

    def __init__(self, shift: int, num: Poly, den: Poly):
        # caller guarantees canonical form; use make() otherwise
        self.shift = shift
        self.num = num
        self.den = den

    # -- construction -------------------------------------------------------

    @staticmethod
    def make(shift: int, num: Poly, den: Poly) -> "RatFunc":
        if den == _PZERO:
            raise ZeroDivisionError("zero denominator")
        if num == _PZERO:
            return RF_ZERO
        vn = 0
        while num[vn] == 0:
            vn += 1
        vd = 0
        while den[vd] == 0:
            vd += 1
        shift += vn - vd
        num = num[vn:]
        den = den[vd:]
        if den != _PONE:
            g = _pgcd(num, den)
            if g != _PONE:
                num = _pdiv_exact(num, g)
                den = _pdiv_exact(den, g)
            c = math.gcd(_pcontent(num), _pcontent(den))
            if c != 1:
                num = tuple(x // c for x in num)
                den = tuple(x // c for x in den)
            if den[-1] < 0:
                num = _pneg(num)
                den = _pneg(den)
        if den == _PONE and num == _PONE and shift == 0:
            return RF_ONE
        return RatFunc(shift, num, den)

    @staticmethod
    def from_int(k: int) -> "RatFunc":
        if k == 0:
            return RF_ZERO
        if k == 1:
            return RF_ONE
        return RatFunc(0, (k,), _PONE)

    @staticmethod
    def from_fraction(f) -> "RatFunc":
        f = Fraction(f)
        if f == 0:
            return RF_ZERO
        return RatFunc.make(0, (f.numerator,), (f.denominator,))

    @staticmethod
    def t_pow(k: int) -> "RatFunc":
        if k == 0:
            return RF_ONE
        return RatFunc(k, _PONE, _PONE)

    @staticmethod
    def from_coeffs(coeffs: dict) -> "RatFunc":
        """Laurent polynomial from a {t-exponent: int} map."""
        if not coeffs:
            return RF_ZERO
        lo = min(coeffs)
        hi = max(coeffs)
        c = [0] * (hi - lo + 1)
        for k, v in coeffs.items():
            c[k - lo] = v
        return RatFunc.make(lo, _ptrim(c), _PONE)

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num == _PZERO

    def is_one(self) -> bool:
        return self.shift == 0 and self.num == _PONE and self.den == _PONE

    # -- ring operations -----------------------------------------------------

    def __neg__(self) -> "RatFunc":
        if self.num == _PZERO:
            return self
        return RatFunc(self.shift, _pneg(self.num), self.den)

    def __add__(self, other: "RatFunc") -> "RatFunc":
        if self.num == _PZERO:
            return other
        if other.num == _PZERO:
            return self
        s = min(self.shift, other.shift)
        a = self.num if self.shift == s else (0,) * (self.shift - s) + self.num
        b = other.num if other.shift == s else (0,) * (other.shift - s) + other.num
        if self.den == other.den:
            return RatFunc.make(s, _padd(a, b), self.den)
        if self.den == _PONE:
            return RatFunc.make(s, _padd(_pmul(a, other.den), b), other.den)
        if other.den == _PONE:
            return RatFunc.make(s, _padd(a, _pmul(b, self.den)), self.den)
        g = _pgcd(self.den, other.den)
        if g == _PONE:
            num = _padd(_pmul(a, other.den), _pmul(b, self.den))
            return RatFunc.make(s, num, _pmul(self.den, other.den))
        d2 = _pdiv_exact(other.den, g)
        num = _padd(_pmul(a, d2), _pmul(b, _pdiv_exact(self.den, g)))
        return RatFunc.make(s, num, _pmul(self.den, d2))

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        if self.num == _PZERO or other.num == _PZERO:
            return RF_ZERO
        n1, d1 = self.num, self.den
        n2, d2 = other.num, other.den
        if d2 != _PONE:
            g = _pgcd(n1, d2)
            if g != _PONE:
                n1 = _pdiv_exact(n1, g)
                d2 = _pdiv_exact(d2, g)
        if d1 != _PONE:
            g = _pgcd(n2, d1)
            if g != _PONE:
                n2 = _pdiv_exact(n2, g)
                d1 = _pdiv_exact(d1, g)
        return RatFunc.make(self.shift + other.shift, _pmul(n1, n2), _pmul(d1, d2))

    def inv(self) -> "RatFunc":
        if self.num == _PZERO:
            raise ZeroDivisionError("inverse of zero")
        num, den = self.den, self.num
        if den[-1] < 0:
            num, den = _pneg(num), _pneg(den)
        return RatFunc(-self.shift, num, den)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        return self * other.inv()

    def __pow__(self, k: int) -> "RatFunc":
        if k == 0:
            return RF_ONE
        base = self if k > 0 else self.inv()
        out = base
        for _ in range(abs(k) - 1):
            out = out * base
        return out

    # -- queries -------------------------------------------------------------

    def order_at_zero(self):
        """(order, lead) of the t-expansion; rejects zero."""
        if self.num == _PZERO:
            raise ZeroDivisionError("order of zero is undefined")
        return self.shift, Fraction(self.num[0], self.den[0])

    def specialize(self, t0) -> Fraction:
        t0 = Fraction(t0)
        if self.num == _PZERO:
            return Fraction(0)
        if t0 == 0:
            if self.shift < 0:
                raise PoleAtPoint("pole at t = 0")
            if self.shift > 0:
                return Fraction(0)
            return Fraction(self.num[0], self.den[0])
        d = _peval(self.den, t0)
        if d == 0:
            raise PoleAtPoint(f"pole at t = {t0}")
        return _peval(self.num, t0) / d * t0 ** self.shift

    # -- dunder plumbing -----------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RatFunc)
            and self.shift == other.shift
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.shift, self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.serialize()!r})"

    # -- serialization -------------------------------------------------------

    def serialize(self) -> str:
        """Sparse "c*t^k +- ..." text, "num/den" when a denominator remains."""
        if self.num == _PZERO:
            return "0"
        s = self.shift
        if s >= 0:
            num = _poly_str(self.num, s)
            den = _poly_str(self.den, 0)
        else:
            num = _poly_str(self.num, 0)
            den = _poly_str(self.den, -s)
        return num if den == "1" else f"{num}/{den}"


def _poly_str(a: Poly, shift: int) -> str:
    parts = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if not c:
            continue
        e = k + shift
        mag = abs(c)
        if e == 0:
            term = str(mag)
        elif mag == 1:
            term = f"t^{e}" if e != 1 else "t"
        else:
            term = f"{mag}*t^{e}" if e != 1 else f"{mag}*t"
        if not parts:
            parts.append(term if c > 0 else "-" + term)
        else:
            parts.append((" + " if c > 0 else " - ") + term)
    return "".join(parts)


RF_ZERO = RatFunc(0, _PZERO, _PONE)
RF_ONE = RatFunc(0, _PONE, _PONE)


def rf(x) -> RatFunc:
    """Coerce an int or Fraction to a RatFunc."""
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, int):
        return RatFunc.from_int(x)
    return RatFunc.from_fraction(x)


# ---------------------------------------------------------------------------
# A_0 membership and probes
# ---------------------------------------------------------------------------

def order_at_zero(f: RatFunc):
    return f.order_at_zero()


def in_A0(f: RatFunc) -> bool:
    """Is f regular at t = 0 (the ring A_0)?"""
    return f.is_zero() or f.shift >= 0


def in_one_plus_qA0(f: RatFunc) -> bool:
    """Is f in 1 + q*A_0, i.e. 1 + t^2*A_0?"""
    if f.is_zero():
        return False
    order, lead = f.order_at_zero()
    if order != 0 or lead != 1:
        return False
    g = f - RF_ONE
    return g.is_zero() or g.shift >= 2


def specialize(f: RatFunc, t0) -> Fraction:
    return f.specialize(t0)


def probe_equal(f: RatFunc, g: RatFunc, points=3, seed=0) -> bool:
    """Evaluate f and g at random rational points, skipping poles.

    A False result disproves equality; True is only evidence.  Exact
    comparison stays authoritative.
    """
    rng = random.Random(seed)
    done = 0
    while done < points:
        t0 = Fraction(rng.randint(2, 97), rng.randint(1, 31))
        try:
            if f.specialize(t0) != g.specialize(t0):
                return False
        except PoleAtPoint:
            continue
        done += 1
    return True


# ---------------------------------------------------------------------------
# q-combinatorics with sign epsilon; q_i = t^(2 d_i)
# ---------------------------------------------------------------------------

def _dd(dh) -> int:
    """2*d_i as an int from a half-integer d_i."""
    d2 = 2 * Fraction(dh)
    if d2.denominator != 1 or d2 <= 0:
        raise ValueError(f"d_i must be a positive half-integer, got {dh}")
    return int(d2)


@lru_cache(maxsize=None)
def _q_int_cached(m: int, eps: int, dd: int) -> RatFunc:
    if m == 0:
        return RF_ZERO
    sign = 1 if eps == 1 or (m - 1) % 2 == 0 else -1
    coeffs = {}
    for j in range(m):
        c = sign * (1 if eps == 1 or j % 2 == 0 else -1)
        coeffs[(m - 1 - 2 * j) * dd] = coeffs.get((m - 1 - 2 * j) * dd, 0) + c
    return RatFunc.from_coeffs(coeffs)


def q_int(m: int, eps: int = 1, dh=1) -> RatFunc:
    """[m]_{q_i, eps} = ((eps*q_i)^m - q_i^(-m)) / (eps*q_i - q_i^(-1))."""
    if m < 0:
        raise ValueError("q_int needs m >= 0")
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    return _q_int_cached(m, eps, _dd(dh))


@lru_cache(maxsize=None)
def _q_fact_cached(m: int, eps: int, dd: int) -> RatFunc:
    out = RF_ONE
    for j in range(1, m + 1):
        out = out * _q_int_cached(j, eps, dd)
    return out


def q_fact(m: int, eps: int = 1, dh=1) -> RatFunc:
    """[m]_{q_i, eps}! with [0]! = 1."""
    if m < 0:
        raise ValueError("q_fact needs m >= 0")
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    return _q_fact_cached(m, eps, _dd(dh))


@lru_cache(maxsize=None)
def _q_binom_cached(m: int, k: int, eps: int, dd: int) -> RatFunc:
    num = _q_fact_cached(m, eps, dd)
    den = _q_fact_cached(k, eps, dd) * _q_fact_cached(m - k, eps, dd)
    return num / den


def q_binom(m: int, k: int, eps: int = 1, dh=1) -> RatFunc:
    """Gaussian binomial [m choose k]_{q_i, eps}."""
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= m, got ({m}, {k})")
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    return _q_binom_cached(m, k, eps, _dd(dh))
