"""Exact linear algebra over Q(t) used by the R-matrix and crystal modules.

Vectors are dicts keyed by arbitrary orderable hashables (basis states or
integer indices).  The central tool is an incremental echelon span with an
optional payload that transforms alongside each inserted vector; this gives
kernels, consistency checks and implicit matrix inversion in one mechanism.
Rows are content-stripped (pivot-normalised) as they enter.
"""

from __future__ import annotations

from .scalar import RF_ONE, RF_ZERO, RatFunc


def vec_sub_scaled(target: dict, src: dict, c: RatFunc) -> None:
    """target -= c * src, dropping exact zeros."""
    if c.is_zero():
        return
    for k, v in src.items():
        cur = target.get(k)
        if cur is None:
            target[k] = -(c * v)
        else:
            new = cur - c * v
            if new.is_zero():
                del target[k]
            else:
                target[k] = new


class Span:
    """Row space in echelon form, with payloads carried along.

    Each stored row is a pair (vec, payload) normalised so the pivot entry is
    one; stored rows are linear combinations of inserted pairs, so any linear
    identity verified against the span is exact.
    """

    def __init__(self):
        self.rows = {}  # pivot key -> (vec, payload)

    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict, payload: dict):
        """Return residuals of (vec, payload) against the span."""
        v = dict(vec)
        p = dict(payload)
        while v:
            piv = min(v)
            row = self.rows.get(piv)
            if row is None:
                return v, p, piv
            c = v[piv]
            vec_sub_scaled(v, row[0], c)
            vec_sub_scaled(p, row[1], c)
        return v, p, None

    def insert(self, vec: dict, payload: dict):
        """Insert a pair; returns None if independent, else the payload residual.

        A dependent vector's payload residual being nonzero witnesses an
        inconsistency of the linear relation the span is tracking.
        """
        v, p, piv = self.reduce(vec, payload)
        if piv is None:
            return p
        inv = v[piv].inv()
        if not inv.is_one():
            v = {k: c * inv for k, c in v.items()}
            p = {k: c * inv for k, c in p.items()}
        self.rows[piv] = (v, p)
        return None

    def express_payload(self, vec: dict):
        """For vec in the span, the payload of the combination producing it.

        Returns None when vec is outside the span.
        """
        v, p, piv = self.reduce(vec, {})
        if piv is not None:
            return None
        return {k: -c for k, c in p.items()}


def span_of(vectors) -> Span:
    sp = Span()
    for v in vectors:
        sp.insert(dict(v), {})
    return sp


class PairSpan:
    """Fraction-free echelon of (input, output) pairs of a linear map.

    Pairs are projective (jointly rescalable), so rows are kept over the
    Laurent polynomials: a reduction step is v -> r_p*v - v_p*r with no
    divisions, followed by integer-content and t-valuation stripping.  A
    dependent pair must reduce to (0, 0) exactly; a nonzero output residual
    witnesses an inconsistent system.  Division happens only when a column
    of the solved map is finally materialized.
    """

    _MARK = object()  # rides along to collect the joint scaling of a column

    def __init__(self):
        self.rows = {}  # pivot key -> (v: dict, w: dict), Laurent entries

    def rank(self) -> int:
        return len(self.rows)

    @staticmethod
    def _strip(v: dict, w: dict):
        import math as _math

        shift = None
        content = 0
        for d in (v, w):
            for c in d.values():
                if shift is None or c.shift < shift:
                    shift = c.shift
                if content != 1:
                    for x in c.num:
                        content = _math.gcd(content, x)
        if content in (0, 1) and (shift is None or shift == 0):
            return v, w
        if content == 0:
            content = 1
        out = []
        for d in (v, w):
            nd = {}
            for k, c in d.items():
                num = c.num if content == 1 else tuple(x // content for x in c.num)
                nd[k] = RatFunc(c.shift - shift, num, c.den)
            out.append(nd)
        return out[0], out[1]

    @staticmethod
    def _clear(d: dict) -> dict:
        """Multiply through by the denominators to reach Laurent form."""
        den = RF_ONE
        for c in d.values():
            if c.den != (1,):
                den = den * RatFunc(0, c.den, (1,))
        if den.is_one():
            return dict(d)
        return {k: c * den for k, c in d.items()}

    def _reduce(self, v: dict, w: dict):
        mark = PairSpan._MARK
        while True:
            piv = None
            for k in v:
                if k is mark:
                    continue
                if piv is None or k < piv:
                    piv = k
            if piv is None:
                return v, w
            row = self.rows.get(piv)
            if row is None:
                return v, w
            rp = row[0][piv]
            vp = v[piv]
            nv = {k: c * rp for k, c in v.items()}
            nw = {k: c * rp for k, c in w.items()}
            vec_sub_scaled(nv, row[0], vp)
            vec_sub_scaled(nw, row[1], vp)
            v, w = self._strip(nv, nw)

    def insert(self, v: dict, w: dict):
        """None if independent (stored); else the output residual dict.

        A dependent pair of a consistent system reduces to (0, 0); any
        nonzero residual is returned for the caller to diagnose.
        """
        v, w = self._strip(self._clear(v), self._clear(w))
        v, w = self._reduce(v, w)
        if v:
            self.rows[min(v)] = (v, w)
            return None
        return w

    def raw_column(self, key):
        """The solved pair (lam * e_key, lam * R(e_key)) in Laurent form,
        or None when e_key is outside the span."""
        mark = PairSpan._MARK
        v, w = self._reduce({key: RF_ONE, mark: RF_ONE}, {})
        if len(v) != 1:
            return None
        lam = v[mark]
        return lam, {k: -c for k, c in w.items()}

    def column(self, key):
        """R(e_key) as a rational dict, or None outside the span."""
        rc = self.raw_column(key)
        if rc is None:
            return None
        lam, w = rc
        inv = lam.inv()
        return {k: c * inv for k, c in w.items()}


def kernel_basis(columns: list) -> list:
    """Right kernel of the matrix whose j-th column is columns[j] (a dict).

    Returns coefficient dicts {j: RatFunc} describing independent kernel
    vectors, in deterministic order.
    """
    sp = Span()
    out = []
    for j, col in enumerate(columns):
        resid = sp.insert(dict(col), {j: RF_ONE})
        if resid is not None:
            resid[j] = resid.get(j, RF_ONE)
            out.append(resid)
    return out


def solve_in_span(vectors: list, target: dict):
    """Coefficients c_j with sum c_j * vectors[j] = target, or None."""
    sp = Span()
    for j, v in enumerate(vectors):
        sp.insert(dict(v), {j: RF_ONE})
    return sp.express_payload(dict(target))


# -- dense fiber-block matrices (lists of rows of RatFunc) -------------------

def mat_identity(dim: int) -> list:
    return [[RF_ONE if i == j else RF_ZERO for j in range(dim)] for i in range(dim)]

def mat_scale(A: list, c: RatFunc) -> list:
    return [[x * c for x in row] for row in A]

def mat_add(A: list, B: list) -> list:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]

def mat_sub(A: list, B: list) -> list:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]

def mat_mul(A: list, B: list) -> list:
    nb = len(B[0])
    Bt = [[B[k][j] for k in range(len(B))] for j in range(nb)]
    out = []
    for row in A:
        orow = []
        for col in Bt:
            acc = RF_ZERO
            for x, y in zip(row, col):
                if not (x.is_zero() or y.is_zero()):
                    acc = acc + x * y
            orow.append(acc)
        out.append(orow)
    return out

def mat_is_zero(A: list) -> bool:
    return all(x.is_zero() for row in A for x in row)

def mat_eq(A: list, B: list) -> bool:
    return all(x == y for ra, rb in zip(A, B) for x, y in zip(ra, rb))

def mat_rank(A: list) -> int:
    sp = Span()
    for row in A:
        sp.insert({j: x for j, x in enumerate(row) if not x.is_zero()}, {})
    return sp.rank()

def mat_apply(A: list, v: list) -> list:
    return [
        sum((x * c for x, c in zip(row, v) if not (x.is_zero() or c.is_zero())), RF_ZERO)
        for row in A
    ]
