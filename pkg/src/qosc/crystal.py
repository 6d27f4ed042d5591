"""Kashiwara operators, distinguished highest weight vectors, and tableaux.

Middle-node crystal operators are computed exactly by string decomposition
(per-weight kernel linear algebra); the boundary operators at nodes 0 and n
follow the u_k string recipe on basis rays.  The level-2 combinatorics uses
row tableaux in the alphabet bar-n < ... < bar-1 on 180-degree-rotated
shapes, with Schensted insertion for the crystal-equivalence normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotSorted, QoscError
from .fock import SparseVec
from .linalg import kernel_basis, solve_in_span
from .report import Report
from .scalar import RF_ONE, RatFunc, in_one_plus_qA0, q_binom, q_fact, q_int
from .reps import C1, C2, AlgebraSpec, act, bilinear, coact, eval_word_sum, k_exponent


# ---------------------------------------------------------------------------
# mod-q reduction
# ---------------------------------------------------------------------------

def reduce_mod_q(v: SparseVec):
    """(is_lattice, leads) where leads maps states to order-0 lead terms."""
    ok = True
    leads = {}
    for st, c in v.terms.items():
        order, lead = c.order_at_zero()
        if order < 0:
            ok = False
        elif order == 0:
            leads[st] = lead
    return ok, leads


def reduce_to_unit_state(v: SparseVec):
    """The single basis state with coefficient 1 mod q, if the reduction has
    that shape; otherwise None."""
    ok, leads = reduce_mod_q(v)
    if not ok or len(leads) != 1:
        return None
    (st, lead), = leads.items()
    return st if lead == 1 else None


# ---------------------------------------------------------------------------
# exact middle-node operators via string decomposition
# ---------------------------------------------------------------------------

def _middle_moves(state, i, letter):
    """Support-level moves of coact(e_i/f_i) on one tensor state."""
    out = []
    for k, m in enumerate(state):
        if letter == "e":
            if m[i - 1] >= 1:
                out.append(state[:k] + (m[: i - 1] + (m[i - 1] - 1, m[i] + 1) + m[i + 1 :],) + state[k + 1 :])
        else:
            if m[i] >= 1:
                out.append(state[:k] + (m[: i - 1] + (m[i - 1] + 1, m[i] - 1) + m[i + 1 :],) + state[k + 1 :])
    return out


def _reachable(i, support):
    seen = set(support)
    queue = list(support)
    while queue:
        st = queue.pop()
        for letter in ("e", "f"):
            for nxt in _middle_moves(st, i, letter):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return seen


def _weight(state, i):
    return sum(m[i] - m[i - 1] for m in state)


def kashiwara_middle(spec: AlgebraSpec, i: int, v: SparseVec, direction: str) -> SparseVec:
    """Exact lower crystal operator for 1 <= i <= n-1 on a weight vector."""
    if not 1 <= i <= spec.n - 1:
        raise ValueError("middle operator needs 1 <= i <= n-1")
    if v.is_zero():
        return SparseVec()
    s = len(next(iter(v.terms)))
    params = (RF_ONE,) * s
    weights = {_weight(st, i) for st in v.terms}
    if len(weights) != 1:
        raise ValueError("kashiwara operator needs a weight vector")
    c0 = weights.pop()
    states = _reachable(i, v.support())
    slices = {}
    for st in states:
        slices.setdefault(_weight(st, i), []).append(st)

    tagged = []  # (tag, vec-as-dict) for every string vector u_k
    strings = {}  # tag -> list of SparseVec, index k
    for ch in sorted(slices, reverse=True):
        if ch < abs(c0):
            continue
        if (ch - c0) % 2:
            continue
        basis = sorted(slices[ch])
        cols = []
        for st in basis:
            img = coact(spec, "e", i, params, SparseVec.basis(st))
            cols.append(dict(img.terms))
        for sid, kern in enumerate(kernel_basis(cols)):
            u = SparseVec()
            for j, c in kern.items():
                u.add_term(basis[j], c)
            chain = [u]
            cur = u
            k = 0
            while True:
                k += 1
                cur = coact(spec, "f", i, params, cur).scale(q_int(k).inv())
                if cur.is_zero():
                    break
                chain.append(cur)
                if k > ch + 1:
                    raise QoscError("string longer than its sl2 weight allows")
            strings[(ch, sid)] = chain
    for tag, chain in strings.items():
        for k, u_k in enumerate(chain):
            if _weight(next(iter(u_k.terms)), i) == c0:
                tagged.append(((tag, k), dict(u_k.terms)))
    coeffs = solve_in_span([vec for _tag, vec in tagged], dict(v.terms))
    if coeffs is None:
        raise QoscError("string decomposition failed to express the vector")
    out = SparseVec()
    for pos, c in coeffs.items():
        (tag, k) = tagged[pos][0]
        k2 = k + 1 if direction == "f" else k - 1
        if 0 <= k2 < len(strings[tag]):
            for st, cc in strings[tag][k2].terms.items():
                out.add_term(st, c * cc)
    return out


def kashiwara_f(spec: AlgebraSpec, i: int, v: SparseVec) -> SparseVec:
    return kashiwara_middle(spec, i, v, "f")


def kashiwara_e(spec: AlgebraSpec, i: int, v: SparseVec) -> SparseVec:
    return kashiwara_middle(spec, i, v, "e")


# ---------------------------------------------------------------------------
# boundary operators on basis rays (u_k recipe)
# ---------------------------------------------------------------------------

def _boundary_coeff(spec: AlgebraSpec, letter: str, i: int, m):
    """Displayed-form coefficient of the raising/lowering op at node 0 or n.

    For c2 at i = 0 the sigma-dressing sign is stripped: the u_k recipe (and
    the paper's crystal tables) are computed with the displayed operator.
    """
    r = act(spec, letter, i, m)
    if r is None:
        return None
    tgt, c = r
    if spec.kind == C2 and i == 0:
        parity = sum(m) % 2
        if (letter == "e" and parity == 0) or (letter == "f" and parity == 1):
            c = -c
    return tgt, c


def tilde_boundary(spec: AlgebraSpec, i: int, m: tuple, direction: str):
    """f~_i / e~_i at i in {0, n} on a basis state: (state, exact scalar) or None."""
    n = spec.n
    if i not in (0, n):
        raise ValueError("boundary operator needs i in {0, n}")
    wide = spec.kind == C1 if i == n else spec.kind != C2
    step = 2 if wide else 1
    coord = 0 if i == 0 else n - 1
    raising = "e" if i == 0 else "f"  # the string-building operator
    strip = m[coord] % step
    k = (m[coord] - strip) // step
    head = m[:coord] + (strip,) + m[coord + 1 :]
    dd = spec.d2[i]
    e_head = k_exponent(spec, i, head)
    l = Fraction(e_head if i == 0 else -e_head, dd)
    up = direction == ("e" if i == 0 else "f")
    k2 = k + 1 if up else k - 1
    if k2 < 0:
        return None

    def gamma(kk: int) -> RatFunc:
        exp = Fraction(dd) * Fraction(kk * (kk + 2 * l - 1), 2)
        if exp.denominator != 1:
            raise QoscError("non-integral t-exponent in u_k recipe")
        out = RatFunc.t_pow(int(exp))
        cur = head
        for _ in range(kk):
            tgt, c = _boundary_coeff(spec, raising, i, cur)
            out = out * c
            cur = tgt
        return out * spec.q_fact_i(kk, i).inv()

    g_k = gamma(k)
    g_k2 = gamma(k2)
    delta = (step if up else -step)
    target = m[:coord] + (m[coord] + delta,) + m[coord + 1 :]
    return target, g_k2 / g_k


# ---------------------------------------------------------------------------
# crystal-base verification (Props 3.5 / 3.8 / 3.11 tables)
# ---------------------------------------------------------------------------

def expected_table(spec: AlgebraSpec, op: str, i: int, m: tuple):
    """The displayed mod-q image of f~_i / e~_i on |m>, or None for zero."""
    n = spec.n
    add = lambda j, d: m[:j] + (m[j] + d,) + m[j + 1 :]
    wide0 = spec.kind != C2
    widen = spec.kind == C1
    if op == "f":
        if i == n:
            return add(n - 1, 2 if widen else 1)
        if i == 0:
            step = 2 if wide0 else 1
            return add(0, -step) if m[0] >= step else None
        return (m[: i - 1] + (m[i - 1] + 1, m[i] - 1) + m[i + 1 :]) if m[i] >= 1 else None
    if i == n:
        step = 2 if widen else 1
        return add(n - 1, -step) if m[n - 1] >= step else None
    if i == 0:
        return add(0, 2 if wide0 else 1)
    return (m[: i - 1] + (m[i - 1] - 1, m[i] + 1) + m[i + 1 :]) if m[i - 1] >= 1 else None


def verify_crystal_base(spec: AlgebraSpec, D: int) -> Report:
    """Exact operators reduce mod t^{>0} to the displayed tables; lattice
    invariance holds exactly; the string norms stay in 1 + qA_0."""
    from .reps import _basis_states

    rep = Report("crystal", spec.kind, spec.n, D)
    n = spec.n
    for m in _basis_states(n, D):
        for i in range(n + 1):
            for op in ("f", "e"):
                if 1 <= i <= n - 1:
                    vec = kashiwara_middle(spec, i, SparseVec.basis((m,)), op)
                    ok, _leads = reduce_mod_q(vec)
                    unit = reduce_to_unit_state(vec)
                    got = unit[0] if unit is not None else None
                else:
                    r = tilde_boundary(spec, i, m, op)
                    ok = True
                    got = None
                    if r is not None:
                        st, c = r
                        order, lead = c.order_at_zero()
                        ok = order >= 0
                        got = st if (order == 0 and lead == 1) else None
                want = expected_table(spec, op, i, m)
                rep.asserted += 1
                if not ok:
                    rep.record_violation(f"lattice_{op}~{i}", ",".join(map(str, m)), "order<0")
                if got != want:
                    rep.record_violation(
                        f"table_{op}~{i}", ",".join(map(str, m)), f"got={got} want={want}"
                    )
            # partial-inverse axiom: e~_i f~_i = id mod q on nonzero images
            if 1 <= i <= n - 1:
                fv = kashiwara_middle(spec, i, SparseVec.basis((m,)), "f")
                if not fv.is_zero() and reduce_to_unit_state(fv) is not None:
                    back = reduce_to_unit_state(kashiwara_middle(spec, i, fv, "e"))
                    rep.asserted += 1
                    if back != (m,):
                        rep.record_violation(f"ef_axiom({i})", ",".join(map(str, m)), str(back))
            else:
                r = tilde_boundary(spec, i, m, "f")
                if r is not None:
                    st, c = r
                    r2 = tilde_boundary(spec, i, st, "e")
                    rep.asserted += 1
                    if r2 is None or r2[0] != m or not (c * r2[1]).is_one():
                        rep.record_violation(f"ef_axiom({i})", ",".join(map(str, m)), str(r2))
    # 1 + qA_0 norm property along the boundary strings, k <= 3
    for m in _basis_states(n, min(D, 4)):
        for i, raising in ((n, "f"), (0, "e")):
            coord = 0 if i == 0 else n - 1
            wide = spec.kind == C1 if i == n else spec.kind != C2
            step = 2 if wide else 1
            if m[coord] >= step:
                continue  # not a string head
            cur, scal = m, RF_ONE
            for _k in range(1, 4):
                cur, c = tilde_boundary(spec, i, cur, raising)
                scal = scal * c
                val = scal * scal * bilinear(cur, cur)
                rep.asserted += 1
                if not in_one_plus_qA0(val):
                    rep.record_violation(
                        f"norm_{raising}~{i}", ",".join(map(str, m)), val.serialize()
                    )
    return rep


# ---------------------------------------------------------------------------
# distinguished vectors v_l and v_{l,l'}
# ---------------------------------------------------------------------------

def build_v_l(spec: AlgebraSpec, l: int) -> SparseVec:
    """v_l = sum_k (-1)^k q^{k(k-l+1)} [l choose k]^{-1} |k,l-k> (x) |l-k,k>
    in the e_{n-1}, e_n coordinates."""
    if spec.n < 2:
        raise ValueError("v_l needs n >= 2")
    n = spec.n
    out = SparseVec()
    for k in range(l + 1):
        coeff = RatFunc.t_pow(2 * k * (k - l + 1)) * q_binom(l, k).inv()
        if k % 2:
            coeff = -coeff
        left = [0] * n
        left[n - 2], left[n - 1] = k, l - k
        right = [0] * n
        right[n - 2], right[n - 1] = l - k, k
        out.add_term((tuple(left), tuple(right)), coeff)
    return out


def build_v_ll(spec: AlgebraSpec, l: int, l2: int) -> SparseVec:
    """v_{l,l'} = q_n^{...} f_n^{(m)} v_l via the two-fold coproduct."""
    if spec.kind == C1:
        if l2 % 2:
            raise ValueError("c1 needs even l'")
        mm = l2 // 2
        texp = 2 * mm * (mm + 2 * l + 1)  # q_n = t^4, exponent m(m+2l+1)/2
    elif spec.kind == C2:
        mm = l2
        num = mm * (mm + 4 * l + 3)
        if num % 2:
            raise QoscError("non-integral exponent in v_{l,m}")
        texp = num // 2  # q_n = t
    else:
        raise ValueError("v_{l,l'} is defined for c1 and c2")
    v = build_v_l(spec, l)
    params = (RF_ONE, RF_ONE)
    for k in range(1, mm + 1):
        v = coact(spec, "f", spec.n, params, v).scale(spec.q_int_i(k, spec.n).inv())
    return v.scale(RatFunc.t_pow(texp))


def verify_highest(spec: AlgebraSpec, v: SparseVec, s: int = 2) -> bool:
    params = (RF_ONE,) * s
    return all(
        coact(spec, "e", i, params, v).is_zero() for i in range(1, spec.n)
    )


def verify_operator_E(spec: AlgebraSpec, l: int) -> Report:
    """The two-step (c1) / one-step (c2) raising identity on v_l, exactly."""
    n = spec.n
    rep = Report(f"operatorE(l={l})", spec.kind, n, 0)
    params = (RF_ONE, RF_ONE)
    if spec.kind == C1:
        # the lemma's middle operator is e_{n-1} (written e_1 in the paper,
        # where the two agree at n = 2; the proof projects to that case)
        ew = [("e", j, 2, True) for j in range(n - 2, 0, -1)] + [("e", 0, 1, False)]
        lhs_terms = [
            (RF_ONE, ew + [("e", n - 1, 2, True)] + ew),
            (-q_fact(3).inv(), [("e", n - 1, 1, False)] + ew + [("e", n - 1, 1, False)] + ew),
        ]
        # the displayed scalar times (q[2])^{-2}: the paper computes in the
        # pre-basis-change normalization, one q[2] per e_0 application
        scal = (
            RatFunc.t_pow(-4)
            * q_int(2)
            * q_int(3).inv()
            * (q_int(l + 1) * q_int(l + 2)) ** 2
            * (RatFunc.t_pow(2) * q_int(2)) ** -2
        )
        target = build_v_l(spec, l + 2)
    elif spec.kind == C2:
        ew = [("e", j, 1, False) for j in range(n - 2, 0, -1)] + [("e", 0, 1, False)]
        lhs_terms = [
            (RF_ONE, ew + [("e", n - 1, 1, False)] + ew),
            (-q_int(2).inv(), [("e", n - 1, 1, False)] + ew + ew),
        ]
        scal = (
            RatFunc.t_pow(-5)
            * (RF_ONE + RatFunc.t_pow(2))
            * q_int(2).inv()
            * q_int(l + 1) ** 2
        )
        if l % 2:
            scal = -scal
        target = build_v_l(spec, l + 1)
    else:
        raise ValueError("operator-E identities exist for c1 and c2")
    lhs = eval_word_sum(spec, lhs_terms, params, build_v_l(spec, l), None)
    diff = lhs - target.scale(scal)
    rep.asserted += 1
    if not diff.is_zero():
        rep.record_violation("operatorE", f"l={l}", repr(diff))
    return rep


# ---------------------------------------------------------------------------
# tableaux and Schensted insertion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RowTableau:
    """Rows top-to-bottom on the rotated shape; letter i means bar-i."""

    rows: tuple  # tuple of tuples of ints

    def shape(self) -> tuple:
        return tuple(len(r) for r in reversed(self.rows))

    def to_json(self) -> list:
        return [list(r) for r in self.rows]


def row_word(m: tuple) -> tuple:
    """T(m): bar-letters of one row in increasing alphabet bar-n < .. < bar-1."""
    out = []
    for i in range(len(m), 0, -1):
        out.extend([i] * m[i - 1])
    return tuple(out)


def tableau_of(states) -> RowTableau:
    degs = [sum(m) for m in states]
    if any(degs[j] > degs[j + 1] for j in range(len(degs) - 1)):
        raise NotSorted(f"degrees {degs} not weakly increasing")
    # empty rows are invisible parts of the rotated shape
    return RowTableau(tuple(row_word(m) for m in states if sum(m)))


def is_semistandard(T: RowTableau) -> bool:
    """Rows weakly increase (bar order), columns strictly increase downward
    on the right-aligned rotated shape."""
    for r in T.rows:
        if any(r[c] < r[c + 1] for c in range(len(r) - 1)):
            return False  # bar order: larger int = smaller letter
    for a, b in zip(T.rows, T.rows[1:]):
        if len(a) > len(b):
            return False
        off = len(b) - len(a)
        for c in range(len(a)):
            if not a[c] > b[c + off]:  # strict bar-increase top to bottom
                return False
    return True


def _rsk_insert(rows: list, x: int) -> None:
    """Row insertion of x (straight word order: smaller int = smaller)."""
    r = 0
    while True:
        if r == len(rows):
            rows.append([x])
            return
        row = rows[r]
        for c, y in enumerate(row):
            if y > x:
                row[c], x = x, y
                break
        else:
            row.append(x)
            return
        r += 1


def column_insert(m1: tuple, m2: tuple) -> RowTableau:
    """P(m1, m2): the semistandard rotated tableau crystal-equivalent to
    |m1> (x) |m2>, via reverse column insertion from the rightmost column
    (equivalently: straighten, row-insert word(m1) then word(m2), rotate)."""
    n = len(m1)
    word = []
    for m in (m1, m2):
        for i in range(1, n + 1):
            word.extend([i] * m[i - 1])
    rows: list = []
    for x in word:
        _rsk_insert(rows, x)
    if len(rows) > 2:
        raise QoscError("two-row insertion produced more than two rows")
    rot = tuple(tuple(reversed(r)) for r in reversed(rows))
    return RowTableau(rot)


def insertion_shape(m1: tuple, m2: tuple) -> tuple:
    """(d'_2, d'_1) with d'_2 >= d'_1, the shape of P(m1, m2)."""
    P = column_insert(m1, m2)
    if not P.rows:
        return (0, 0)
    if len(P.rows) == 1:
        return (len(P.rows[0]), 0)
    return (len(P.rows[1]), len(P.rows[0]))


def enumerate_B2(spec: AlgebraSpec, D: int, eps=None) -> list:
    """All pairs (m1, m2), |m1| <= |m2|, degree <= D, allowed slot signs,
    with T(m1, m2) semistandard; the combinatorial model of the level-2
    crystal."""
    from .fock import compositions

    n = spec.n
    out = []
    for d in range(D + 1):
        for d1 in range(d // 2 + 1):
            d2 = d - d1
            if d1 > d2:
                continue
            if spec.kind == C1 and eps is not None:
                want = 0 if eps == 1 else 1
                if d1 % 2 != want or d2 % 2 != want:
                    continue
            for m1 in sorted(compositions(d1, n)):
                for m2 in sorted(compositions(d2, n)):
                    if is_semistandard(tableau_of([m1, m2])):
                        out.append((m1, m2))
    return out


# ---------------------------------------------------------------------------
# the exact crystal component of v_{l1,l2} and Lemma 5.9 triangularity
# ---------------------------------------------------------------------------

def crystal_component(spec: AlgebraSpec, l1: int, l2: int, max_depth=None) -> dict:
    """BFS of exact f~_{i} words from v_{l1,l2}; maps the mod-q pair of each
    reached element to its exact vector (first word found wins)."""
    v0 = build_v_ll(spec, l1, l2)
    b0 = reduce_to_unit_state(v0)
    if b0 is None:
        raise QoscError("v_{l1,l2} does not reduce to a unit basis pair")
    out = {b0: v0}
    queue = [(b0, 0)]
    while queue:
        b, depth = queue.pop(0)
        if max_depth is not None and depth >= max_depth:
            continue
        for i in range(1, spec.n):
            w = kashiwara_f(spec, i, out[b])
            if w.is_zero():
                continue
            bw = reduce_to_unit_state(w)
            if bw is None:
                ok, leads = reduce_mod_q(w)
                if ok and not leads:
                    continue  # crystal arrow is zero mod q
                raise QoscError(f"f~_{i} image is not a unit basis pair: {w!r}")
            if bw not in out:
                out[bw] = w
                queue.append((bw, depth + 1))
    return out


def dominates_strictly(mu: tuple, lam: tuple) -> bool:
    """mu > lam in dominance for two-row partitions of equal size."""
    return mu[0] + mu[1] == lam[0] + lam[1] and mu[0] > lam[0]


def verify_triangularity(spec: AlgebraSpec, l1: int, l2: int, max_depth=None) -> Report:
    """Lemma 5.9 shape-triangularity of every v_T in the component."""
    if spec.kind != C1:
        raise ValueError("triangularity statement is for c1")
    rep = Report(f"triangularity(l1={l1},l2={l2})", spec.kind, spec.n, 0)
    lam = (l1 + l2, l1)
    comp = crystal_component(spec, l1, l2, max_depth)
    for pair, vT in sorted(comp.items()):
        T = tableau_of(list(pair))
        distinguished = 0
        bad = None
        for (m1, m2), c in vT.terms.items():
            order, lead = c.order_at_zero()
            P = column_insert(m1, m2)
            if P == T:
                if order == 0:
                    distinguished += 1
                    if lead != 1:
                        bad = f"lead {lead} at {(m1, m2)}"
                continue
            mu = insertion_shape(m1, m2)
            if order >= 1 or dominates_strictly(mu, lam):
                continue
            bad = f"term {(m1, m2)} order {order} shape {mu}"
        rep.asserted += 1
        if distinguished != 1 or bad:
            rep.record_violation(
                "triangularity", str(pair), bad or f"distinguished={distinguished}"
            )
    return rep
