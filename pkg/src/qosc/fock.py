"""Fock-space bookkeeping: occupation states, weight fibers, sparse vectors.

A single Fock slot is a tuple m in Z_{>=0}^n; a basis vector of W^(tensor s)
is an s-tuple of slots.  All linear algebra downstream is organised by the
fiber key, the coordinatewise sum of the slots, which every k_i-commuting
operator preserves.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .scalar import RF_ONE, RatFunc

OccState = tuple  # tuple[int, ...], length n
TensorState = tuple  # tuple[OccState, ...], length s


def degree(m: OccState) -> int:
    return sum(m)


def sign_filter(m: OccState) -> int:
    """sgn(m): +1 for even total degree, -1 for odd."""
    return 1 if sum(m) % 2 == 0 else -1


def slot_signs(state: TensorState) -> tuple:
    return tuple(sign_filter(m) for m in state)


def uniform_sign(state: TensorState):
    """The common slot sign, or None if the slots disagree."""
    signs = slot_signs(state)
    return signs[0] if all(s == signs[0] for s in signs) else None


def fiber_key(state: TensorState) -> tuple:
    n = len(state[0])
    return tuple(sum(m[j] for m in state) for j in range(n))


def weight_monomial(state: TensorState) -> tuple:
    """Exponent vector of the character monomial x^key."""
    return fiber_key(state)


def state_str(state: TensorState) -> str:
    return "|".join(",".join(str(x) for x in m) for m in state)


def parse_state(text: str) -> TensorState:
    return tuple(tuple(int(x) for x in part.split(",")) for part in text.split("|"))


def compositions(total: int, parts: int):
    """All ordered tuples of `parts` non-negative ints summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class Fiber:
    key: tuple
    states: tuple  # deterministic basis order
    index: dict  # state -> position

    @staticmethod
    def build(key: tuple, s: int, parity=None) -> "Fiber":
        per_coord = [list(compositions(v, s)) for v in key]
        states = []
        for split in product(*per_coord):
            state = tuple(tuple(split[j][k] for j in range(len(key))) for k in range(s))
            if parity is not None and any(sum(m) % 2 != parity for m in state):
                continue
            states.append(state)
        states.sort(key=lambda st: sum(st, ()))
        return Fiber(key, tuple(states), {st: i for i, st in enumerate(states)})

    def dim(self) -> int:
        return len(self.states)


def enumerate_fibers(n: int, s: int, D: int, parity=None) -> list:
    """All fibers of degree <= D in deterministic (degree, lex) order.

    parity restricts every slot to sgn eps (0 = even, 1 = odd), as needed for
    the two C_n^(1) sectors; fibers that become empty are dropped.
    """
    if n < 1 or s < 1 or D < 0:
        raise ValueError("need n >= 1, s >= 1, D >= 0")
    fibers = []
    for deg in range(D + 1):
        for key in sorted(compositions(deg, n)):
            fib = Fiber.build(key, s, parity)
            if fib.states:
                fibers.append(fib)
    return fibers


class SparseVec:
    """Finite RatFunc-linear combination of TensorStates (no stored zeros)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms if terms is not None else {}

    @staticmethod
    def basis(state: TensorState, coeff: RatFunc = RF_ONE) -> "SparseVec":
        return SparseVec({state: coeff}) if not coeff.is_zero() else SparseVec()

    def is_zero(self) -> bool:
        return not self.terms

    def add_term(self, state: TensorState, coeff: RatFunc) -> None:
        if coeff.is_zero():
            return
        cur = self.terms.get(state)
        if cur is None:
            self.terms[state] = coeff
        else:
            new = cur + coeff
            if new.is_zero():
                del self.terms[state]
            else:
                self.terms[state] = new

    def __add__(self, other: "SparseVec") -> "SparseVec":
        out = SparseVec(dict(self.terms))
        for st, c in other.terms.items():
            out.add_term(st, c)
        return out

    def __sub__(self, other: "SparseVec") -> "SparseVec":
        out = SparseVec(dict(self.terms))
        for st, c in other.terms.items():
            out.add_term(st, -c)
        return out

    def __neg__(self) -> "SparseVec":
        return SparseVec({st: -c for st, c in self.terms.items()})

    def scale(self, c: RatFunc) -> "SparseVec":
        if c.is_zero():
            return SparseVec()
        if c.is_one():
            return self
        return SparseVec({st: v * c for st, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, SparseVec) and self.terms == other.terms

    def __hash__(self):
        raise TypeError("SparseVec is not hashable")

    def coeff(self, state: TensorState) -> RatFunc:
        from .scalar import RF_ZERO

        return self.terms.get(state, RF_ZERO)

    def max_degree(self) -> int:
        return max((sum(fiber_key(st)) for st in self.terms), default=-1)

    def support(self):
        return self.terms.keys()

    def __repr__(self):
        if not self.terms:
            return "SparseVec(0)"
        bits = [f"({c.serialize()})*|{state_str(st)}>" for st, c in sorted(self.terms.items())]
        return " + ".join(bits)
