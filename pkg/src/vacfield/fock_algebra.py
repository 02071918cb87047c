"""Symbolic algebra of multimode bosonic ladder operators.

An :class:`OperatorPoly` is a finite sum of ordered words of creation and
annihilation operators.  Each term carries a complex coefficient and a
*gain degree* ``(d, d_star)``: the formal powers of the parametric gain
``D`` and of its conjugate that produced the coefficient.  The numeric value
of ``D`` is already folded into the coefficient; the degree only records
perturbative order so that callers can keep e.g. the ``|D|^2`` part of a
correlator.

Normal ordering rewrites every word with ``[a_m, a_m^dag] = 1`` until all
creators stand left of all annihilators, each group sorted by mode label.
"""

from __future__ import annotations

import contextlib
import enum
import functools
from collections import defaultdict
from typing import Iterable, Iterator, Mapping, NamedTuple

PRUNE_TOL = 1e-14

Degree = tuple[int, int]


class Kind(enum.IntEnum):
    # Value order is the canonical order: creators first.
    CREATE = 0
    ANNIHILATE = 1


class LadderOp(NamedTuple):
    mode: str
    kind: Kind

    def adjoint(self) -> "LadderOp":
        flipped = Kind.ANNIHILATE if self.kind is Kind.CREATE else Kind.CREATE
        return LadderOp(self.mode, flipped)

    def __str__(self) -> str:
        return f"{'ad' if self.kind is Kind.CREATE else 'a'}({self.mode})"


Word = tuple[LadderOp, ...]
Key = tuple[Degree, Word]

IDENTITY_WORD: Word = ()


def _check_mode(mode: str) -> str:
    if not isinstance(mode, str) or not mode:
        raise ValueError(f"mode label must be a nonempty string, got {mode!r}")
    if any(ch in mode for ch in " ():"):
        raise ValueError(f"mode label {mode!r} contains a reserved character")
    return mode


class OperatorPoly:
    """Immutable complex-weighted sum of ladder-operator words."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Key, complex] | Iterable[tuple[Key, complex]] = ()):
        acc: dict[Key, complex] = defaultdict(complex)
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (degree, word), coeff in items:
            d, ds = degree
            if d < 0 or ds < 0:
                raise ValueError(f"gain degree must be nonnegative, got {degree}")
            acc[((int(d), int(ds)), tuple(word))] += complex(coeff)
        self._terms = {k: c for k, c in acc.items() if abs(c) >= PRUNE_TOL}
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "OperatorPoly":
        return cls()

    @classmethod
    def scalar(cls, value: complex, degree: Degree = (0, 0)) -> "OperatorPoly":
        return cls({(degree, IDENTITY_WORD): value})

    @classmethod
    def identity(cls) -> "OperatorPoly":
        return cls.scalar(1.0)

    @classmethod
    def word(cls, ops: Iterable[LadderOp], coeff: complex = 1.0,
             degree: Degree = (0, 0)) -> "OperatorPoly":
        return cls({(degree, tuple(ops)): coeff})

    # -- container protocol --------------------------------------------------

    @property
    def terms(self) -> Mapping[Key, complex]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Key, complex]]:
        return iter(self._terms.items())

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, float, complex)):
            other = OperatorPoly.scalar(other)
        if not isinstance(other, OperatorPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def allclose(self, other: "OperatorPoly", atol: float = 1e-12) -> bool:
        keys = set(self._terms) | set(other._terms)
        return all(abs(self._terms.get(k, 0) - other._terms.get(k, 0)) <= atol for k in keys)

    def modes(self) -> set[str]:
        return {op.mode for (_, word) in self._terms for op in word}

    def degrees(self) -> set[Degree]:
        return {deg for (deg, _) in self._terms}

    def max_gain_degree(self) -> int:
        return max((d + ds for (d, ds) in self.degrees()), default=0)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = OperatorPoly.scalar(other)
        if not isinstance(other, OperatorPoly):
            return NotImplemented
        return OperatorPoly(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> "OperatorPoly":
        return self.scale(-1)

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = OperatorPoly.scalar(other)
        if not isinstance(other, OperatorPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        if not isinstance(other, OperatorPoly):
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        return NotImplemented

    def scale(self, factor: complex, degree: Degree = (0, 0)) -> "OperatorPoly":
        """Multiply every coefficient by ``factor``, raising degrees by ``degree``."""
        d0, ds0 = degree
        return OperatorPoly(
            (((d + d0, ds + ds0), w), c * factor) for ((d, ds), w), c in self._terms.items()
        )

    def adjoint(self) -> "OperatorPoly":
        return adjoint(self)

    def normal_order(self) -> "OperatorPoly":
        return normal_order(self)

    def degree_part(self, degree: Degree | None = None, *, total: int | None = None) -> "OperatorPoly":
        """Keep only terms of the exact ``degree`` or of the given ``total`` degree."""
        if (degree is None) == (total is None):
            raise ValueError("pass exactly one of degree or total")
        if degree is not None:
            keep = lambda deg: deg == tuple(degree)  # noqa: E731
        else:
            keep = lambda deg: deg[0] + deg[1] == total  # noqa: E731
        return OperatorPoly((k, c) for k, c in self._terms.items() if keep(k[0]))

    # -- text form -----------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Key, complex]]:
        return sorted(self._terms.items(), key=lambda kc: (kc[0][0], len(kc[0][1]), kc[0][1]))

    def serialize(self) -> str:
        return serialize(self)

    def __repr__(self) -> str:
        if not self._terms:
            return "OperatorPoly(0)"
        parts = []
        for (deg, word), c in self.sorted_terms():
            ops = " ".join(str(op) for op in word) or "I"
            parts.append(f"({c:.6g})[{deg[0]},{deg[1]}] {ops}")
        return "OperatorPoly(" + " + ".join(parts) + ")"


def annihilate(mode: str) -> OperatorPoly:
    return OperatorPoly.word([LadderOp(_check_mode(mode), Kind.ANNIHILATE)])


def create(mode: str) -> OperatorPoly:
    return OperatorPoly.word([LadderOp(_check_mode(mode), Kind.CREATE)])


def multiply(p: OperatorPoly, q: OperatorPoly) -> OperatorPoly:
    """Operator product ``p q`` (``q`` acts first on kets)."""
    out: dict[Key, complex] = defaultdict(complex)
    for ((d1, ds1), w1), c1 in p:
        for ((d2, ds2), w2), c2 in q:
            out[((d1 + d2, ds1 + ds2), w1 + w2)] += c1 * c2
    return OperatorPoly(out)


def product(*polys: OperatorPoly) -> OperatorPoly:
    return functools.reduce(multiply, polys, OperatorPoly.identity())


def adjoint(p: OperatorPoly) -> OperatorPoly:
    return OperatorPoly(
        (((ds, d), tuple(op.adjoint() for op in reversed(w))), c.conjugate())
        for ((d, ds), w), c in p
    )


def commutator(p: OperatorPoly, q: OperatorPoly) -> OperatorPoly:
    """Normal-ordered ``[p, q]``."""
    return normal_order(multiply(p, q) - multiply(q, p))


# -- normal ordering ----------------------------------------------------------

_COMMUTATOR = 1.0


@contextlib.contextmanager
def tampered_commutator(value: float):
    """Debug hook: temporarily replace the constant in ``[a, a^dag]``.

    Only the verification harness should use this, to confirm its suites
    detect a broken algebra.
    """
    global _COMMUTATOR
    saved = _COMMUTATOR
    _COMMUTATOR = float(value)
    _normal_order_word.cache_clear()
    try:
        yield
    finally:
        _COMMUTATOR = saved
        _normal_order_word.cache_clear()


def _rank(op: LadderOp) -> tuple[int, str]:
    return (op.kind, op.mode)


def _is_canonical(word: Word) -> bool:
    return all(_rank(word[i]) <= _rank(word[i + 1]) for i in range(len(word) - 1))


@functools.lru_cache(maxsize=None)
def _normal_order_word(word: Word) -> tuple[tuple[Word, float], ...]:
    # Swap the first adjacent inversion; a_m a_m^dag also emits the contracted
    # word.  Each step strictly lowers the inversion count, so this terminates.
    for i in range(len(word) - 1):
        x, y = word[i], word[i + 1]
        if _rank(x) > _rank(y):
            acc: dict[Word, float] = defaultdict(float)
            for w, c in _normal_order_word(word[:i] + (y, x) + word[i + 2:]):
                acc[w] += c
            if x.mode == y.mode:
                for w, c in _normal_order_word(word[:i] + word[i + 2:]):
                    acc[w] += _COMMUTATOR * c
            return tuple((w, c) for w, c in acc.items() if c != 0)
    return ((word, 1.0),)


def normal_order(p: OperatorPoly) -> OperatorPoly:
    out: dict[Key, complex] = defaultdict(complex)
    for (deg, word), c in p:
        for w, k in _normal_order_word(word):
            out[(deg, w)] += c * k
    return OperatorPoly(out)


def is_normal_ordered(p: OperatorPoly) -> bool:
    return all(_is_canonical(w) for (_, w), _ in p)


def word_vev(word: Word) -> float:
    """Vacuum expectation value of a single word."""
    for w, c in _normal_order_word(word):
        if not w:
            return c
    return 0.0


def vacuum_expectation(p: OperatorPoly) -> complex:
    """``<vac| p |vac>``, summed over all gain degrees."""
    total = 0j
    for (_, word), c in p:
        if word:
            # a|vac> = 0 and <vac|a^dag = 0.
            if word[-1].kind is Kind.ANNIHILATE or word[0].kind is Kind.CREATE:
                continue
            total += c * word_vev(word)
        else:
            total += c
    return total


# -- serialization ------------------------------------------------------------


def serialize(p: OperatorPoly) -> str:
    """One line per term: ``re im d d_star : op op ...`` (``I`` for identity)."""
    lines = []
    for ((d, ds), word), c in p.sorted_terms():
        ops = " ".join(str(op) for op in word) or "I"
        lines.append(f"{c.real!r} {c.imag!r} {d} {ds} : {ops}")
    return "".join(line + "\n" for line in lines)


def _parse_op(token: str) -> LadderOp:
    if token.startswith("ad(") and token.endswith(")"):
        return LadderOp(_check_mode(token[3:-1]), Kind.CREATE)
    if token.startswith("a(") and token.endswith(")"):
        return LadderOp(_check_mode(token[2:-1]), Kind.ANNIHILATE)
    raise ValueError(f"bad ladder operator token {token!r}")


def parse(text: str) -> OperatorPoly:
    terms = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        head, sep, tail = line.partition(":")
        if not sep:
            raise ValueError(f"line {lineno}: missing ':'")
        fields = head.split()
        if len(fields) != 4:
            raise ValueError(f"line {lineno}: expected 're im d d_star' before ':'")
        re, im, d, ds = fields
        tokens = tail.split()
        if tokens == ["I"]:
            word: Word = ()
        else:
            word = tuple(_parse_op(t) for t in tokens)
        terms.append((((int(d), int(ds)), word), complex(float(re), float(im))))
    return OperatorPoly(terms)


def product_expectation(p: OperatorPoly, q: OperatorPoly, total_degree: int | None = None) -> complex:
    """``<vac| p q |vac>``, optionally keeping only one total gain degree.

    Same result as ``vacuum_expectation(multiply(p, q))`` after degree
    filtering, without materialising the product.
    """
    total = 0j
    for ((d1, ds1), w1), c1 in p:
        if w1 and w1[0].kind is Kind.CREATE:
            continue
        for ((d2, ds2), w2), c2 in q:
            if total_degree is not None and d1 + ds1 + d2 + ds2 != total_degree:
                continue
            w = w1 + w2
            if not w:
                total += c1 * c2
            elif w[-1].kind is not Kind.ANNIHILATE and w[0].kind is not Kind.CREATE:
                total += c1 * c2 * word_vev(w)
    return total
