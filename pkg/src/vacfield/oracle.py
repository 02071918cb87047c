"""Truncated number-state representation used to cross-check the algebra.

Nothing here shares code with the symbolic normal-ordering path: every
ladder operator becomes a dense ``(cutoff+1) x (cutoff+1)`` matrix and words
are applied right to left to a state tensor with one axis per mode.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .fock_algebra import Kind, LadderOp, OperatorPoly

DEFAULT_CUTOFF = 4


class CutoffTooSmall(ValueError):
    pass


def ladder_matrix(kind: Kind, cutoff: int) -> np.ndarray:
    """Matrix of ``a`` or ``a^dag`` on ``|0>..|cutoff>`` (``a^dag|cutoff> = 0``)."""
    n = np.arange(1, cutoff + 1)
    lower = np.diag(np.sqrt(n).astype(complex), k=1)
    return lower if kind is Kind.ANNIHILATE else lower.T.copy()


@dataclass(frozen=True)
class FockOracle:
    cutoff: int = DEFAULT_CUTOFF
    modes: tuple[str, ...] = ()
    _mats: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.cutoff < 1:
            raise ValueError(f"cutoff must be >= 1, got {self.cutoff}")
        object.__setattr__(self, "modes", tuple(self.modes))
        if len(set(self.modes)) != len(self.modes):
            raise ValueError(f"duplicate modes in {self.modes}")
        for kind in Kind:
            self._mats[kind] = ladder_matrix(kind, self.cutoff)

    @classmethod
    def for_poly(cls, p: OperatorPoly, cutoff: int | None = None) -> "FockOracle":
        """Oracle over exactly the modes of ``p`` with the smallest safe cutoff."""
        need = max(1, max_mode_degree(p))
        return cls(cutoff=need if cutoff is None else cutoff, modes=tuple(sorted(p.modes())))

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.cutoff + 1,) * len(self.modes)

    def vacuum(self) -> np.ndarray:
        psi = np.zeros(self.shape, dtype=complex)
        psi[(0,) * len(self.modes)] = 1.0
        return psi

    def basis_state(self, occupation: dict[str, int]) -> np.ndarray:
        psi = np.zeros(self.shape, dtype=complex)
        psi[tuple(occupation.get(m, 0) for m in self.modes)] = 1.0
        return psi

    def _axis(self, mode: str) -> int:
        try:
            return self.modes.index(mode)
        except ValueError:
            raise ValueError(f"mode {mode!r} not in oracle modes {self.modes}") from None

    def _apply_op(self, op: LadderOp, psi: np.ndarray) -> np.ndarray:
        ax = self._axis(op.mode)
        out = np.tensordot(self._mats[op.kind], psi, axes=([1], [ax]))
        return np.moveaxis(out, 0, ax)

    def _check(self, p: OperatorPoly) -> None:
        deg = max_mode_degree(p)
        if deg > self.cutoff:
            raise CutoffTooSmall(f"per-mode degree {deg} exceeds cutoff {self.cutoff}")

    def apply(self, p: OperatorPoly, psi: np.ndarray) -> np.ndarray:
        """``p |psi>`` (coefficients of every gain degree included)."""
        self._check(p)
        out = np.zeros(self.shape, dtype=complex)
        for (_, word), c in p:
            phi = psi
            for op in reversed(word):
                phi = self._apply_op(op, phi)
            out = out + c * phi
        return out

    def expectation(self, p: OperatorPoly) -> complex:
        if not self.modes and p.modes():
            return FockOracle(self.cutoff, tuple(sorted(p.modes()))).expectation(p)
        vac = self.vacuum()
        return complex(np.vdot(vac, self.apply(p, vac)))


def max_mode_degree(p: OperatorPoly) -> int:
    """Largest count of creators, or of annihilators, on one mode in one word.

    Applying a word right to left from vacuum never populates a mode beyond
    its creator count, so truncation at this cutoff is exact.
    """
    best = 0
    for (_, word), _ in p:
        if word:
            best = max(best, max(Counter(word).values()))
    return best


def oracle_expectation(p: OperatorPoly, oracle: FockOracle | None = None) -> complex:
    if oracle is None:
        oracle = FockOracle.for_poly(p)
    return oracle.expectation(p)
