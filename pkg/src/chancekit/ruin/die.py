"""Dice with both winning and losing faces (gambler's ruin with unlimited credit)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from ..exact.laurent import LaurentPoly
from ..markov import ValidationError

POSITIVE, ZERO, NEGATIVE = "positive", "zero", "negative"


@dataclass(frozen=True)
class GeneralDie:
    """Faces ``(step, prob)`` with nonzero integer steps.

    ``U`` holds the positive steps, ``D`` the magnitudes of the negative ones.
    """

    faces: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        faces = tuple(sorted((int(s), Fraction(p)) for s, p in self.faces))
        object.__setattr__(self, "faces", faces)
        if not faces:
            raise ValidationError("die has no faces")
        steps = [s for s, _ in faces]
        if len(set(steps)) != len(steps):
            raise ValidationError("repeated die step")
        if any(s == 0 for s in steps):
            raise ValidationError("die steps must be nonzero")
        if any(p <= 0 for _, p in faces):
            raise ValidationError("die probabilities must be positive")
        if sum(p for _, p in faces) != 1:
            raise ValidationError("die probabilities do not sum to 1")

    @classmethod
    def from_mapping(cls, mapping) -> "GeneralDie":
        return cls(tuple((int(s), Fraction(p)) for s, p in dict(mapping).items()))

    @classmethod
    def fair(cls, *steps: int) -> "GeneralDie":
        return cls(tuple((s, Fraction(1, len(steps))) for s in steps))

    @property
    def U(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self.faces if s > 0)

    @property
    def D(self) -> tuple[int, ...]:
        return tuple(sorted(-s for s, _ in self.faces if s < 0))

    def prob(self, step: int) -> Fraction:
        return dict(self.faces).get(step, Fraction(0))

    @property
    def drift(self) -> Fraction:
        return sum((s * p for s, p in self.faces), Fraction(0))

    @property
    def drift_class(self) -> str:
        d = self.drift
        return POSITIVE if d > 0 else ZERO if d == 0 else NEGATIVE

    @property
    def max_up(self) -> int:
        return max(self.U, default=0)

    @property
    def max_down(self) -> int:
        return max(self.D, default=0)

    def laurent(self) -> LaurentPoly:
        """``h(x) = sum p_s x**s``."""
        return LaurentPoly.from_steps(self.faces)

    def scaled(self) -> tuple[int, list[tuple[int, int]]]:
        """``(Q, [(step, Q * prob)])`` with ``Q`` the common denominator."""
        Q = 1
        for _, p in self.faces:
            Q = lcm(Q, p.denominator)
        return Q, [(s, int(p * Q)) for s, p in self.faces]

    def require_both_directions(self) -> None:
        if not self.U or not self.D:
            raise ValidationError("die needs at least one positive and one negative step")
