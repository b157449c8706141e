"""Run configurations for the scripts in this directory."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


@dataclass
class RelationSuiteConfig:
    seeds: tuple[int, ...] = (0, 1, 2)
    instances: int = 100
    modes: tuple[str, ...] = ("zero", "formal")


@dataclass
class HomTableConfig:
    """Graded Hom tables for A1 with w reds and v blacks."""
    w: int = 2
    v: int = 1
    maxdeg: int = 6
    radius: int | None = None


@dataclass
class CoulombConfig:
    w: int = 2
    values: tuple[Fraction, ...] = (Fraction(1, 10), Fraction(1, 2), Fraction(2, 3))
    maxdeg: int = 8


@dataclass
class AcceptanceConfig:
    pytest_args: list[str] = field(default_factory=lambda: ["-q", "-rN"])


@dataclass
class BraidConfig:
    """Graded comparisons for rotation and braid composites."""
    reds: tuple[int, ...] = (2, 3)
    maxdeg: int = 4


@dataclass
class UnflavoredConfig:
    """A2 with framing (2, 1) and dimension (2, 1), checked against the unflavored count."""
    beta_e: tuple[Fraction, ...] = (Fraction(0), Fraction(1, 4))
    maxdeg: int = 3
