"""Angle vectors: wedge angles in (0, pi), optionally known as exact multiples of pi."""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError

__all__ = ["AngleVector", "ANGLE_EPS", "RESONANCE_TOL", "parse_angles", "parse_angle_token"]

ANGLE_EPS = 1e-12
# absolute tolerance on the total angle when classifying resonance
RESONANCE_TOL = 1e-12
# inputs this close to resonance (but outside RESONANCE_TOL) give ill-conditioned signatures
NEAR_RESONANCE_TOL = 1e-9

CLOSED = "closed"
DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class AngleVector:
    """Ordered wedge angles alpha_1..alpha_N in radians.

    ``mode`` is ``"closed"`` (N angles glued cyclically, N x N matrix) or
    ``"dirichlet"`` (N = n + 1 angles for an n x n matrix). ``exact`` holds
    the angles as fractions of pi when every one of them was given that way,
    which makes resonance classification exact.
    """

    angles: tuple[float, ...]
    mode: str = CLOSED
    exact: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if self.mode not in (CLOSED, DIRICHLET):
            raise InputError(f"unknown mode {self.mode!r}")
        a = np.asarray(self.angles, dtype=float)
        if a.ndim != 1:
            raise InputError("angles must be a flat sequence")
        minimum = 3 if self.mode == CLOSED else 2
        if len(a) < minimum:
            what = "closed mode needs at least 3 angles" if self.mode == CLOSED else \
                "dirichlet mode needs at least 2 angles (n >= 1)"
            raise InputError(f"{what}, got {len(a)}")
        if not np.all(np.isfinite(a)):
            raise InputError("angles must be finite")
        bad = np.flatnonzero((a <= ANGLE_EPS) | (a >= math.pi - ANGLE_EPS))
        if bad.size:
            raise InputError(
                "angles must lie strictly inside (0, pi); offending indices "
                + ", ".join(str(int(i) + 1) for i in bad))
        if self.exact is not None and len(self.exact) != len(a):
            raise InputError("exact angle list has the wrong length")
        object.__setattr__(self, "angles", tuple(float(x) for x in a))

    @classmethod
    def from_pi_fractions(cls, fractions: Iterable, mode: str = CLOSED) -> "AngleVector":
        fr = tuple(Fraction(f) for f in fractions)
        return cls(tuple(math.pi * float(f) for f in fr), mode, fr)

    @classmethod
    def equal(cls, count: int, omega: float, mode: str = CLOSED) -> "AngleVector":
        return cls((omega / count,) * count, mode)

    def __len__(self) -> int:
        return len(self.angles)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.angles)

    @property
    def size(self) -> int:
        """Dimension of the associated matrix."""
        return len(self.angles) if self.mode == CLOSED else len(self.angles) - 1

    def total(self) -> float:
        """omega, the sum of all angles."""
        if self.exact is not None:
            return math.pi * float(sum(self.exact))
        return math.fsum(self.angles)

    def total_over_pi(self) -> Fraction | float:
        if self.exact is not None:
            return sum(self.exact, Fraction(0))
        return self.total() / math.pi

    @property
    def period(self) -> float:
        """Resonance period of omega: 2 pi (closed) or pi (dirichlet)."""
        return 2 * math.pi if self.mode == CLOSED else math.pi

    def resonance(self) -> tuple[int, bool]:
        """Return ``(m, exact_hit)`` with m*period <= omega < (m+1)*period.

        ``exact_hit`` is true when omega equals m*period (exactly for
        pi-rational input, else within RESONANCE_TOL).
        """
        per_pi = 2 if self.mode == CLOSED else 1
        if self.exact is not None:
            q = sum(self.exact, Fraction(0)) / per_pi
            m = math.floor(q)
            return m, q == m
        omega = self.total()
        m = round(omega / self.period)
        if m >= 1 and abs(omega - m * self.period) <= RESONANCE_TOL:
            return m, True
        return math.floor(omega / self.period), False

    def resonance_distance(self) -> float:
        """Distance from omega to the nearest positive multiple of the period."""
        omega = self.total()
        m = max(1, round(omega / self.period))
        return abs(omega - m * self.period)

    def near_resonance(self) -> bool:
        """True inside the ill-conditioned band (RESONANCE_TOL, NEAR_RESONANCE_TOL]."""
        m, hit = self.resonance()
        return not hit and self.resonance_distance() <= NEAR_RESONANCE_TOL

    def cumulative(self) -> np.ndarray:
        """Partial sums theta_k = alpha_1 + ... + alpha_k, k = 1..N."""
        if self.exact is not None:
            acc = Fraction(0)
            out = []
            for f in self.exact:
                acc += f
                out.append(math.pi * float(acc))
            return np.array(out)
        return np.cumsum(self.angles)

    def to_json(self) -> list[float]:
        return list(self.angles)

    def labels(self) -> list[str]:
        """Angles as printable tokens, ``api/b`` when exact."""
        if self.exact is None:
            return [repr(a) for a in self.angles]
        return [_format_fraction(f) for f in self.exact]


def _format_fraction(f: Fraction) -> str:
    num = "" if f.numerator == 1 else str(f.numerator)
    return f"{num}pi" if f.denominator == 1 else f"{num}pi/{f.denominator}"


_PI_TOKEN = re.compile(r"^\s*([0-9]+)?\s*\*?\s*pi\s*(?:/\s*([0-9]+))?\s*$", re.IGNORECASE)
_REPEAT = re.compile(r"^x([0-9]+)$", re.IGNORECASE)


def parse_angle_token(token: str) -> tuple[float, Fraction | None]:
    """Parse ``api/b``, ``pi/b``, ``api``, ``pi`` or a plain float (radians)."""
    m = _PI_TOKEN.match(token)
    if m:
        num = int(m.group(1)) if m.group(1) else 1
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise InputError(f"zero denominator in angle {token!r}")
        f = Fraction(num, den)
        return math.pi * float(f), f
    try:
        value = float(token)
    except ValueError:
        raise InputError(f"cannot parse angle {token!r}") from None
    return value, None


def parse_angles(spec: str | Sequence[str], mode: str = CLOSED) -> AngleVector:
    """Build an AngleVector from CLI-style text.

    Accepts a JSON array of radians, or comma/space separated tokens where
    ``xK`` repeats the preceding token so that it appears K times in total,
    e.g. ``"pi/2 x4"`` or ``"2pi/3,2pi/3,2pi/3"``.
    """
    text = spec if isinstance(spec, str) else " ".join(spec)
    text = text.strip()
    if text.startswith("["):
        try:
            values = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"bad JSON angle array: {exc}") from None
        if not isinstance(values, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
            raise InputError("JSON angles must be an array of numbers")
        return AngleVector(tuple(float(v) for v in values), mode)
    tokens = [t for t in re.split(r"[,\s]+", text) if t]
    if not tokens:
        raise InputError("empty angle list")
    values: list[float] = []
    fracs: list[Fraction | None] = []
    for tok in tokens:
        rep = _REPEAT.match(tok)
        if rep:
            if not values:
                raise InputError(f"repeat {tok!r} has nothing to repeat")
            k = int(rep.group(1))
            if k < 1:
                raise InputError(f"bad repeat count in {tok!r}")
            values.extend([values[-1]] * (k - 1))
            fracs.extend([fracs[-1]] * (k - 1))
            continue
        v, f = parse_angle_token(tok)
        values.append(v)
        fracs.append(f)
    exact = tuple(fracs) if all(f is not None for f in fracs) else None
    return AngleVector(tuple(values), mode, exact)
