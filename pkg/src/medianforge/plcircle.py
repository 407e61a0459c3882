"""Piecewise-linear circle homeomorphisms with exact rational data.

A homeomorphism is stored through its lift F with F(x+1) = F(x) + 1: a
strictly increasing list of breakpoints in [0,1) and their values, linear in
between.  All arithmetic is ``fractions.Fraction``; floating point is never
used here, since slope products grow exponentially under composition.

The canonical representative keeps exactly the points where the one-sided
slopes differ (plus a single anchor at 0 for rigid rotations), with the
first value normalised into [0,1).  Two objects are equal iff they are the
same circle map.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, InternalError, ResourceLimitError

MAX_BREAKPOINTS = 50_000
MAX_RATIONAL_BITS = 100_000


def _fraction(x):
    try:
        return Fraction(x)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {x!r} ({exc})") from None


class PLCircleHomeo:
    """An orientation-preserving PL homeomorphism of the circle R/Z."""

    __slots__ = ("breaks", "vals", "_slopes")

    def __init__(self, breakpoints, values):
        breaks = [_fraction(b) for b in breakpoints]
        vals = [_fraction(v) for v in values]
        if len(breaks) != len(vals) or not breaks:
            raise InputError("need equally many breakpoints and values, at least one")
        if any(b < 0 or b >= 1 for b in breaks):
            raise InputError("breakpoints must lie in [0, 1)")
        if any(breaks[i] >= breaks[i + 1] for i in range(len(breaks) - 1)):
            raise InputError("breakpoints must be strictly increasing")
        if any(vals[i] >= vals[i + 1] for i in range(len(vals) - 1)):
            raise InputError("values must be strictly increasing")
        if vals[-1] >= vals[0] + 1:
            raise InputError("values must increase by less than 1 over one period")

        shift = math.floor(vals[0])
        vals = [v - shift for v in vals]

        slopes = _piece_slopes(breaks, vals)
        keep = [
            i
            for i in range(len(breaks))
            if slopes[i - 1] != slopes[i]
        ]
        if keep:
            breaks = [breaks[i] for i in keep]
            vals = [vals[i] for i in keep]
            shift = math.floor(vals[0])
            vals = [v - shift for v in vals]
        else:
            # constant slope over a full period forces slope 1: a rotation
            r = (vals[0] - breaks[0]) % 1
            breaks, vals = [Fraction(0)], [r]

        self.breaks = tuple(breaks)
        self.vals = tuple(vals)
        self._slopes = _piece_slopes(self.breaks, self.vals)

    # -- basic queries -----------------------------------------------------

    @classmethod
    def identity(cls):
        return cls([0], [0])

    @classmethod
    def rotation(cls, r):
        return cls([0], [_fraction(r) % 1])

    def is_identity(self):
        return self.breaks == (Fraction(0),) and self.vals == (Fraction(0),)

    def num_breakpoints(self):
        return len(self.breaks)

    def lift(self, x):
        """The lift F evaluated at any rational x."""
        x = _fraction(x)
        shift = math.floor(x - self.breaks[0])
        x0 = x - shift
        i = bisect_right(self.breaks, x0) - 1
        if i < 0:
            i = len(self.breaks) - 1
            base_b = self.breaks[i] - 1
            base_v = self.vals[i] - 1
        else:
            base_b = self.breaks[i]
            base_v = self.vals[i]
        return base_v + self._slopes[i] * (x0 - base_b) + shift

    def __call__(self, x):
        """The circle map: lift reduced mod 1 into [0, 1)."""
        return self.lift(x) % 1

    def right_slope(self, x):
        x = _fraction(x) % 1
        if x < self.breaks[0]:
            x += 1
        i = bisect_right(self.breaks, x) - 1
        if i < 0:
            i = len(self.breaks) - 1
        return self._slopes[i]

    def left_slope(self, x):
        x = _fraction(x) % 1
        if x <= self.breaks[0]:
            x += 1
        idx = bisect_right(self.breaks, x) - 1
        if idx >= 0 and self.breaks[idx] == x:
            idx -= 1
        if idx < 0:
            idx = len(self.breaks) - 1
        return self._slopes[idx]

    def inverse(self):
        """The exact inverse homeomorphism."""
        pairs = list(zip(self.vals, self.breaks))
        split = next((i for i, (v, _) in enumerate(pairs) if v >= 1), None)
        if split is not None:
            pairs = [(v - 1, b - 1) for v, b in pairs[split:]] + pairs[:split]
        return PLCircleHomeo([v for v, _ in pairs], [b for _, b in pairs])

    def __eq__(self, other):
        if not isinstance(other, PLCircleHomeo):
            return NotImplemented
        return self.breaks == other.breaks and self.vals == other.vals

    def __hash__(self):
        return hash((self.breaks, self.vals))

    def __repr__(self):
        pieces = ", ".join(
            f"{b}->{v}" for b, v in zip(self.breaks, self.vals)
        )
        return f"PLCircleHomeo({pieces})"

    # -- serialization ------------------------------------------------------

    def to_json_obj(self):
        return {
            "breakpoints": [str(b) for b in self.breaks],
            "values": [str(v) for v in self.vals],
        }

    @classmethod
    def from_json_obj(cls, obj):
        if not isinstance(obj, dict):
            raise InputError("homeomorphism JSON must be an object")
        try:
            breaks = obj["breakpoints"]
            vals = obj["values"]
        except (KeyError, TypeError):
            raise InputError(
                'homeomorphism JSON needs "breakpoints" and "values"'
            ) from None
        if not isinstance(breaks, list) or not isinstance(vals, list):
            raise InputError('"breakpoints" and "values" must be lists')
        return cls(breaks, vals)

    @classmethod
    def from_json(cls, text):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
        return cls.from_json_obj(obj)


def _piece_slopes(breaks, vals):
    """Slope of the piece starting at each breakpoint (wrapping at the end)."""
    n = len(breaks)
    slopes = []
    for i in range(n):
        if i + 1 < n:
            db = breaks[i + 1] - breaks[i]
            dv = vals[i + 1] - vals[i]
        else:
            db = breaks[0] + 1 - breaks[i]
            dv = vals[0] + 1 - vals[i]
        slopes.append(dv / db)
    return slopes


def compose(f: PLCircleHomeo, g: PLCircleHomeo) -> PLCircleHomeo:
    """Exact composition f∘g.

    Breakpoint candidates are Breaks(g) together with g^{-1}(Breaks(f));
    the constructor prunes the ones where the composite slopes agree.
    """
    ginv = g.inverse()
    candidates = set(g.breaks)
    for b in f.breaks:
        candidates.add(ginv(b))
    xs = sorted(candidates)
    ys = [f.lift(g.lift(x)) for x in xs]
    return PLCircleHomeo(xs, ys)


def power(g: PLCircleHomeo, n: int) -> PLCircleHomeo:
    """g composed with itself n times (n may be negative)."""
    if n < 0:
        return power(g.inverse(), -n)
    acc = PLCircleHomeo.identity()
    for _ in range(n):
        acc = compose(g, acc)
    return acc


def sing(g: PLCircleHomeo) -> frozenset:
    """Circle points where the one-sided slopes differ."""
    out = []
    slopes = g._slopes
    for i, b in enumerate(g.breaks):
        if slopes[i - 1] != slopes[i]:
            out.append(b)
    return frozenset(out)


def _halfplane_orbit_counts(g):
    """Counts of S \\ gS and gS \\ S for S the unit-level set, computed via
    the action (x, r) -> (g(x), left_slope * r / right_slope)."""
    moved = {}
    for x in g.breaks:
        ratio = g.left_slope(x) / g.right_slope(x)
        moved[g(x)] = ratio
    left_set = {gx for gx, r in moved.items() if r != 1}
    out_count = sum(1 for r in moved.values() if r != 1)
    return len(left_set), out_count


def orbit_distance(g: PLCircleHomeo) -> int:
    """Distance moved by the basepoint of the commensuration action: twice
    the number of singular points."""
    k = len(sing(g))
    removed, added = _halfplane_orbit_counts(g)
    if removed != k or added != k:
        raise InternalError(
            f"symmetric-difference counts ({removed}, {added}) disagree with "
            f"{k} singular points"
        )
    return 2 * k


@dataclass(frozen=True)
class GrowthReport:
    """Growth of the singular set along powers.

    ``classification`` is "bounded" when the tail of the sequence is
    constant, otherwise "linear" with ``translation_length`` the fitted
    positive integer K such that #Sing(g^n) grows like (K/2) n.
    """

    sing_counts: tuple
    classification: str
    translation_length: int | None

    def __post_init__(self):
        if (self.classification == "linear") != (
            self.translation_length is not None
        ):
            raise InputError("translation_length present iff linear")


def growth_profile(
    g: PLCircleHomeo,
    n_max: int,
    max_breakpoints: int = MAX_BREAKPOINTS,
    max_rational_bits: int = MAX_RATIONAL_BITS,
) -> GrowthReport:
    """Compute #Sing(g^n) for n = 1..n_max by exact composition and classify.

    Requires n_max >= 8.  ``max_breakpoints`` and ``max_rational_bits``
    guard against blow-up of the exact representation.
    """
    if n_max < 8:
        raise InputError("n_max must be at least 8")
    counts = []
    acc = g
    for n in range(1, n_max + 1):
        if n > 1:
            acc = compose(g, acc)
        if acc.num_breakpoints() > max_breakpoints:
            raise ResourceLimitError(
                f"power {n} has more than {max_breakpoints} breakpoints"
            )
        bits = max(
            max(q.numerator.bit_length(), q.denominator.bit_length())
            for q in acc.breaks + acc.vals
        )
        if bits > max_rational_bits:
            raise ResourceLimitError(
                f"power {n} needs rationals beyond {max_rational_bits} bits"
            )
        counts.append(len(sing(acc)))

    tail = counts[-max(2, n_max // 4):]
    if all(c == tail[0] for c in tail):
        return GrowthReport(tuple(counts), "bounded", None)
    half = (n_max + 1) // 2
    k = round(Fraction(2 * (counts[n_max - 1] - counts[half - 1]), n_max - half))
    if k < 1:
        # oscillating tail with zero drift: bounded, not linear
        return GrowthReport(tuple(counts), "bounded", None)
    return GrowthReport(tuple(counts), "linear", int(k))
