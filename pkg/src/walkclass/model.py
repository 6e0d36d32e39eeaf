"""Weight tables for small-step quarter-plane walk models.

A model is a table of nonnegative weights d[i,j] on the nine steps
(i,j) in {-1,0,1}^2. The stationary step (0,0) is allowed. Tables are
normalized so the weights sum to 1; an input table with a different
positive total is rescaled, which amounts to rescaling the time variable
of the generating function and changes nothing structural.

The structural classification of a table (its "pattern") looks only at
which weights vanish:

  * Degenerate tables are those whose kernel polynomial collapses: the
    support lies on the diagonal or antidiagonal, or an extreme column
    or row of the table is entirely zero (the walk is confined to a half
    space in one coordinate).
  * Among the remaining tables, the ones whose support avoids three
    consecutive directions (in the cyclic order of the eight compass
    steps) have a curve of genus zero for every admissible time value.
    There are eight such windows of three consecutive directions; the
    four centered on axis directions are already degenerate, so only the
    four diagonal ones occur here.
  * Everything else is nonsingular: the kernel curve is elliptic for
    every time value in (0,1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

STEPS = tuple((i, j) for i in (-1, 0, 1) for j in (-1, 0, 1))

# The eight compass directions in cyclic (counterclockwise) order.
COMPASS = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))

# Enumeration of the eight three-consecutive-zero windows by their center
# direction, with the half-plane containing the support.  Windows centered
# on an axis direction coincide with a zero column or row and are therefore
# degenerate, not genus zero; they keep their slot in the numbering.
HALF_SPACE_CONFIGS = (
    ((-1, 0), "x>=0"),
    ((-1, -1), "x+y>=0"),
    ((0, -1), "y>=0"),
    ((-1, 1), "x-y>=0"),
    ((0, 1), "y<=0"),
    ((1, -1), "y-x>=0"),
    ((1, 0), "x<=0"),
    ((1, 1), "x+y<=0"),
)


class ModelError(ValueError):
    """Base class for invalid weight table input."""


class MalformedRational(ModelError):
    pass


class NegativeWeight(ModelError):
    pass


class AllZeroWeights(ModelError):
    pass


class PatternKind(Enum):
    NONSINGULAR = "NonSingular"
    DEGENERATE = "Degenerate"
    GENUS_ZERO = "GenusZeroConfig"


class DegenerateCase(Enum):
    DIAGONAL_OR_ANTIDIAGONAL = "DiagonalOrAntidiagonal"
    HALF_SPACE_X = "HalfSpaceX"
    HALF_SPACE_Y = "HalfSpaceY"


@dataclass(frozen=True)
class PatternClass:
    kind: PatternKind
    degenerate_case: DegenerateCase | None = None
    # 1-based index into HALF_SPACE_CONFIGS for genus zero tables
    config_index: int | None = None
    # human readable detail: which column/row vanished, or the half plane
    detail: str | None = None

    def describe(self):
        if self.kind is PatternKind.NONSINGULAR:
            return "NonSingular"
        if self.kind is PatternKind.DEGENERATE:
            return "Degenerate(%s: %s)" % (self.degenerate_case.value, self.detail)
        return "GenusZeroConfig(%d: support in %s)" % (self.config_index, self.detail)


class WeightTable:
    """Normalized nonnegative weights on the nine small steps.

    Instances are immutable value objects; equality and hashing follow the
    normalized weights.
    """

    __slots__ = ("_w",)

    def __init__(self, weights):
        w = {}
        total = Fraction(0)
        for (i, j) in STEPS:
            v = weights.get((i, j), Fraction(0))
            if not isinstance(v, Fraction):
                if isinstance(v, int):
                    v = Fraction(v)
                else:
                    raise MalformedRational("weight for step %r is not exact: %r" % ((i, j), v))
            if v < 0:
                raise NegativeWeight("weight for step (%d,%d) is negative: %s" % (i, j, v))
            w[(i, j)] = v
            total += v
        if total == 0 or all(w[s] == 0 for s in STEPS if s != (0, 0)):
            raise AllZeroWeights("at least one non-stationary step needs positive weight")
        if total != 1:
            w = {s: v / total for s, v in w.items()}
        object.__setattr__(self, "_w", w)

    def __setattr__(self, name, value):
        raise AttributeError("WeightTable is immutable")

    def weight(self, i, j):
        return self._w[(i, j)]

    def __getitem__(self, step):
        return self._w[step]

    def items(self):
        return tuple((s, self._w[s]) for s in STEPS)

    def support(self):
        """Non-stationary steps with positive weight."""
        return tuple(s for s in STEPS if s != (0, 0) and self._w[s] > 0)

    @property
    def has_stationary_weight(self):
        return self._w[(0, 0)] > 0

    def __eq__(self, other):
        if not isinstance(other, WeightTable):
            return NotImplemented
        return self._w == other._w

    def __hash__(self):
        return hash(tuple(self._w[s] for s in STEPS))

    def __repr__(self):
        nz = ", ".join("d[%d,%d]=%s" % (i, j, v) for (i, j), v in self.items() if v)
        return "WeightTable(%s)" % nz

    def to_json_dict(self):
        """All nine keys in row-major order, values as reduced fractions."""
        return {"d%d,%d" % (i, j): str(self._w[(i, j)]) for (i, j) in STEPS}

    def to_json(self):
        return json.dumps(self.to_json_dict())


def _parse_rational(key, v):
    if isinstance(v, bool):
        raise MalformedRational("weight %s is not a rational: %r" % (key, v))
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedRational("weight %s is not a rational: %r" % (key, v)) from exc
    raise MalformedRational(
        "weight %s must be an integer or a 'p/q' string, got %r" % (key, v)
    )


def parse_model(source):
    """Build a WeightTable from JSON text or an already-decoded mapping.

    Keys are "d{i},{j}" with i,j in {-1,0,1}; missing keys mean weight zero.
    Values are integers or "p/q" strings. The table is rescaled to total
    weight 1.
    """
    if isinstance(source, (bytes, bytearray)):
        source = source.decode("utf-8")
    if isinstance(source, str):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise MalformedRational("model is not valid JSON: %s" % exc) from exc
    else:
        data = source
    if not isinstance(data, dict):
        raise MalformedRational("model JSON must be an object")

    valid = {"d%d,%d" % (i, j): (i, j) for (i, j) in STEPS}
    weights = {}
    for key, value in data.items():
        if key not in valid:
            raise MalformedRational("unknown weight key %r" % key)
        weights[valid[key]] = _parse_rational(key, value)
    return WeightTable(weights)


def drift(w):
    """Mean step, exact: (sum i*d[i,j], sum j*d[i,j])."""
    dx = sum((Fraction(i) * w.weight(i, j) for (i, j) in STEPS), Fraction(0))
    dy = sum((Fraction(j) * w.weight(i, j) for (i, j) in STEPS), Fraction(0))
    return (dx, dy)


def _column_zero(w, i):
    return all(w.weight(i, j) == 0 for j in (-1, 0, 1))


def _row_zero(w, j):
    return all(w.weight(i, j) == 0 for i in (-1, 0, 1))


def pattern_class(w):
    """Structural classification of the support; independent of t.

    Degeneracy is checked first and wins: diagonal/antidiagonal support,
    then a vanishing extreme column, then a vanishing extreme row. A
    table that survives and has some window of three consecutive compass
    directions with zero weight is genus zero; the rest are nonsingular.
    """
    support = set(w.support())

    if support <= {(1, 1), (-1, -1)} or support <= {(-1, 1), (1, -1)}:
        axis = "diagonal" if support <= {(1, 1), (-1, -1)} else "antidiagonal"
        return PatternClass(
            PatternKind.DEGENERATE,
            degenerate_case=DegenerateCase.DIAGONAL_OR_ANTIDIAGONAL,
            detail="support on the %s" % axis,
        )
    for i in (-1, 1):
        if _column_zero(w, i):
            return PatternClass(
                PatternKind.DEGENERATE,
                degenerate_case=DegenerateCase.HALF_SPACE_X,
                detail="column i=%d is zero" % i,
            )
    for j in (-1, 1):
        if _row_zero(w, j):
            return PatternClass(
                PatternKind.DEGENERATE,
                degenerate_case=DegenerateCase.HALF_SPACE_Y,
                detail="row j=%d is zero" % j,
            )

    matches = []
    for idx, (center, label) in enumerate(HALF_SPACE_CONFIGS, start=1):
        k = COMPASS.index(center)
        window = {COMPASS[(k - 1) % 8], center, COMPASS[(k + 1) % 8]}
        if not (support & window):
            matches.append((idx, center, label))
    if matches:
        # Axis-centered windows imply a zero column or row, handled above;
        # two distinct diagonal windows imply one of the earlier cases too.
        assert len(matches) == 1, "ambiguous half-space window: %r" % matches
        idx, center, label = matches[0]
        assert center[0] != 0 and center[1] != 0
        return PatternClass(PatternKind.GENUS_ZERO, config_index=idx, detail=label)

    return PatternClass(PatternKind.NONSINGULAR)
