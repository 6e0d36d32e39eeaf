"""Dense univariate polynomials with exact rational coefficients.

Coefficients are stored low degree first, as Fractions. This is deliberately
minimal: the package only needs exact evaluation, ring arithmetic, formal
derivatives and one small exact nullspace solve. Anything numeric goes
through ``as_floats`` and numpy.
"""

from __future__ import annotations

from fractions import Fraction


def _frac(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError("exact coefficient expected, got %r" % (v,))


class Poly:
    """Polynomial over Q, immutable, normalized (no trailing zeros)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c):
        return cls([c])

    @classmethod
    def x(cls):
        return cls([0, 1])

    def degree(self):
        # degree of the zero polynomial is -1 by convention here
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Poly([other])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __getitem__(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly([other])
        return self + (-other)

    def __rsub__(self, other):
        return Poly([other]) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1 or 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        r = Poly([1])
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def shift_up(self, k):
        """Multiply by x**k."""
        if self.is_zero():
            return self
        return Poly((Fraction(0),) * k + self.coeffs)

    def deriv(self):
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, v):
        """Horner evaluation; exact for Fraction input, numeric otherwise."""
        acc = Fraction(0) if isinstance(v, (int, Fraction)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * v + (c if isinstance(v, (int, Fraction)) else float(c))
        return acc

    def eval_complex(self, v):
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * v + complex(c)
        return acc

    def as_floats(self, ascending=True):
        cs = [float(c) for c in self.coeffs]
        return cs if ascending else cs[::-1]

    def reversed_coeffs(self, degree):
        """Coefficients of x**degree * p(1/x), ascending, exact."""
        if self.degree() > degree:
            raise ValueError("degree too small for reversal")
        cs = [self[k] for k in range(degree + 1)]
        return Poly(cs[::-1])

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append("%s*x^%d" % (c, k))
        return "Poly(%s)" % " + ".join(terms)


def _rref(rows):
    m = [[_frac(v) for v in row] for row in rows]
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [v / pv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, ncols, pivots


def nullspace_basis(rows):
    """Standard kernel basis of the rational matrix `rows` (list of rows),
    one vector per free column. Empty list for full column rank.

    Plain Gaussian elimination over Fraction; matrices here are tiny
    (at most ~9 x 6).
    """
    if not rows:
        return []
    m, ncols, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -m[i][fc]
        basis.append(vec)
    return basis


def nullspace_vector(rows):
    """One nonzero rational kernel vector of the matrix `rows`, or None.

    Returns None when the matrix has full column rank, and raises
    ValueError when the kernel has dimension > 1 since callers need a
    unique candidate.
    """
    basis = nullspace_basis(rows)
    if not basis:
        return None
    if len(basis) > 1:
        raise ValueError("kernel dimension > 1")
    return basis[0]
