"""Exact arithmetic for the integer-lattice IFS class.

Everything here is integer-exact: Gaussian integers, fourth-root-of-unity
rotations, the isometries h(z) = i^q * z + w of the square lattice, and the
contractions f(z) = (i^q * z + v) / 2.  All values are immutable; every
operation is pure.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


# components of i^q for q = 0..3
_UNIT_RE = (1, 0, -1, 0)
_UNIT_IM = (0, 1, 0, -1)


def unit_mul(q1: int, q2: int) -> int:
    return (q1 + q2) & 3


def unit_inv(q: int) -> int:
    return (4 - q) & 3


def unit_apply(q: int, re: int, im: int) -> tuple[int, int]:
    """Multiply the Gaussian integer re+im*i by i^q."""
    if q == 0:
        return re, im
    if q == 1:
        return -im, re
    if q == 2:
        return -re, -im
    return im, -re


@dataclass(frozen=True, slots=True)
class GaussInt:
    """Gaussian integer re + im*i."""

    re: int
    im: int

    def __add__(self, other: "GaussInt") -> "GaussInt":
        return GaussInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussInt") -> "GaussInt":
        return GaussInt(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussInt":
        return GaussInt(-self.re, -self.im)

    def __mul__(self, other: "GaussInt") -> "GaussInt":
        return GaussInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def conj(self) -> "GaussInt":
        return GaussInt(self.re, -self.im)

    def norm(self) -> int:
        """|z|^2, always a non-negative integer."""
        return self.re * self.re + self.im * self.im

    def rotated(self, q: int) -> "GaussInt":
        return GaussInt(*unit_apply(q, self.re, self.im))

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def __str__(self) -> str:
        return format_gauss(self.re, self.im) or "0"


def format_gauss(re: int, im: int, leading_sign: bool = False) -> str:
    """Human form of re+im*i, e.g. '-2-i', '+1', 'i'.  Empty string for 0."""
    parts = []
    if re:
        parts.append(f"{re:+d}" if (leading_sign or parts) else str(re))
    if im:
        sign = "+" if im > 0 else "-"
        mag = "" if abs(im) == 1 else str(abs(im))
        if not parts and not leading_sign and im > 0:
            parts.append(f"{mag}i")
        else:
            parts.append(f"{sign}{mag}i")
    return "".join(parts)


IDENTITY: "Isometry"


@dataclass(frozen=True, slots=True)
class Isometry:
    """Lattice isometry h(z) = i^q * z + (re + im*i).

    These form the rotational symmetry group of the square lattice; the
    neighbor maps of every system in our class live here.
    """

    q: int
    re: int
    im: int

    def __post_init__(self):
        if not 0 <= self.q <= 3:
            raise ValueError(f"unit exponent out of range: {self.q}")

    def compose(self, other: "Isometry") -> "Isometry":
        """self after other: (self . other)(z) = self(other(z))."""
        wr, wi = unit_apply(self.q, other.re, other.im)
        return Isometry(unit_mul(self.q, other.q), wr + self.re, wi + self.im)

    def invert(self) -> "Isometry":
        qi = unit_inv(self.q)
        wr, wi = unit_apply(qi, self.re, self.im)
        return Isometry(qi, -wr, -wi)

    def is_identity(self) -> bool:
        return self.q == 0 and self.re == 0 and self.im == 0

    def w(self) -> GaussInt:
        return GaussInt(self.re, self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def apply(self, z: complex) -> complex:
        u = complex(_UNIT_RE[self.q], _UNIT_IM[self.q])
        return u * z + complex(self.re, self.im)

    def key(self) -> tuple[int, int, int]:
        """Canonical sort key (q, re, im)."""
        return (self.q, self.re, self.im)

    def formula(self) -> str:
        head = ("z", "iz", "-z", "-iz")[self.q]
        tail = format_gauss(self.re, self.im, leading_sign=True)
        return head + tail

    def __str__(self) -> str:
        return self.formula()


IDENTITY = Isometry(0, 0, 0)


@dataclass(frozen=True, slots=True)
class IfsMap:
    """Contraction f(z) = (i^q * z + v) / 2 with v = re + im*i."""

    q: int
    re: int
    im: int

    def __post_init__(self):
        if not 0 <= self.q <= 3:
            raise ValueError(f"unit exponent out of range: {self.q}")

    def v(self) -> GaussInt:
        return GaussInt(self.re, self.im)

    def vnorm(self) -> int:
        return self.re * self.re + self.im * self.im

    def fixed_point(self) -> tuple[GaussInt, GaussInt]:
        """Exact fixed point v/(2-u) as (numerator, denominator)."""
        den = GaussInt(2, 0) - GaussInt(_UNIT_RE[self.q], _UNIT_IM[self.q])
        return GaussInt(self.re, self.im), den

    def fixed_point_exact(self) -> tuple[Fraction, Fraction]:
        num, den = self.fixed_point()
        scaled = num * den.conj()
        n = den.norm()
        return Fraction(scaled.re, n), Fraction(scaled.im, n)

    def apply(self, z: complex) -> complex:
        u = complex(_UNIT_RE[self.q], _UNIT_IM[self.q])
        return (u * z + complex(self.re, self.im)) / 2.0

    def formula(self) -> str:
        head = ("z", "iz", "-z", "-iz")[self.q]
        tail = format_gauss(self.re, self.im, leading_sign=True)
        return f"({head}{tail})/2"


class ParseError(ValueError):
    """Raised when an IFS description string is malformed."""


@dataclass(frozen=True)
class IfsSystem:
    """An ordered family of m >= 2 half-scale lattice contractions."""

    maps: tuple[IfsMap, ...]

    def __post_init__(self):
        if len(self.maps) < 2:
            raise ValueError("an IFS needs at least two maps")

    @property
    def m(self) -> int:
        return len(self.maps)

    def radius_sq(self) -> int:
        """R^2 for the bounding radius R = max_k |v_k|; attractor lies in |z| <= R."""
        return max(f.vnorm() for f in self.maps)

    def radius(self) -> float:
        return self.radius_sq() ** 0.5

    def to_json(self) -> list[list[int]]:
        return [[f.q, f.re, f.im] for f in self.maps]

    @classmethod
    def from_json(cls, data) -> "IfsSystem":
        try:
            maps = tuple(IfsMap(int(q), int(a), int(b)) for q, a, b in data)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad IFS JSON: {exc}") from exc
        return cls(maps)

    def __str__(self) -> str:
        return serialize_ifs(self)


def parse_ifs(text: str) -> IfsSystem:
    """Parse 'q,a,b;q,a,b;...' (q in 0..3, a/b signed integers)."""
    maps = []
    chunks = text.strip().split(";")
    if len(chunks) < 2:
        raise ParseError(f"expected at least two ';'-separated maps, got {len(chunks)}")
    for i, chunk in enumerate(chunks):
        fields = [f.strip() for f in chunk.split(",")]
        if len(fields) != 3:
            raise ParseError(f"map {i}: expected 3 fields 'q,a,b', got {len(fields)} in {chunk!r}")
        vals = []
        for name, f in zip(("q", "a", "b"), fields):
            try:
                vals.append(int(f))
            except ValueError:
                raise ParseError(f"map {i}: field {name} is not an integer: {f!r}") from None
        q, a, b = vals
        if not 0 <= q <= 3:
            raise ParseError(f"map {i}: rotation exponent q must be in 0..3, got {q}")
        maps.append(IfsMap(q, a, b))
    return IfsSystem(tuple(maps))


def serialize_ifs(sys: IfsSystem) -> str:
    return ";".join(f"{f.q},{f.re},{f.im}" for f in sys.maps)


def neighbor_transition(h: Isometry, j: int, k: int, sys: IfsSystem) -> Isometry:
    """The neighbor-map step h -> f_j^-1 . h . f_k, closed-form and exact.

    With h = (alpha, w):  u' = u_j^-1 * alpha * u_k,
    w' = u_j^-1 * (alpha*v_k + 2w - v_j).
    """
    fj, fk = sys.maps[j], sys.maps[k]
    qinv = unit_inv(fj.q)
    q2 = (qinv + h.q + fk.q) & 3
    tr, ti = unit_apply(h.q, fk.re, fk.im)
    tr += 2 * h.re - fj.re
    ti += 2 * h.im - fj.im
    wr, wi = unit_apply(qinv, tr, ti)
    return Isometry(q2, wr, wi)


def initial_neighbors(sys: IfsSystem) -> list[tuple[int, int, Isometry]]:
    """All first-level neighbor maps f_j^-1 f_k, j != k, in (j, k) order."""
    out = []
    for j in range(sys.m):
        for k in range(sys.m):
            if j != k:
                out.append((j, k, neighbor_transition(IDENTITY, j, k, sys)))
    return out
