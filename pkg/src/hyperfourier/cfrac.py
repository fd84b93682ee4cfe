"""Even-integer continued fractions and the even rational partition.

A word ``(n_N, ..., n_1)`` of nonzero integers names the map::

    phi(z) = 1 / (2 n_N - 1 / (2 n_{N-1} - ... - 1 / (2 n_1 - z)))

Convergents use the recursion ``p_k = 2 n_k p_{k-1} - p_{k-2}`` (same for
``q``) seeded by ``p_-1 = 1, p_0 = 0, q_-1 = 0, q_0 = 1``, where ``n_1`` is
consumed first.  Then ``phi(z) = (z p_{N-1} + q_{N-1}) / (z p_N + q_N)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from .errors import BoundaryAmbiguous, DomainError, NumericalFailure

__all__ = [
    "CFWord",
    "ConvergentPair",
    "PartitionCell",
    "E_INF",
    "E_WORD",
    "even_int_part",
    "even_parts",
    "convergents",
    "phi_apply",
    "real_gauss_map",
    "even_rational_decompose",
    "gauss_map_h",
    "classify_point",
    "inverse_map",
    "inverse_derivative",
    "roof_diameter",
    "in_zero_cell",
]

E_INF = "E_INF"
E_WORD = "E_WORD"


@dataclass(frozen=True)
class CFWord:
    """Entries ``(n_N, ..., n_1)``; the empty tuple is the identity map."""

    entries: tuple = ()

    def __post_init__(self):
        ent = tuple(int(v) for v in self.entries)
        if any(v == 0 for v in ent):
            raise DomainError("word entries must be nonzero")
        object.__setattr__(self, "entries", ent)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def sign(self) -> int:
        if not self.entries:
            return 0
        return 1 if self.entries[-1] > 0 else -1

    def prefix(self, k: int) -> "CFWord":
        """The outer ``k`` entries ``(n_N, ..., n_{N-k+1})``."""
        return CFWord(self.entries[:k])


def _as_word(word) -> CFWord:
    return word if isinstance(word, CFWord) else CFWord(tuple(word))


@dataclass(frozen=True)
class ConvergentPair:
    """``p[k+1]``, ``q[k+1]`` hold ``p_k``, ``q_k`` for ``k = -1..N``."""

    p: tuple
    q: tuple

    @property
    def N(self) -> int:
        return len(self.p) - 2

    def pk(self, k: int) -> int:
        return self.p[k + 1]

    def qk(self, k: int) -> int:
        return self.q[k + 1]


def convergents(word) -> ConvergentPair:
    word = _as_word(word)
    p = [1, 0]
    q = [0, 1]
    for n in reversed(word.entries):
        p.append(2 * n * p[-1] - p[-2])
        q.append(2 * n * q[-1] - q[-2])
    return ConvergentPair(tuple(p), tuple(q))


def even_int_part(x) -> int:
    """Even integer part: ``2 floor((1 + |x|)/2) sign(x)``."""
    if x == 0:
        return 0
    s = 1 if x > 0 else -1
    return 2 * math.floor((1 + abs(x)) / 2) * s


def even_parts(x):
    """Split ``x`` into an even integer and a remainder in ``[-1, 1]``.

    Odd integers go right on the positive axis (``[2m-1, 2m+1) -> 2m``) and
    left on the negative axis.  Exact for ``Fraction`` and ``int`` inputs.
    """
    e = even_int_part(x)
    return e, x - e


def phi_apply(word, z):
    """Evaluate the word's map at ``z``; exact when ``z`` is rational."""
    word = _as_word(word)
    exact = isinstance(z, Rational)
    if exact:
        z = Fraction(z)
    cv = convergents(word)
    N = cv.N
    num = z * cv.pk(N - 1) + cv.qk(N - 1) if N >= 1 else z
    den = z * cv.pk(N) + cv.qk(N) if N >= 1 else 1
    if den == 0:
        raise DomainError("word maps this point to infinity")
    if exact:
        return Fraction(num) / Fraction(den)
    return complex(num) / complex(den)


def inverse_map(word, z: complex) -> complex:
    """Inverse Moebius map of the word, from its convergents."""
    word = _as_word(word)
    if not word.entries:
        return complex(z)
    cv = convergents(word)
    N = cv.N
    return (cv.qk(N) * z - cv.qk(N - 1)) / (-cv.pk(N) * z + cv.pk(N - 1))


def inverse_derivative(word, z: complex) -> complex:
    """Derivative of the inverse map; the convergent determinant is one."""
    word = _as_word(word)
    if not word.entries:
        return 1.0 + 0j
    cv = convergents(word)
    N = cv.N
    return 1.0 / (cv.pk(N - 1) - cv.pk(N) * z) ** 2


def roof_diameter(word) -> Fraction:
    """``|phi(inf) - phi(sign)|`` as the exact rational ``1/(|p_N|(|q_N| - |p_N|))``."""
    cv = convergents(word)
    pN, qN = abs(cv.pk(cv.N)), abs(cv.qk(cv.N))
    return Fraction(1, pN * (qN - pN))


def real_gauss_map(x):
    """``G2(x) = {-1/x}_2`` with ``G2(0) = 0``."""
    if x == 0:
        return Fraction(0) if isinstance(x, Rational) else 0.0
    return even_parts(-1 / Fraction(x) if isinstance(x, Rational) else -1 / x)[1]


def even_rational_decompose(p: int, q: int) -> CFWord:
    """Word whose map sends 0 to ``p/q`` for an even rational in ``(-1, 1)``."""
    if q == 0 or math.gcd(p, q) != 1 or (p * q) % 2 != 0 or p == 0 or abs(p) >= abs(q):
        raise DomainError("p/q must be a reduced even rational in (-1, 1) minus 0")
    v = Fraction(p, q)
    entries = []
    while v != 0:
        e, _ = even_parts(1 / v)
        entries.append(e // 2)
        v = real_gauss_map(v)
        if len(entries) > 4 * abs(q) + 4:
            raise ArithmeticError("decomposition failed to terminate")
    return CFWord(tuple(entries))


def gauss_map_h(z: complex):
    """Complex even Gauss map on the strip ``|Re z| <= 1``.

    Returns ``(G2(z), j)`` with ``G2(z) = -1/z - e`` where ``e`` is the even
    integer part of ``Re(-1/z)`` and ``j = -e/2``; then ``z = 1/(2j - G2(z))``.
    """
    z = complex(z)
    if not z.imag > 0 or abs(z.real) > 1:
        raise DomainError("gauss_map_h needs |Re z| <= 1 and Im z > 0")
    v = -1 / z
    e = even_int_part(v.real)
    return v - e, -e // 2


@dataclass(frozen=True)
class PartitionCell:
    kind: str
    word: CFWord = field(default_factory=CFWord)
    shift: int = 0
    height: int = 0
    orbit: tuple = ()

    def as_dict(self):
        return {"kind": self.kind, "shift": self.shift, "word": list(self.word.entries), "height": self.height}


def classify_point(z: complex, boundary_eps: float = 1e-9, strict: bool = True) -> PartitionCell:
    """Locate ``z`` in the even rational partition of the upper half-plane.

    The even shift moves ``z`` into ``|Re| <= 1``.  Outside the unit disk the
    point is in the exterior cell (height 0).  Inside, the complex Gauss map
    is iterated until ``-1/w`` leaves every disk ``2m + D``; the recorded
    indices form the word, and the height is one more than its length.

    With ``strict`` a point within ``boundary_eps`` of a cell boundary raises
    :class:`BoundaryAmbiguous`; otherwise the side given by the floating
    point comparison is used (both sides agree for continuous quantities).
    ``orbit`` holds the iterates ``G2^k(z - shift)``, ``k = 0..len(word)``.
    """
    z = complex(z)
    if not z.imag > 0 or not math.isfinite(z.real):
        raise DomainError("point must lie in the upper half-plane")
    shift = even_int_part(z.real)
    w = z - shift
    r = abs(w)
    if strict and abs(r - 1) < boundary_eps:
        raise BoundaryAmbiguous(f"{z} is on the boundary of the exterior cell")
    if r >= 1:
        return PartitionCell(E_INF, CFWord(), shift, 0, (w,))
    cap = 1 + math.ceil(1 / (2 * z.imag)) + 2
    word = []
    orbit = [w]
    for _ in range(cap + 1):
        v = -1 / w
        e = even_int_part(v.real)
        d = abs(v - e)
        if strict and abs(d - 1) < boundary_eps:
            raise BoundaryAmbiguous(f"{z} is on a cell roof")
        if d >= 1:
            return PartitionCell(E_WORD, CFWord(tuple(word)), shift, 1 + len(word), tuple(orbit))
        word.append(-e // 2)
        w = v - e
        orbit.append(w)
    raise NumericalFailure("classification exceeded the height bound")


def in_zero_cell(w: complex) -> bool:
    """Direct membership test for the bottom cell: ``|w| < 1`` and ``-1/w`` outside all ``2m + D``."""
    if not (w.imag > 0 and abs(w) < 1):
        return False
    v = -1 / w
    m = round(v.real / 2)
    return all(abs(v - 2 * k) > 1 for k in (m - 1, m, m + 1))
