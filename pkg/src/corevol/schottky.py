"""Classical Schottky groups built from paired circles.

The group data is 2g pairwise-disjoint closed disks together with g Mobius
maps, each carrying one circle onto its partner and the exterior of the
source disk into the interior of the target disk.  The Fuchsian case keeps
every circle centered on the real line and every map real.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .mobius import REAL, Mobius, is_infinity

MIN_GAP = 1e-9
CIRCLE_MAP_TOL = 1e-9
_SAMPLES = 8


class SchottkyError(ValueError):
    """Invalid Schottky data; `kind` and `detail` are machine-readable."""

    def __init__(self, kind: str, message: str, **detail):
        super().__init__(message)
        self.kind = kind
        self.detail = detail


@dataclass(frozen=True)
class Circle:
    """Circle in the plane; the closed disk it bounds is a group side."""

    center: complex | float
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise SchottkyError(
                "bad_radius", f"circle radius must be positive, got {self.radius}"
            )

    @property
    def is_real(self) -> bool:
        return not isinstance(self.center, complex) or self.center.imag == 0.0

    @property
    def left(self) -> float:
        """Leftmost real point (real-centered circles only)."""
        c = self.center.real if isinstance(self.center, complex) else self.center
        return c - self.radius

    @property
    def right(self) -> float:
        c = self.center.real if isinstance(self.center, complex) else self.center
        return c + self.radius

    def point_at(self, angle: float):
        return self.center + self.radius * cmath.exp(1j * angle)


@dataclass(frozen=True)
class Pairing:
    """Side pairing: `map` sends circle `source` onto circle `target`."""

    source: int
    target: int
    map: Mobius


@dataclass(frozen=True)
class SchottkyData:
    circles: tuple[Circle, ...]
    pairings: tuple[Pairing, ...]
    fuchsian: bool = True


@dataclass(frozen=True)
class ValidatedGroup:
    """SchottkyData that passed `validate`; genus g = number of pairings."""

    circles: tuple[Circle, ...]
    pairings: tuple[Pairing, ...]
    fuchsian: bool

    @property
    def genus(self) -> int:
        return len(self.pairings)


def _gap(c1: Circle, c2: Circle) -> float:
    return abs(complex(c1.center) - complex(c2.center)) - (c1.radius + c2.radius)


def validate(data: SchottkyData, min_gap: float = MIN_GAP) -> ValidatedGroup:
    """Check all group invariants; raise SchottkyError naming the offender.

    Disks must be pairwise disjoint with a strict gap, every circle must sit
    in exactly one pairing, and each map must carry its source circle onto
    its target circle (8 boundary samples) while contracting the exterior
    (probed at infinity) into the target disk.
    """
    circles, pairings = tuple(data.circles), tuple(data.pairings)
    n = len(circles)
    if n == 0 or n != 2 * len(pairings):
        raise SchottkyError(
            "bad_count",
            f"need 2g circles and g pairings, got {n} circles, {len(pairings)} pairings",
        )

    if data.fuchsian:
        for i, circ in enumerate(circles):
            if not circ.is_real:
                raise SchottkyError(
                    "nonreal_center",
                    f"fuchsian group requires real centers; circle {i} has {circ.center}",
                    circle=i,
                )
        for k, pairing in enumerate(pairings):
            if pairing.map.field != REAL:
                raise SchottkyError(
                    "nonreal_map",
                    f"fuchsian group requires real pairing maps; pairing {k} is complex",
                    pairing=k,
                )

    for i in range(n):
        for j in range(i + 1, n):
            gap = _gap(circles[i], circles[j])
            if gap < min_gap:
                raise SchottkyError(
                    "overlapping_disks",
                    f"disks {i} and {j} are not strictly disjoint (gap {gap:.3e})",
                    circles=(i, j),
                )

    used: dict[int, int] = {}
    for k, pairing in enumerate(pairings):
        for idx in (pairing.source, pairing.target):
            if not 0 <= idx < n:
                raise SchottkyError(
                    "bad_index", f"pairing {k} references circle {idx}", pairing=k
                )
        if pairing.source == pairing.target:
            raise SchottkyError(
                "self_paired", f"pairing {k} pairs circle {pairing.source} to itself",
                pairing=k,
            )
        for idx in (pairing.source, pairing.target):
            if idx in used:
                raise SchottkyError(
                    "reused_circle",
                    f"circle {idx} appears in pairings {used[idx]} and {k}",
                    circles=(idx,),
                )
            used[idx] = k
    if len(used) != n:
        missing = sorted(set(range(n)) - set(used))
        raise SchottkyError(
            "unpaired_circle", f"circles {missing} are not in any pairing",
            circles=tuple(missing),
        )

    for k, pairing in enumerate(pairings):
        src, tgt = circles[pairing.source], circles[pairing.target]
        for s in range(_SAMPLES):
            z = src.point_at(2.0 * math.pi * s / _SAMPLES)
            w = pairing.map(z)
            if is_infinity(w) or abs(abs(w - tgt.center) - tgt.radius) > CIRCLE_MAP_TOL * tgt.radius:
                raise SchottkyError(
                    "circle_mismatch",
                    f"pairing {k} does not carry circle {pairing.source} onto "
                    f"circle {pairing.target}",
                    pairing=k,
                    circles=(pairing.source, pairing.target),
                )
        w = pairing.map(float("inf"))
        if is_infinity(w) or abs(w - tgt.center) >= tgt.radius * (1.0 - CIRCLE_MAP_TOL):
            raise SchottkyError(
                "exterior_not_contracted",
                f"pairing {k} maps the exterior of circle {pairing.source} outside "
                f"the interior of circle {pairing.target}",
                pairing=k,
                circles=(pairing.source, pairing.target),
            )

    return ValidatedGroup(circles, pairings, data.fuchsian)


def generator_from_axis(p: float, q: float, length: float):
    """Hyperbolic element with axis endpoints p, q and the given translation
    length, plus its isometric circle and that circle's image.

    Returns (map, source circle, target circle); q is the attracting fixed
    point and the two circles always form a valid exterior-to-interior
    pairing.  Both endpoints must be finite and distinct.
    """
    if not (math.isfinite(p) and math.isfinite(q)):
        raise ValueError("axis endpoints must be finite (conjugate infinity away first)")
    if p == q:
        raise ValueError("axis endpoints must be distinct")
    if not length > 0:
        raise ValueError(f"translation length must be positive, got {length}")
    if q > p:
        move = Mobius(q, p, 1.0, 1.0)  # 0 -> p, inf -> q
    else:
        move = Mobius(-q, p, -1.0, 1.0)
    half = math.exp(length / 2.0)
    dilate = Mobius(half, 0.0, 0.0, 1.0 / half)
    g = dilate.conjugated_by(move)
    if g.c == 0:
        raise ValueError("degenerate axis: isometric circle center at infinity")
    radius = 1.0 / abs(g.c)
    source = Circle(-g.d / g.c, radius)
    target = Circle(g.a / g.c, radius)
    return g, source, target


def pairing_from_circles(source: Circle, target: Circle) -> Mobius:
    """Canonical map carrying `source` onto `target`, exterior to interior.

    z -> c_t - r_s r_t / (z - c_s); real circles give a real map, and
    infinity lands on the target center.
    """
    k = source.radius * target.radius
    return Mobius(
        target.center, -k - target.center * source.center, 1.0, -source.center
    )


def cyclic_group(p: float, q: float, length: float) -> SchottkyData:
    """Genus-1 Fuchsian group generated by a single axis generator."""
    g, source, target = generator_from_axis(p, q, length)
    return SchottkyData(
        circles=(source, target), pairings=(Pairing(0, 1, g),), fuchsian=True
    )


@dataclass(frozen=True)
class Word:
    """Reduced word in the generators: +i is generator i, -i its inverse (1-based)."""

    letters: tuple[int, ...]

    def __post_init__(self):
        for x in self.letters:
            if x == 0:
                raise ValueError("word letters are nonzero signed generator indices")
        for x, y in zip(self.letters, self.letters[1:]):
            if x == -y:
                raise ValueError(f"word {self.letters} is not reduced")

    def __len__(self):
        return len(self.letters)


def enumerate_words(group: ValidatedGroup, max_len: int) -> list[Word]:
    """All reduced words of length <= max_len, each exactly once.

    The count is 1 + sum_{k=1..max_len} 2g (2g-1)^(k-1).
    """
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    g = group.genus
    alphabet = []
    for i in range(1, g + 1):
        alphabet.extend((i, -i))
    words = [Word(())]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for x in alphabet:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        words.extend(Word(w) for w in nxt)
        frontier = nxt
    return words


def letter_mobius(group: ValidatedGroup, letter: int) -> Mobius:
    pairing = group.pairings[abs(letter) - 1]
    return pairing.map if letter > 0 else pairing.map.inverse()


def word_mobius(group: ValidatedGroup, word: Word) -> Mobius:
    """Product of the letters in written order (leading letter applied last)."""
    field = group.pairings[0].map.field if group.pairings else REAL
    out = Mobius.identity(field)
    for letter in word.letters:
        out = out.compose(letter_mobius(group, letter))
    return out


def _contraction_disk(group: ValidatedGroup, letter: int) -> int:
    """Index of the disk the letter contracts into."""
    pairing = group.pairings[abs(letter) - 1]
    return pairing.target if letter > 0 else pairing.source


def limit_set_sample(group: ValidatedGroup, depth: int, dedup_tol: float = 1e-12):
    """Boundary points approximating the limit set.

    Each nonempty reduced word of length <= depth is applied to the center
    of the disk its leading letter contracts into.  Points come back sorted
    and deduplicated within `dedup_tol` (real floats for Fuchsian groups,
    complex otherwise); deeper samples contain shallower ones.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    raw = []
    for word in enumerate_words(group, depth):
        if len(word) == 0:
            continue
        disk = _contraction_disk(group, word.letters[0])
        z = group.circles[disk].center
        raw.append(complex(word_mobius(group, word)(z)))
    raw.sort(key=lambda z: (z.real, z.imag))
    points: list[complex] = []
    for z in raw:
        if points and abs(z - points[-1]) <= dedup_tol:
            continue
        points.append(z)
    if group.fuchsian:
        return [z.real for z in points]
    return points
