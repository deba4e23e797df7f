"""Extended affine Weyl groups of GL_n type and block products.

An element is written t^lam * u with lam an integer vector of length n
and u a permutation of {1,...,n} preserving the blocks of the datum.
The permutation acts on the lattice by u(e_i) = e_{u(i)}, so the
product rule is (t^a u)(t^b v) = t^{a + u(b)} uv, with uv meaning
function composition: (uv)(i) = u(v(i)).

Length is the Iwahori-Matsumoto count, summed over blocks:

    len(t^lam u) = sum_{i<j, u^-1(i)<u^-1(j)} |lam_i - lam_j|
                 + sum_{i<j, u^-1(i)>u^-1(j)} |lam_i - lam_j - 1|

(indices i < j inside one block). The Bruhat order extends from the
affine Weyl group W_a to the full group: elements are comparable only
inside one W_a coset, detected through the per-block coordinate sums.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatch, InternalCheckFailed, ParseError

IntVec = tuple[int, ...]
RatVec = tuple[Fraction, ...]
Letter = tuple[int, int]  # (block index, affine node 0..n_b-1)


@dataclass(frozen=True)
class GroupDatum:
    """Block structure: an ordered tuple of GL factors.

    ``adjoint[b]`` marks the factor as a PGL quotient; arithmetic stays
    in the GL lattice and the flag only changes how Kottwitz values and
    Newton points are compared and reported.
    """

    blocks: tuple[int, ...]
    adjoint: tuple[bool, ...] = ()

    def __post_init__(self) -> None:
        if not self.blocks or any(n < 1 for n in self.blocks):
            raise ValueError(f"invalid block sizes {self.blocks}")
        if not self.adjoint:
            object.__setattr__(self, "adjoint", (False,) * len(self.blocks))
        if len(self.adjoint) != len(self.blocks):
            raise ValueError("adjoint flags do not match blocks")

    @staticmethod
    def gl(n: int) -> "GroupDatum":
        return GroupDatum((n,))

    @staticmethod
    def pgl(n: int) -> "GroupDatum":
        return GroupDatum((n,), (True,))

    @property
    def n(self) -> int:
        return sum(self.blocks)

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for n in self.blocks:
            out.append(acc)
            acc += n
        return tuple(out)

    def block_ranges(self) -> tuple[tuple[int, int], ...]:
        """1-based inclusive (start, end) per block."""
        return tuple(
            (o + 1, o + n) for o, n in zip(self.offsets(), self.blocks)
        )

    def block_slices(self) -> tuple[slice, ...]:
        return tuple(slice(o, o + n) for o, n in zip(self.offsets(), self.blocks))

    def with_adjoint(self, flag: bool) -> "GroupDatum":
        return GroupDatum(self.blocks, (flag,) * len(self.blocks))

    def block_sums(self, vec: Sequence) -> tuple:
        return tuple(sum(vec[s]) for s in self.block_slices())

    def is_dominant(self, vec: Sequence) -> bool:
        """Weakly decreasing inside every block."""
        for s in self.block_slices():
            part = vec[s]
            if any(part[i] < part[i + 1] for i in range(len(part) - 1)):
                return False
        return True


class Permutation:
    """Permutation of {1,...,n} in one-line notation.

    ``images[i-1] = u(i)``. Products compose as functions applied on
    the left: (u * v)(i) = u(v(i)).

    >>> u = Permutation.from_cycles(3, [(1, 2)])
    >>> v = Permutation.from_cycles(3, [(2, 3)])
    >>> (u * v)(2)
    3
    """

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        n = len(images)
        if sorted(images) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {images}")
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "_hash", hash(images))

    def __setattr__(self, *a):  # immutable
        raise AttributeError("Permutation is immutable")

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(range(1, n + 1))

    @staticmethod
    def from_cycles(n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        """Product of the given cycles, multiplied left to right."""
        result = Permutation.identity(n)
        for cyc in cycles:
            images = list(range(1, n + 1))
            for a, b in zip(cyc, cyc[1:]):
                images[a - 1] = b
            if len(cyc) > 1:
                images[cyc[-1] - 1] = cyc[0]
            result = result * Permutation(images)
        return result

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        a, b = self.images, other.images
        return Permutation(a[b[i] - 1] for i in range(len(a)))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(inv)

    def act(self, vec: Sequence) -> tuple:
        """u(e_i) = e_{u(i)}: entry at position u(i) is vec[i-1]."""
        out = [0] * len(self.images)
        for i, j in enumerate(self.images):
            out[j - 1] = vec[i]
        return tuple(out)

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Nontrivial cycles, each starting at its least element,
        sorted by least element."""
        seen, out = set(), []
        for start in range(1, len(self.images) + 1):
            if start in seen:
                continue
            cyc, i = [start], self(start)
            seen.add(start)
            while i != start:
                cyc.append(i)
                seen.add(i)
                i = self(i)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return tuple(out)

    def is_identity(self) -> bool:
        return all(j == i + 1 for i, j in enumerate(self.images))

    def preserves_blocks(self, datum: GroupDatum) -> bool:
        return all(
            all(lo <= self(i) <= hi for i in range(lo, hi + 1))
            for lo, hi in datum.block_ranges()
        )

    def num_inversions(self) -> int:
        im = self.images
        return sum(
            1 for i in range(len(im)) for j in range(i + 1, len(im)) if im[i] > im[j]
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "id"
        return "".join("cyc(%s)" % ",".join(map(str, c)) for c in cycs)


class AffineElement:
    """t^trans * perm in the extended affine Weyl group of a datum."""

    __slots__ = ("datum", "trans", "perm", "_hash", "_len")

    def __init__(self, datum: GroupDatum, trans: Iterable[int], perm: Permutation):
        trans = tuple(trans)
        if len(trans) != datum.n or perm.n != datum.n:
            raise DimensionMismatch(
                f"rank mismatch: datum n={datum.n}, trans {len(trans)}, perm {perm.n}"
            )
        if not perm.preserves_blocks(datum):
            raise ValueError(f"permutation {perm!r} does not preserve blocks {datum.blocks}")
        object.__setattr__(self, "datum", datum)
        object.__setattr__(self, "trans", trans)
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "_hash", hash((trans, perm.images)))
        object.__setattr__(self, "_len", -1)

    def __setattr__(self, *a):
        raise AttributeError("AffineElement is immutable")

    @staticmethod
    def identity(datum: GroupDatum) -> "AffineElement":
        return AffineElement(datum, (0,) * datum.n, Permutation.identity(datum.n))

    @staticmethod
    def translation(datum: GroupDatum, coords: Iterable[int]) -> "AffineElement":
        return AffineElement(datum, coords, Permutation.identity(datum.n))

    @staticmethod
    def from_permutation(datum: GroupDatum, perm: Permutation) -> "AffineElement":
        return AffineElement(datum, (0,) * datum.n, perm)

    def __mul__(self, other: "AffineElement") -> "AffineElement":
        if self.datum != other.datum:
            raise DimensionMismatch("different group data")
        u, a, b = self.perm, self.trans, other.trans
        acted = u.act(b)
        return AffineElement(
            self.datum,
            tuple(x + y for x, y in zip(a, acted)),
            u * other.perm,
        )

    def inverse(self) -> "AffineElement":
        uinv = self.perm.inverse()
        return AffineElement(
            self.datum, tuple(-x for x in uinv.act(self.trans)), uinv
        )

    def conjugate_by(self, g: "AffineElement") -> "AffineElement":
        return g * self * g.inverse()

    def apply(self, vec: Sequence) -> tuple:
        """Affine action on the ambient vector space: u(v) + trans."""
        if len(vec) != self.datum.n:
            raise DimensionMismatch("vector has wrong length")
        acted = self.perm.act(vec)
        return tuple(x + t for x, t in zip(acted, self.trans))

    def length(self) -> int:
        if self._len < 0:
            total = 0
            inv = self.perm.inverse().images
            lam = self.trans
            for lo, hi in self.datum.block_ranges():
                for i in range(lo, hi + 1):
                    for j in range(i + 1, hi + 1):
                        d = lam[i - 1] - lam[j - 1]
                        if inv[i - 1] < inv[j - 1]:
                            total += abs(d)
                        else:
                            total += abs(d - 1)
            object.__setattr__(self, "_len", total)
        return self._len

    def kappa_raw(self) -> tuple[int, ...]:
        """Per-block coordinate sums (no adjoint reduction)."""
        return self.datum.block_sums(self.trans)

    def is_identity(self) -> bool:
        return self.perm.is_identity() and all(x == 0 for x in self.trans)

    def with_datum(self, datum: GroupDatum) -> "AffineElement":
        """Same underlying map, reinterpreted in a finer or coarser
        block structure of the same rank."""
        return AffineElement(datum, self.trans, self.perm)

    def __pow__(self, k: int) -> "AffineElement":
        if k < 0:
            return self.inverse() ** (-k)
        result = AffineElement.identity(self.datum)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AffineElement)
            and self.trans == other.trans
            and self.perm == other.perm
            and self.datum == other.datum
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return format_element(self)


# --- spec-level function aliases -------------------------------------------

def compose(w1: AffineElement, w2: AffineElement) -> AffineElement:
    return w1 * w2


def invert(w: AffineElement) -> AffineElement:
    return w.inverse()


def apply_affine(w: AffineElement, vec: Sequence) -> tuple:
    return w.apply(vec)


def length(w: AffineElement) -> int:
    return w.length()


# --- simple reflections, reduced words, Bruhat order -----------------------

@lru_cache(maxsize=None)
def simple_reflections(datum: GroupDatum) -> tuple[tuple[Letter, AffineElement], ...]:
    """Affine simple reflections per block, in (block, node) order.

    Node 0 of a block of size n is t^{e_lo - e_hi} (lo hi); nodes
    1..n-1 are the adjacent transpositions. Size-1 blocks contribute
    nothing.
    """
    out: list[tuple[Letter, AffineElement]] = []
    for b, (lo, hi) in enumerate(datum.block_ranges()):
        nb = hi - lo + 1
        if nb < 2:
            continue
        trans = [0] * datum.n
        trans[lo - 1], trans[hi - 1] = 1, -1
        out.append(
            ((b, 0), AffineElement(datum, trans, Permutation.from_cycles(datum.n, [(lo, hi)])))
        )
        for i in range(1, nb):
            p = lo + i - 1
            out.append(
                ((b, i), AffineElement.from_permutation(datum, Permutation.from_cycles(datum.n, [(p, p + 1)])))
            )
    return tuple(out)


def left_descent(w: AffineElement) -> Optional[tuple[Letter, AffineElement]]:
    """Smallest-index s with len(s w) < len(w), or None."""
    lw = w.length()
    for label, s in simple_reflections(w.datum):
        if (s * w).length() < lw:
            return label, s
    return None


@dataclass(frozen=True)
class ReducedWord:
    """Greedy left-descent factorization: w = letters * omega."""

    datum: GroupDatum
    letters: tuple[Letter, ...]
    omega: AffineElement

    def product(self) -> AffineElement:
        table = dict(simple_reflections(self.datum))
        acc = AffineElement.identity(self.datum)
        for letter in self.letters:
            acc = acc * table[letter]
        return acc * self.omega

    def __len__(self) -> int:
        return len(self.letters)


def reduced_word(w: AffineElement) -> ReducedWord:
    letters: list[Letter] = []
    cur = w
    while True:
        d = left_descent(cur)
        if d is None:
            break
        label, s = d
        letters.append(label)
        cur = s * cur
    if cur.length() != 0:
        raise InternalCheckFailed(f"descent search stalled at {cur!r}")
    return ReducedWord(w.datum, tuple(letters), cur)


def _same_wa_coset(w1: AffineElement, w2: AffineElement) -> Optional[AffineElement]:
    """If w1 and w2 can be compared, return w1 adjusted by central
    translations on adjoint blocks so its kappa matches w2; else None."""
    datum = w1.datum
    k1, k2 = w1.kappa_raw(), w2.kappa_raw()
    shift = [0] * datum.n
    for b, (lo, hi) in enumerate(datum.block_ranges()):
        d = k2[b] - k1[b]
        if d == 0:
            continue
        nb = datum.blocks[b]
        if not datum.adjoint[b] or d % nb != 0:
            return None
        q = d // nb
        for p in range(lo - 1, hi):
            shift[p] = q
    if all(x == 0 for x in shift):
        return w1
    return AffineElement(datum, tuple(a + s for a, s in zip(w1.trans, shift)), w1.perm)


@lru_cache(maxsize=1 << 20)
def _bruhat_core(w1: AffineElement, w2: AffineElement) -> bool:
    # Same W_a coset guaranteed by the caller.
    if w1 == w2:
        return True
    if w1.length() >= w2.length():
        return False
    label, s = left_descent(w2)  # exists: len(w2) > len(w1) >= 0
    sw2 = s * w2
    sw1 = s * w1
    if sw1.length() < w1.length():
        return _bruhat_core(sw1, sw2)
    return _bruhat_core(w1, sw2)


def bruhat_leq(w1: AffineElement, w2: AffineElement) -> bool:
    """Bruhat order on the extended group: comparable only inside a
    W_a coset, then the usual left-descent recursion."""
    if w1.datum != w2.datum:
        raise DimensionMismatch("different group data")
    adjusted = _same_wa_coset(w1, w2)
    if adjusted is None:
        return False
    return _bruhat_core(adjusted, w2)


def bruhat_lt(w1: AffineElement, w2: AffineElement) -> bool:
    return w1 != w2 and bruhat_leq(w1, w2)


def bruhat_lower_set(w: AffineElement) -> frozenset:
    """All elements u <= w, via subword products of one reduced word."""
    rw = reduced_word(w)
    table = dict(simple_reflections(w.datum))
    elems = {AffineElement.identity(w.datum)}
    for letter in rw.letters:
        s = table[letter]
        elems |= {e * s for e in elems}
    return frozenset(e * rw.omega for e in elems)


# --- distinguished length-zero elements -------------------------------------

def superbasic_element(m: int, n: int, datum: Optional[GroupDatum] = None) -> AffineElement:
    """The length-zero element t^{varpi_{m,n}} u_{m,n} of GL_n, with
    varpi = e_1 + ... + e_m and u(k) = k + m mod n. Superbasic exactly
    because gcd(m, n) = 1, which is required here.

    >>> superbasic_element(1, 2)
    t[1,0]*cyc(1,2)
    """
    from math import gcd

    if not (0 < m < n):
        raise ValueError(f"need 0 < m < n, got ({m}, {n})")
    if gcd(m, n) != 1:
        raise ValueError(f"({m}, {n}) are not coprime")
    if datum is None:
        datum = GroupDatum.gl(n)
    if datum.blocks != (n,):
        raise DimensionMismatch("superbasic element lives in a single GL_n block")
    w = _length_zero_element(datum, 0, m)
    if w.length() != 0:
        raise InternalCheckFailed("superbasic element is not length zero")
    return w


def _length_zero_element(datum: GroupDatum, block: int, kappa: int) -> AffineElement:
    """The unique length-zero element of the given block's factor with
    coordinate sum kappa (any integer), extended by identity."""
    lo, hi = datum.block_ranges()[block]
    nb = hi - lo + 1
    m = kappa % nb
    q = (kappa - m) // nb
    trans = [0] * datum.n
    for p in range(lo, hi + 1):
        trans[p - 1] = q + (1 if p - lo + 1 <= m else 0)
    images = list(range(1, datum.n + 1))
    for p in range(lo, hi + 1):
        local = p - lo + 1
        images[p - 1] = lo + ((local - 1 + m) % nb)
    return AffineElement(datum, trans, Permutation(images))


def omega_element(datum: GroupDatum, kappas: Sequence[int]) -> AffineElement:
    """Length-zero element with the given per-block coordinate sums."""
    if len(kappas) != datum.num_blocks:
        raise DimensionMismatch("one kappa per block required")
    acc = AffineElement.identity(datum)
    for b, k in enumerate(kappas):
        acc = acc * _length_zero_element(datum, b, k)
    if acc.length() != 0:
        raise InternalCheckFailed("omega element is not length zero")
    return acc


# --- text form ---------------------------------------------------------------

_LITERAL_RE = re.compile(r"^t\[([^\]]*)\]((?:\*cyc\([^)]*\))*)$")
_CYCLE_RE = re.compile(r"\*cyc\(([^)]*)\)")


def format_element(w: AffineElement) -> str:
    """Canonical literal: translation, then cycles sorted by least
    element, each starting at its least element.

    >>> d = GroupDatum.gl(2)
    >>> format_element(AffineElement(d, (1, 0), Permutation.from_cycles(2, [(1, 2)])))
    't[1,0]*cyc(1,2)'
    """
    t = "t[%s]" % ",".join(str(x) for x in w.trans)
    cycs = w.perm.cycles()
    return t + "".join("*cyc(%s)" % ",".join(map(str, c)) for c in cycs)


def parse_element(text: str, datum: GroupDatum) -> AffineElement:
    """Parse ``t[a1,...,an]`` followed by optional ``*cyc(...)`` factors.

    Cycle factors multiply left to right with function-composition
    semantics, matching the canonical output of :func:`format_element`.
    """
    text = text.strip().replace(" ", "")
    m = _LITERAL_RE.match(text)
    if not m:
        raise ParseError(f"malformed element literal: {text!r}")
    body, cycles_part = m.group(1), m.group(2)
    try:
        coords = tuple(int(x) for x in body.split(",")) if body else ()
    except ValueError as exc:
        raise ParseError(f"bad translation entries in {text!r}") from exc
    if len(coords) != datum.n:
        raise ParseError(f"expected {datum.n} coordinates, got {len(coords)}")
    cycles = []
    for cm in _CYCLE_RE.finditer(cycles_part):
        try:
            cyc = tuple(int(x) for x in cm.group(1).split(","))
        except ValueError as exc:
            raise ParseError(f"bad cycle entries in {text!r}") from exc
        if len(set(cyc)) != len(cyc):
            raise ParseError(f"repeated index inside a cycle in {text!r}")
        if any(not (1 <= i <= datum.n) for i in cyc):
            raise ParseError(f"cycle index out of range 1..{datum.n} in {text!r}")
        cycles.append(cyc)
    perm = Permutation.from_cycles(datum.n, cycles)
    try:
        return AffineElement(datum, coords, perm)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc



if __name__ == "__main__":
    import doctest

    doctest.testmod()
