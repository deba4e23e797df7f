"""Newton points, Kottwitz invariants and dominance order.

The twist is a pair sigma = Ad(tau) o sigma0 with tau a length-zero
element and sigma0 a diagram automorphism: a permutation of equal-size
blocks, optionally composed with the flip of a GL factor, which acts
on coweights as lam -> -reverse(lam). The Newton point of w is read
off the affine action: iterate w o sigma until the linear part is the
identity, say after k steps with total translation lam; then
nu = lam / k, and the Newton point is its block-dominant representative.

Everything is exact: translations stay integral until the single final
division, so Newton points are tuples of fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence

from .errors import DimensionMismatch, InternalCheckFailed, KappaMismatch
from .weyl import AffineElement, GroupDatum, Permutation

RatVec = tuple[Fraction, ...]
Node = tuple[int, int]  # (block, i) finite simple root, 1 <= i <= n_b - 1


class SignedMap(NamedTuple):
    """Signed coordinate permutation: position p carries vec[p-1] to
    position pos[p-1] with sign sign[p-1]."""

    pos: tuple[int, ...]
    sign: tuple[int, ...]

    @staticmethod
    def identity(n: int) -> "SignedMap":
        return SignedMap(tuple(range(1, n + 1)), (1,) * n)

    def is_identity(self) -> bool:
        return all(s == 1 for s in self.sign) and all(
            p == i + 1 for i, p in enumerate(self.pos)
        )

    def after(self, inner: "SignedMap") -> "SignedMap":
        """self o inner."""
        pos = tuple(self.pos[p - 1] for p in inner.pos)
        sign = tuple(s * self.sign[p - 1] for p, s in zip(inner.pos, inner.sign))
        return SignedMap(pos, sign)

    def apply(self, vec: Sequence) -> tuple:
        out = [0] * len(self.pos)
        for i, (p, s) in enumerate(zip(self.pos, self.sign)):
            out[p - 1] = s * vec[i]
        return tuple(out)

    def inverse(self) -> "SignedMap":
        pos = [0] * len(self.pos)
        sign = [1] * len(self.pos)
        for i, (p, s) in enumerate(zip(self.pos, self.sign)):
            pos[p - 1] = i + 1
            sign[p - 1] = s
        return SignedMap(tuple(pos), tuple(sign))

    def order(self) -> int:
        """Exact order from the cycle structure: a cycle of length L
        contributes L when its sign product is +1, else 2L."""
        from math import lcm

        n = len(self.pos)
        seen = [False] * n
        order = 1
        for start in range(n):
            if seen[start]:
                continue
            length, sign, cur = 0, 1, start
            while not seen[cur]:
                seen[cur] = True
                sign *= self.sign[cur]
                cur = self.pos[cur] - 1
                length += 1
            order = lcm(order, length if sign == 1 else 2 * length)
        return order

    def position_perm(self) -> Permutation:
        return Permutation(self.pos)


class AffineMap(NamedTuple):
    """v -> linear(v) + shift, with integral shift."""

    linear: SignedMap
    shift: tuple[int, ...]

    def after(self, inner: "AffineMap") -> "AffineMap":
        lin = self.linear.after(inner.linear)
        sh = tuple(
            a + b for a, b in zip(self.linear.apply(inner.shift), self.shift)
        )
        return AffineMap(lin, sh)


@dataclass(frozen=True)
class Sigma0:
    """Diagram automorphism: block_to[b] is the image block of block b,
    flip[b] whether the map b -> block_to[b] composes with the flip."""

    datum: GroupDatum
    block_to: tuple[int, ...]
    flip: tuple[bool, ...]

    def __post_init__(self) -> None:
        r = self.datum.num_blocks
        if sorted(self.block_to) != list(range(r)) or len(self.flip) != r:
            raise ValueError("block_to must permute blocks, one flip flag each")
        sizes = self.datum.blocks
        for b, tb in enumerate(self.block_to):
            if sizes[b] != sizes[tb]:
                raise ValueError("sigma0 maps blocks of different sizes")

    @staticmethod
    def identity(datum: GroupDatum) -> "Sigma0":
        r = datum.num_blocks
        return Sigma0(datum, tuple(range(r)), (False,) * r)

    def is_identity(self) -> bool:
        return all(tb == b for b, tb in enumerate(self.block_to)) and not any(self.flip)

    def map(self) -> SignedMap:
        return _sigma0_map(self)

    @property
    def order(self) -> int:
        return self.map().order()

    def apply_vector(self, vec: Sequence) -> tuple:
        return self.map().apply(vec)

    def is_invariant(self, vec: Sequence) -> bool:
        return self.apply_vector(vec) == tuple(vec)

    def apply_perm(self, u: Permutation, power: int = 1) -> Permutation:
        """sigma0^power of a block-preserving permutation: the signs of
        the linear map cancel, leaving conjugation by its position part."""
        rho = _map_power(self.map(), power).position_perm()
        return rho * u * rho.inverse()

    def apply_element(self, w: AffineElement, power: int = 1) -> AffineElement:
        lin = _map_power(self.map(), power)
        return AffineElement(w.datum, lin.apply(w.trans), self.apply_perm(w.perm, power))

    def block_orbits(self) -> tuple[tuple[int, ...], ...]:
        """Orbits of the block permutation, each listed in cyclic order
        starting from its smallest block index."""
        seen, orbits = set(), []
        for b in range(self.datum.num_blocks):
            if b in seen:
                continue
            orb, cur = [b], self.block_to[b]
            seen.add(b)
            while cur != b:
                orb.append(cur)
                seen.add(cur)
                cur = self.block_to[cur]
            orbits.append(tuple(orb))
        return tuple(orbits)

    def node_image(self, node: Node) -> Node:
        b, i = node
        nb = self.datum.blocks[b]
        return (self.block_to[b], nb - i if self.flip[b] else i)

    def node_orbits(self) -> tuple[tuple[Node, ...], ...]:
        """Orbits on the finite simple roots, sorted by least node."""
        nodes = simple_nodes(self.datum)
        seen, orbits = set(), []
        for node in nodes:
            if node in seen:
                continue
            orb, cur = [node], self.node_image(node)
            seen.add(node)
            while cur != node:
                orb.append(cur)
                seen.add(cur)
                cur = self.node_image(cur)
            orbits.append(tuple(sorted(orb)))
        return tuple(sorted(orbits))


@lru_cache(maxsize=None)
def _sigma0_map(s: Sigma0) -> SignedMap:
    datum = s.datum
    offsets = datum.offsets()
    pos = [0] * datum.n
    sign = [1] * datum.n
    for b, nb in enumerate(datum.blocks):
        tb = s.block_to[b]
        for local in range(1, nb + 1):
            src = offsets[b] + local
            if s.flip[b]:
                pos[src - 1] = offsets[tb] + (nb + 1 - local)
                sign[src - 1] = -1
            else:
                pos[src - 1] = offsets[tb] + local
    return SignedMap(tuple(pos), tuple(sign))


def _map_power(m: SignedMap, power: int) -> SignedMap:
    if power < 0:
        return _map_power(m.inverse(), -power)
    acc = SignedMap.identity(len(m.pos))
    for _ in range(power):
        acc = m.after(acc)
    return acc


@lru_cache(maxsize=None)
def simple_nodes(datum: GroupDatum) -> tuple[Node, ...]:
    return tuple(
        (b, i) for b, nb in enumerate(datum.blocks) for i in range(1, nb)
    )


def omega_pairing(datum: GroupDatum, node: Node, vec: Sequence) -> Fraction:
    """<omega_i, v> for the fundamental weight at the node, computed
    block-locally; kills the center of the block."""
    b, i = node
    lo, hi = datum.block_ranges()[b]
    nb = datum.blocks[b]
    head = sum(vec[lo - 1 : lo - 1 + i])
    total = sum(vec[lo - 1 : hi])
    return Fraction(head) - Fraction(i, nb) * Fraction(total)


def alpha_pairing(datum: GroupDatum, node: Node, vec: Sequence):
    b, i = node
    lo, _ = datum.block_ranges()[b]
    p = lo - 1 + i
    return vec[p - 1] - vec[p]


def coroot_vector(datum: GroupDatum, node: Node) -> tuple[int, ...]:
    b, i = node
    lo, _ = datum.block_ranges()[b]
    out = [0] * datum.n
    out[lo - 1 + i - 1] = 1
    out[lo - 1 + i] = -1
    return tuple(out)


@dataclass(frozen=True)
class Frobenius:
    """Twist descriptor sigma = Ad(tau) o sigma0 with an optional
    central shift subtracted from reported Newton points only."""

    tau: AffineElement
    sigma0: Sigma0
    shift: RatVec = ()

    def __post_init__(self) -> None:
        if self.tau.length() != 0:
            raise ValueError("tau must have length zero")
        if self.sigma0.datum != self.tau.datum:
            raise DimensionMismatch("sigma0 and tau live in different data")
        if not self.shift:
            object.__setattr__(self, "shift", (Fraction(0),) * self.datum.n)
        if len(self.shift) != self.datum.n:
            raise DimensionMismatch("shift has wrong length")
        for lo, hi in self.datum.block_ranges():
            blockvals = set(self.shift[lo - 1 : hi])
            if len(blockvals) != 1:
                raise ValueError("shift must be central (constant per block)")
        if not self.datum.is_dominant(self.tau.trans):
            # every length-zero element of a GL-type product has a
            # dominant translation part, so this is a hard error
            raise ValueError(f"tau {self.tau!r} has non-dominant translation part")

    @property
    def datum(self) -> GroupDatum:
        return self.tau.datum

    @property
    def lam(self) -> tuple[int, ...]:
        """Dominant translation part of tau."""
        return self.tau.trans

    @staticmethod
    def trivial(datum: GroupDatum) -> "Frobenius":
        return Frobenius(AffineElement.identity(datum), Sigma0.identity(datum))

    @staticmethod
    def inner(tau: AffineElement, shift: Optional[Sequence] = None) -> "Frobenius":
        sh = tuple(Fraction(x) for x in shift) if shift is not None else ()
        return Frobenius(tau, Sigma0.identity(tau.datum), sh)

    @staticmethod
    def superbasic(m: int, n: int, normalized: bool = True,
                   adjoint: bool = False) -> "Frobenius":
        """Ad(sigma_{m,n}) on a single GL_n (or PGL_n) block, with the
        canonical central shift (m/n) d so reported points are basic
        of slope zero when mu = 0."""
        from .weyl import superbasic_element

        datum = GroupDatum.pgl(n) if adjoint else GroupDatum.gl(n)
        tau = superbasic_element(m, n, datum)
        shift = (Fraction(m, n),) * n if normalized else ()
        return Frobenius(tau, Sigma0.identity(datum), shift)

    def affine_map(self) -> AffineMap:
        """Action of tau o sigma0 on the ambient space."""
        u = SignedMap(self.tau.perm.images, (1,) * self.datum.n)
        return AffineMap(u.after(self.sigma0.map()), self.tau.trans)

    def apply(self, w: AffineElement, power: int = 1) -> AffineElement:
        """The automorphism sigma^power applied to w."""
        if power < 0:
            out = w
            for _ in range(-power):
                out = self.sigma0.apply_element(
                    self.tau.inverse() * out * self.tau, power=-1
                )
            return out
        out = w
        for _ in range(power):
            out = self.tau * self.sigma0.apply_element(out) * self.tau.inverse()
        return out

    def twist_conjugate(self, w: AffineElement, g: AffineElement) -> AffineElement:
        """g w sigma(g)^{-1}, the twisted conjugation on the group."""
        return g * w * self.apply(g).inverse()

    def with_shift(self, shift: Sequence) -> "Frobenius":
        return Frobenius(self.tau, self.sigma0, tuple(Fraction(x) for x in shift))

    def canonical_shift(self) -> RatVec:
        """Central shift (kappa_b(tau)/n_b) d per block."""
        sums = self.datum.block_sums(self.tau.trans)
        out: list[Fraction] = []
        for nb, s in zip(self.datum.blocks, sums):
            out.extend([Fraction(s, nb)] * nb)
        return tuple(out)


@dataclass(frozen=True)
class KappaValue:
    """Per-block Kottwitz coordinate; reduced mod n_b on PGL blocks."""

    datum: GroupDatum
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.datum.num_blocks:
            raise DimensionMismatch("one kappa per block required")
        reduced = tuple(
            v % nb if adj else v
            for v, nb, adj in zip(self.values, self.datum.blocks, self.datum.adjoint)
        )
        object.__setattr__(self, "values", reduced)

    def __add__(self, other: "KappaValue") -> "KappaValue":
        if self.datum != other.datum:
            raise DimensionMismatch("different group data")
        return KappaValue(
            self.datum, tuple(a + b for a, b in zip(self.values, other.values))
        )


def kappa(w: AffineElement) -> KappaValue:
    return KappaValue(w.datum, w.kappa_raw())


@dataclass(frozen=True)
class NewtonPoint:
    """Dominant rational vector with its Kottwitz coordinate."""

    datum: GroupDatum
    nu: RatVec
    kappa: KappaValue

    def __post_init__(self) -> None:
        object.__setattr__(self, "nu", tuple(Fraction(x) for x in self.nu))
        if len(self.nu) != self.datum.n:
            raise DimensionMismatch("vector has wrong length")
        if not self.datum.is_dominant(self.nu):
            raise ValueError(f"Newton point {self.nu} is not dominant per block")
        if self.kappa.datum != self.datum:
            raise DimensionMismatch("kappa from a different datum")

    @staticmethod
    def from_vector(datum: GroupDatum, vec: Sequence,
                    kappa_values: Optional[Sequence[int]] = None) -> "NewtonPoint":
        v = tuple(Fraction(x) for x in vec)
        if kappa_values is None:
            sums = datum.block_sums(v)
            if any(s.denominator != 1 for s in sums):
                raise ValueError("block sums not integral; pass kappa explicitly")
            kappa_values = tuple(int(s) for s in sums)
        return NewtonPoint(datum, v, KappaValue(datum, tuple(kappa_values)))

    def strings(self) -> tuple[str, ...]:
        return tuple(str(x) for x in self.nu)

    def __repr__(self) -> str:
        return "(" + ", ".join(self.strings()) + ")"


class NewtonData(NamedTuple):
    """Raw output of the Newton map iteration."""

    order: int
    translation: tuple[int, ...]
    nu: RatVec
    nu_bar: NewtonPoint


def newton_point(w: AffineElement, frob: Frobenius) -> NewtonData:
    """Iterate the affine action of w o sigma to the first pure
    translation t^lam; nu = lam/order, nu_bar its dominant
    representative minus the descriptor's reporting shift."""
    if w.datum != frob.datum:
        raise DimensionMismatch("element and twist live in different data")
    step = AffineMap(SignedMap(w.perm.images, (1,) * w.datum.n), w.trans).after(
        frob.affine_map()
    )
    acc, k = step, 1
    cap = 8 * step.linear.order()
    while not acc.linear.is_identity():
        acc = acc.after(step)
        k += 1
        if k > cap:
            raise InternalCheckFailed("Newton iteration failed to close up")
    nu = tuple(Fraction(c, k) for c in acc.shift)
    bar, _ = dominant_rep(w.datum, nu)
    shifted = tuple(a - b for a, b in zip(bar, frob.shift))
    point = NewtonPoint(w.datum, shifted, kappa(w))
    return NewtonData(k, acc.shift, nu, point)


def newton_vector(w: AffineElement, frob: Frobenius) -> RatVec:
    """Unsorted, unshifted Newton vector of w."""
    return newton_point(w, frob).nu


def dominant_rep(datum: GroupDatum, vec: Sequence) -> tuple[tuple, Permutation]:
    """Blockwise weakly decreasing representative and the minimal
    length permutation z with z(vec) = rep (stable on ties)."""
    vec = tuple(vec)
    images = [0] * datum.n
    rep = list(vec)
    for lo, hi in datum.block_ranges():
        idx = sorted(range(lo, hi + 1), key=lambda p: (-vec[p - 1], p))
        for slot, p in enumerate(idx):
            images[p - 1] = lo + slot
            rep[lo + slot - 1] = vec[p - 1]
    return tuple(rep), Permutation(images)


def diamond(mu: Sequence, frob_or_sigma0) -> RatVec:
    """sigma0-orbit average (1/N) sum sigma0^i(mu)."""
    sigma0 = frob_or_sigma0.sigma0 if isinstance(frob_or_sigma0, Frobenius) else frob_or_sigma0
    m = sigma0.map()
    n = len(m.pos)
    if len(mu) != n:
        raise DimensionMismatch("vector has wrong length")
    order = m.order()
    total = [Fraction(0)] * n
    cur = tuple(Fraction(x) for x in mu)
    for _ in range(order):
        total = [a + b for a, b in zip(total, cur)]
        cur = m.apply(cur)
    return tuple(x / order for x in total)


def dominance_leq(p1: NewtonPoint, p2: NewtonPoint) -> bool:
    """Dominance order at equal Kottwitz invariant: per GL block all
    partial sums compare with equality at the block end; per PGL block
    the centered comparison through fundamental weights."""
    if p1.datum != p2.datum:
        raise DimensionMismatch("different group data")
    if p1.kappa != p2.kappa:
        raise KappaMismatch(f"kappa {p1.kappa.values} vs {p2.kappa.values}")
    datum = p1.datum
    for b, (lo, hi) in enumerate(datum.block_ranges()):
        a = p1.nu[lo - 1 : hi]
        c = p2.nu[lo - 1 : hi]
        if datum.adjoint[b]:
            nb = datum.blocks[b]
            sa, sc = sum(a), sum(c)
            pa = pc = Fraction(0)
            for i in range(1, nb):
                pa += a[i - 1]
                pc += c[i - 1]
                if pa - Fraction(i, nb) * sa > pc - Fraction(i, nb) * sc:
                    return False
        else:
            pa = pc = Fraction(0)
            for i in range(len(a)):
                pa += a[i]
                pc += c[i]
                if pa > pc:
                    return False
            if pa != pc:
                return False
    return True
