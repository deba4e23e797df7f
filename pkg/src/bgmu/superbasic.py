"""Superbasic witnesses for GL_n: segment combinatorics, the Euclidean
recursion, and the peeling construction of an admissible element whose
Newton point is the maximal acceptable one.

The ingredients, all for coprime 0 < m < n:

* chi_{m,n}(i) = floor(im/n) - floor((i-1)m/n), a 0/1 vector of sum m;
* backward reading sequences a^j(k) = chi(j-k), whose strict
  lexicographic order is total and defines the ranking permutation
  epsilon with epsilon(chi) = varpi_{m,n} = e_1 + ... + e_m;
* the division step f(m,n) together with two segment templates per
  step, which rebuild chi_{m,n} from a single 0 or 1 seed and grade
  every subsegment of chi by a level;
* the peeling of theta = mu + chi into a sharp decomposition, emitting
  a strictly decreasing Bruhat chain from t^{eps(mu)} sigma_{m,n} down
  to eps t^theta x_c eps^{-1}, each step multiplication by one
  transposition and each verified by the Bruhat recursion.

The final witness is w = eps (t^theta x_c) eps^{-1} sigma_{m,n}^{-1};
its Newton point under Ad(sigma_{m,n}) is the slope sequence of the
upper convex hull of theta.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Union

from .acceptable import maximal_newton
from .errors import InternalCheckFailed, ParseError
from .newton import Frobenius, NewtonPoint, dominant_rep, kappa, newton_point
from .weyl import (
    AffineElement,
    GroupDatum,
    Permutation,
    bruhat_lt,
    format_element,
    superbasic_element,
)


# --- segments and polygons ---------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """Integer vector supported on an index interval [head, tail]."""

    head: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))

    @property
    def tail(self) -> int:
        return self.head + len(self.values) - 1

    @property
    def size(self) -> int:
        return len(self.values)

    @property
    def total(self) -> int:
        return sum(self.values)

    @property
    def average(self) -> Fraction:
        if not self.values:
            raise ValueError("empty segment has no average")
        return Fraction(self.total, self.size)

    def shifted(self, k: int) -> "Segment":
        """The k-shift: new(i) = old(i + k)."""
        return Segment(self.head - k, self.values)

    def join(self, other: "Segment") -> "Segment":
        if other.head != self.tail + 1:
            raise ValueError(
                f"segments [{self.head},{self.tail}] and"
                f" [{other.head},{other.tail}] are not adjacent"
            )
        return Segment(self.head, self.values + other.values)

    def restrict(self, i: int, j: int) -> "Segment":
        if not (self.head <= i and j <= self.tail and i <= j):
            raise ValueError(f"[{i},{j}] is not inside [{self.head},{self.tail}]")
        return Segment(i, self.values[i - self.head : j - self.head + 1])

    def same_type(self, other: "Segment") -> bool:
        return self.values == other.values

    def __repr__(self) -> str:
        return "(%s)@[%d,%d]" % (",".join(map(str, self.values)), self.head, self.tail)


def as_segment(eta: Union[Segment, Sequence[int]], head: int = 1) -> Segment:
    if isinstance(eta, Segment):
        return eta
    return Segment(head, tuple(eta))


@dataclass(frozen=True)
class PolygonData:
    """Upper convex hull of the running sums of a segment."""

    vertices: tuple[tuple[int, Fraction], ...]
    slopes: tuple[Fraction, ...]

    def hull_value(self, k: int) -> Fraction:
        """Hull height after the first k steps."""
        if not (0 <= k <= len(self.slopes)):
            raise ValueError(f"abscissa {k} outside 0..{len(self.slopes)}")
        return sum(self.slopes[:k], Fraction(0))


def polygon(eta: Union[Segment, Sequence[int]]) -> PolygonData:
    """Greedy sharp decomposition: repeatedly take the longest prefix
    of maximal average. The block averages, repeated blockwise, form
    the weakly decreasing slope sequence of the hull."""
    seg = as_segment(eta)
    rest = list(seg.values)
    x = seg.head - 1
    y = Fraction(0)
    vertices: list[tuple[int, Fraction]] = [(x, y)]
    slopes: list[Fraction] = []
    while rest:
        best_k, best_av, acc = 1, Fraction(rest[0]), 0
        for k in range(1, len(rest) + 1):
            acc += rest[k - 1]
            av = Fraction(acc, k)
            if av >= best_av:
                best_av, best_k = av, k
        slopes.extend([best_av] * best_k)
        x += best_k
        y += best_av * best_k
        vertices.append((x, y))
        rest = rest[best_k:]
    if slopes != sorted(slopes, reverse=True):
        raise InternalCheckFailed(f"hull slopes of {seg!r} are not decreasing")
    return PolygonData(tuple(vertices), tuple(slopes))


# --- chi, reading sequences, epsilon ----------------------------------------

def chi(m: int, n: int) -> tuple[int, ...]:
    """chi_{m,n}(i) = floor(im/n) - floor((i-1)m/n), for coprime m < n.

    >>> chi(5, 8)
    (0, 1, 0, 1, 1, 0, 1, 1)
    """
    if not (0 < m < n) or gcd(m, n) != 1:
        raise ValueError(f"need coprime 0 < m < n, got ({m}, {n})")
    return tuple((i * m) // n - ((i - 1) * m) // n for i in range(1, n + 1))


def reading_sequence(chi_vals: Sequence[int], j: int) -> tuple[int, ...]:
    """a^j(k) = chi(j - k) over one full period, indices mod n."""
    r = len(chi_vals)
    return tuple(chi_vals[(j - k - 1) % r] for k in range(r))


def a_sequence_less(chi_vals: Sequence[int], i: int, j: int) -> bool:
    """Strict lexicographic comparison a^i < a^j."""
    return reading_sequence(chi_vals, i) < reading_sequence(chi_vals, j)


def epsilon(chi_vals: Sequence[int]) -> Permutation:
    """The ranking permutation: eps(i) < eps(j) iff a^i > a^j.

    >>> epsilon(chi(5, 8)).images
    (6, 3, 8, 5, 2, 7, 4, 1)
    """
    n = len(chi_vals)
    keyed = sorted(range(1, n + 1), key=lambda j: reading_sequence(chi_vals, j),
                   reverse=True)
    for a, b in zip(keyed, keyed[1:]):
        if reading_sequence(chi_vals, a) == reading_sequence(chi_vals, b):
            raise ValueError("reading sequences tie; entries not coprime")
    images = [0] * n
    for rank, j in enumerate(keyed, start=1):
        images[j - 1] = rank
    return Permutation(images)


# --- the Euclidean recursion -------------------------------------------------

def division_step(m: int, n: int) -> tuple[int, int]:
    """One step of the recursion on coprime pairs; the second
    coordinate strictly decreases, ending at (1,1) or (0,1)."""
    if n >= 2 * m:
        return (m * (n // m + 1) - n, m)
    return (n - (n - m) * (n // (n - m)), n - m)


def _templates(m: int, n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(one, zero) replacement segments for expanding chi of
    division_step(m, n) into chi_{m,n}."""
    if n >= 2 * m:
        q = n // m
        return ((0,) * (q - 1) + (1,), (0,) * q + (1,))
    q = n // (n - m)
    return ((0,) + (1,) * q, (0,) + (1,) * (q - 1))


@dataclass(frozen=True)
class EuclideanChain:
    """Full recursion data for one coprime pair.

    ``chis[h]`` is chi at level h; ``templates[h]`` expands level h+1
    into level h; ``ends0[h]`` holds the level-h block boundaries in
    level-0 coordinates; ``parents[h]`` maps a level-h entry to the
    level h+1 entry it came from; ``parent_ends[h]`` are the level-one
    block boundaries of ``chis[h]`` in level-h coordinates.
    """

    m: int
    n: int
    pairs: tuple[tuple[int, int], ...]
    chis: tuple[tuple[int, ...], ...]
    templates: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    parents: tuple[tuple[int, ...], ...]
    parent_ends: tuple[tuple[int, ...], ...]
    ends0: tuple[tuple[int, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.pairs) - 1

    def expand(self, level: int, values: Sequence[int]) -> tuple[int, ...]:
        """Apply the maps from the given level all the way down to
        level 0 (phi applied deepest-first)."""
        out = tuple(values)
        for h in range(level - 1, -1, -1):
            one, zero = self.templates[h]
            out = tuple(
                x for v in out for x in (one if v == 1 else zero)
            )
        return out


def euclid_chain(m: int, n: int) -> EuclideanChain:
    if n == 1:
        if m not in (0, 1):
            raise ValueError("terminal pairs are (1,1) and (0,1)")
        seed = (m,)
        return EuclideanChain(m, n, ((m, 1),), (seed,), (), (), (), ((1,),))
    chi0 = chi(m, n)
    pairs = [(m, n)]
    chis = [chi0]
    templates: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    parents: list[tuple[int, ...]] = []
    parent_ends: list[tuple[int, ...]] = []
    while pairs[-1][1] != 1:
        cm, cn = pairs[-1]
        nm, nn = division_step(cm, cn)
        one, zero = _templates(cm, cn)
        nxt = (nm,) if nn == 1 else chi(nm, nn)
        expanded: list[int] = []
        par: list[int] = []
        ends: list[int] = []
        for idx, v in enumerate(nxt, start=1):
            t = one if v == 1 else zero
            expanded.extend(t)
            par.extend([idx] * len(t))
            ends.append(len(expanded))
        if tuple(expanded) != chis[-1]:
            raise InternalCheckFailed(
                f"template expansion of chi{(nm, nn)} does not rebuild chi{(cm, cn)}"
            )
        pairs.append((nm, nn))
        chis.append(nxt)
        templates.append((one, zero))
        parents.append(tuple(par))
        parent_ends.append(tuple(ends))
    # block boundaries of every level in level-0 coordinates
    ends0: list[tuple[int, ...]] = [tuple(range(1, n + 1))]
    for h in range(len(templates)):
        ends0.append(tuple(ends0[h][e - 1] for e in parent_ends[h]))
    chain = EuclideanChain(
        m, n, tuple(pairs), tuple(chis), tuple(templates),
        tuple(parents), tuple(parent_ends), tuple(ends0),
    )
    for h in range(1, len(pairs)):
        if chain.expand(h, chain.chis[h]) != chi0:
            raise InternalCheckFailed(f"level {h} reconstruction failed for ({m},{n})")
    return chain


@dataclass(frozen=True)
class LevelSplit:
    """Result of grading a subsegment of chi by the recursion."""

    level: int
    iota: Segment
    inside_elementary: bool
    elementary_ends: tuple[int, ...]


def level_decompose(chain: EuclideanChain, gamma: Union[Segment, tuple[int, int]]) -> LevelSplit:
    """Maximal level h with gamma the image of a subsegment iota of
    chi at level h, and whether iota sits inside one elementary block."""
    if isinstance(gamma, Segment):
        a, b = gamma.head, gamma.tail
    else:
        a, b = gamma
    if not (1 <= a <= b <= chain.n):
        raise ParseError(f"segment [{a},{b}] is not aligned with positions 1..{chain.n}")
    level = 0
    for h in range(chain.depth, -1, -1):
        ends = chain.ends0[h]
        if (a - 1 == 0 or (a - 1) in ends) and b in ends:
            level = h
            break
    ends = chain.ends0[level]
    i1 = sum(1 for e in ends if e < a) + 1
    j1 = sum(1 for e in ends if e <= b)
    iota = Segment(i1, chain.chis[level][i1 - 1 : j1])
    if level == chain.depth:
        inside = True
        elem_ends: tuple[int, ...] = ()
    else:
        par = chain.parents[level]
        inside = par[i1 - 1] == par[j1 - 1]
        elem_ends = chain.parent_ends[level]
    return LevelSplit(level, iota, inside, elem_ends)


# --- the peeling construction ------------------------------------------------

def _interval_cycle(n: int, points: Sequence[int]) -> Permutation:
    if len(points) < 2:
        return Permutation.identity(n)
    return Permutation.from_cycles(n, [tuple(points)])


def _segment_cycle(n: int, head: int, tail: int) -> Permutation:
    """x_eta = cyc(head, head+1, ..., tail)."""
    return _interval_cycle(n, range(head, tail + 1))


@dataclass(frozen=True)
class PeelStep:
    block: int
    j: int
    level: int
    iota: Segment
    case: str  # "I" or "II"
    zeta: Optional[Segment]
    gamma: Optional[Segment]
    xi: Optional[Segment]


@dataclass(frozen=True)
class ChainStep:
    block: int
    kind: str  # "zeta" | "xi" | "final"
    cycle: tuple[int, int]
    cycle_conjugated: tuple[int, int]
    before: AffineElement
    after: AffineElement

    @property
    def verified(self) -> bool:
        return True  # construction raises before building unverified steps


@dataclass(frozen=True)
class PeelCertificate:
    m: int
    n: int
    mu: tuple[int, ...]
    chi: tuple[int, ...]
    theta: tuple[int, ...]
    epsilon: Permutation
    breakpoints: tuple[int, ...]
    steps: tuple[PeelStep, ...]
    decomposition: tuple[Segment, ...]
    slopes: tuple[Fraction, ...]
    chain: tuple[ChainStep, ...]
    start: AffineElement
    end: AffineElement

    def to_json_dict(self) -> dict:
        return {
            "schema": "bgmu/1",
            "m": self.m,
            "n": self.n,
            "mu": list(self.mu),
            "chi": list(self.chi),
            "theta": list(self.theta),
            "epsilon": repr(self.epsilon),
            "breakpoints": list(self.breakpoints),
            "decomposition": [
                {"head": s.head, "tail": s.tail, "values": list(s.values)}
                for s in self.decomposition
            ],
            "slopes": [str(s) for s in self.slopes],
            "chain": [
                {
                    "block": c.block,
                    "kind": c.kind,
                    "cycle": list(c.cycle),
                    "cycle_conjugated": list(c.cycle_conjugated),
                    "before": format_element(c.before),
                    "after": format_element(c.after),
                    "length_before": c.before.length(),
                    "length_after": c.after.length(),
                    "verified": c.verified,
                }
                for c in self.chain
            ],
            "start": format_element(self.start),
            "end": format_element(self.end),
        }


def sharp_peel(mu: Sequence[int], m: int, n: int) -> PeelCertificate:
    """Peel theta = mu + chi_{m,n} block by block into a sharp
    decomposition, certifying each emitted transposition as a strict
    Bruhat descent after conjugation by epsilon."""
    mu = tuple(mu)
    if len(mu) != n:
        raise ValueError(f"mu must have length {n}")
    datum = GroupDatum.gl(n)
    if not datum.is_dominant(mu):
        raise ValueError(f"mu {mu} is not dominant")
    chi0 = chi(m, n)
    eps = epsilon(chi0)
    theta = tuple(a + b for a, b in zip(mu, chi0))
    chain_data = euclid_chain(m, n)
    breaks = [j for j in range(1, n) if mu[j - 1] != mu[j]]
    bounds = [0] + breaks + [n]
    sigma = superbasic_element(m, n)
    eps_elt = AffineElement.from_permutation(datum, eps)
    eps_inv = eps_elt.inverse()
    t_theta = AffineElement.translation(datum, theta)

    def conj(w: AffineElement) -> AffineElement:
        return eps_elt * w * eps_inv

    def closed_form(i: int, pieces_before: list[Segment], zetas: list[Segment],
                    xis: list[Segment], cur: Optional[tuple[int, int]]) -> AffineElement:
        """z = t^theta y_{i-1} x^j v with v the cycle through the
        current gamma interval and the tail (b_i+1 .. n)."""
        y = Permutation.identity(n)
        for s in pieces_before:
            y = y * _segment_cycle(n, s.head, s.tail)
        for s in zetas:
            y = y * _segment_cycle(n, s.head, s.tail)
        for s in reversed(xis):
            y = y * _segment_cycle(n, s.head, s.tail)
        tail_from = bounds[i] if i < len(bounds) else n
        tail = list(range(tail_from + 1, n + 1))
        points = (list(range(cur[0], cur[1] + 1)) if cur else []) + tail
        v = _interval_cycle(n, points)
        return t_theta * AffineElement.from_permutation(datum, y * v)

    start = conj(closed_form(1, [], [], [], (1, bounds[1])))
    expected_start = AffineElement.translation(datum, eps.act(mu)) * sigma
    if start != expected_start:
        raise InternalCheckFailed("chain start is not t^{eps(mu)} sigma")

    chain_steps: list[ChainStep] = []
    peel_steps: list[PeelStep] = []
    decomposition: list[Segment] = []
    current = start

    def emit(block_i: int, kind: str, a: int, b: int) -> None:
        nonlocal current
        cyc_conj = (eps(a), eps(b))
        nxt = current * AffineElement.from_permutation(
            datum, Permutation.from_cycles(n, [cyc_conj])
        )
        if not bruhat_lt(nxt, current):
            raise InternalCheckFailed(
                f"chain step {kind} cyc{(a, b)} is not a strict Bruhat descent"
                f" at {format_element(current)}"
            )
        chain_steps.append(ChainStep(block_i, kind, (a, b), cyc_conj, current, nxt))
        current = nxt

    finished_pieces: list[Segment] = []
    for i in range(1, len(bounds)):
        lo, hi = bounds[i - 1] + 1, bounds[i]
        zetas: list[Segment] = []
        xis: list[Segment] = []
        cur: Optional[tuple[int, int]] = (lo, hi)
        gamma_final: Optional[Segment] = None
        j = 0
        while True:
            if cur is None:
                break
            split = level_decompose(chain_data, cur)
            h, iota = split.level, split.iota
            if split.inside_elementary:
                gamma_final = Segment(cur[0], theta[cur[0] - 1 : cur[1]])
                peel_steps.append(
                    PeelStep(i, j, h, iota, "II", None, gamma_final, None)
                )
                break
            # case I: split iota along the level-one blocks of level h
            elem_ends = split.elementary_ends
            ends0 = chain_data.ends0[h]

            def to_level0(p: int, q: int) -> tuple[int, int]:
                start0 = 1 if p == 1 else ends0[p - 2] + 1
                return (start0, ends0[q - 1])

            i1, j1 = iota.head, iota.tail
            par = chain_data.parents[h]
            p1, p2 = par[i1 - 1], par[j1 - 1]
            s1 = 1 if p1 == 1 else elem_ends[p1 - 2] + 1
            e1 = elem_ends[p1 - 1]
            s2 = 1 if p2 == 1 else elem_ends[p2 - 2] + 1
            e2 = elem_ends[p2 - 1]
            zeta_rng = (i1, e1) if i1 > s1 else None
            xi_rng = (s2, j1) if j1 < e2 else None
            mid_from = i1 if zeta_rng is None else e1 + 1
            mid_to = j1 if xi_rng is None else s2 - 1
            middle_rng = (mid_from, mid_to) if mid_from <= mid_to else None
            if middle_rng is None:
                # both partial blocks meet: peel only the head piece and
                # keep the rest as the next gamma (it is then case II)
                xi_rng = None
                middle_rng = (s2, j1)

            def theta_seg(rng0: tuple[int, int]) -> Segment:
                return Segment(rng0[0], theta[rng0[0] - 1 : rng0[1]])

            zeta = theta_seg(to_level0(*zeta_rng)) if zeta_rng else None
            gamma_new_rng = to_level0(*middle_rng)
            gamma_new = theta_seg(gamma_new_rng)
            xi = theta_seg(to_level0(*xi_rng)) if xi_rng else None
            peel_steps.append(PeelStep(i, j, h, iota, "I", zeta, gamma_new, xi))
            if zeta is not None:
                emit(i, "zeta", n, zeta.tail)
                zetas.append(zeta)
            if xi is not None:
                emit(i, "xi", xi.head - 1, xi.tail)
                xis.append(xi)
            cur = gamma_new_rng
            j += 1
            check = conj(closed_form(i, finished_pieces, zetas, xis, cur))
            if check != current:
                raise InternalCheckFailed(
                    f"chain element disagrees with closed form at block {i}, step {j}"
                )
        if gamma_final is not None and gamma_final.tail != n:
            emit(i, "final", gamma_final.tail, n)
        block_pieces = (
            zetas + ([gamma_final] if gamma_final is not None else []) + list(reversed(xis))
        )
        pos = lo
        for s in block_pieces:
            if s.head != pos:
                raise InternalCheckFailed("decomposition pieces are not contiguous")
            pos = s.tail + 1
        if pos != hi + 1:
            raise InternalCheckFailed("decomposition does not cover the block")
        finished_pieces.extend(block_pieces)
        decomposition.extend(block_pieces)
        check = conj(
            closed_form(
                i + 1,
                finished_pieces,
                [],
                [],
                (bounds[i] + 1, bounds[i + 1]) if i + 1 < len(bounds) else None,
            )
        )
        if check != current:
            raise InternalCheckFailed(f"block {i} hand-off disagrees with closed form")

    slopes = tuple(
        itertools.chain.from_iterable([s.average] * s.size for s in decomposition)
    )
    hull = polygon(Segment(1, theta))
    if slopes != hull.slopes:
        raise InternalCheckFailed(
            f"peeled decomposition slopes {slopes} differ from hull {hull.slopes}"
        )
    return PeelCertificate(
        m, n, mu, chi0, theta, eps, tuple(breaks), tuple(peel_steps),
        tuple(decomposition), slopes, tuple(chain_steps), start, current,
    )


@dataclass(frozen=True)
class SuperbasicWitness:
    nu: NewtonPoint
    w: AffineElement
    x: Permutation
    certificate: PeelCertificate


def superbasic_witness(mu: Sequence[int], m: int, n: int) -> SuperbasicWitness:
    """Admissible witness for the twist Ad(sigma_{m,n}): an element
    w < t^{eps(mu)} (equality only for central mu) whose Newton point
    is the hull slope sequence of mu + chi_{m,n}."""
    cert = sharp_peel(mu, m, n)
    datum = GroupDatum.gl(n)
    sigma = superbasic_element(m, n)
    w = cert.end * sigma.inverse()
    frob = Frobenius.superbasic(m, n)
    eps = cert.epsilon
    bound = AffineElement.translation(datum, eps.act(cert.mu))
    if cert.chain:
        if not bruhat_lt(w, bound):
            raise InternalCheckFailed("witness is not strictly below t^{eps(mu)}")
    elif w != bound:
        raise InternalCheckFailed("empty chain must end at t^{eps(mu)} itself")
    nd = newton_point(w, frob.with_shift((Fraction(0),) * n))
    bar, _ = dominant_rep(datum, nd.nu)
    if bar != cert.slopes:
        raise InternalCheckFailed(
            f"witness Newton point {bar} is not the hull slope sequence {cert.slopes}"
        )
    normalized = tuple(a - Fraction(m, n) for a in cert.slopes)
    target = maximal_newton(cert.mu, frob)
    if normalized != target.nu:
        raise InternalCheckFailed(
            f"normalized witness point {normalized} differs from the maximal point {target.nu}"
        )
    point = NewtonPoint(datum, cert.slopes, kappa(w))
    return SuperbasicWitness(point, w, eps, cert)


if __name__ == "__main__":
    import doctest

    doctest.testmod()
