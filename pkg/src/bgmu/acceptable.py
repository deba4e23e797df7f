"""The acceptable set B(W, mu, sigma) and the admissible set Adm(mu).

Membership of a dominant sigma0-invariant vector v is an integrality
condition: for every sigma0-orbit c of simple roots moved by v,
<omega_c, mu_diamond + lam_diamond - v> must be an integer. The unique
maximal point is built from per-orbit bounds through a fixed-point
active-set loop that, in type A, amounts to an upper convex hull of
tent functions; both directions are cross-checked against brute-force
enumeration in the test suite.

All comparisons against mu_diamond go through fundamental-weight
pairings, which kill block centers; the central coordinates of genuine
Newton points are pinned separately by the reference point nu_{t^mu}.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import CriterionFailed, GuardExceeded, InternalCheckFailed
from .newton import (
    Frobenius,
    NewtonPoint,
    Node,
    RatVec,
    alpha_pairing,
    coroot_vector,
    diamond,
    dominant_rep,
    kappa,
    newton_point,
    omega_pairing,
    simple_nodes,
)
from .weyl import (
    AffineElement,
    GroupDatum,
    Permutation,
    bruhat_leq,
    bruhat_lower_set,
)

DEFAULT_ENUM_GUARD = 8
DEFAULT_ADM_GUARD_N = 5
DEFAULT_ADM_GUARD_SPREAD = 2


def guard_limit(default: int) -> int:
    """Enumeration guards, overridable through BGMU_GUARD."""
    env = os.environ.get("BGMU_GUARD")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return default


@dataclass(frozen=True)
class ParabolicDatum:
    """Support split of a dominant vector: J holds the simple roots
    fixing it, I the rest; both are sigma0-stable for invariant v."""

    datum: GroupDatum
    I_set: frozenset
    J_set: frozenset

    @staticmethod
    def from_vector(datum: GroupDatum, vec: Sequence) -> "ParabolicDatum":
        nodes = simple_nodes(datum)
        J = frozenset(nd for nd in nodes if alpha_pairing(datum, nd, vec) == 0)
        return ParabolicDatum(datum, frozenset(nodes) - J, J)


def support_nodes(datum: GroupDatum, vec: Sequence) -> frozenset:
    """I(v): simple roots with <alpha_i, v> != 0."""
    return ParabolicDatum.from_vector(datum, vec).I_set


def omega_orbit_pairing(datum: GroupDatum, orbit: Sequence[Node], vec: Sequence) -> Fraction:
    return sum((omega_pairing(datum, nd, vec) for nd in orbit), Fraction(0))


def adjoint_leq(datum: GroupDatum, v: Sequence, w: Sequence) -> bool:
    """v <= w modulo block centers: all fundamental pairings compare."""
    return all(
        omega_pairing(datum, nd, v) <= omega_pairing(datum, nd, w)
        for nd in simple_nodes(datum)
    )


def adjoint_eq(datum: GroupDatum, v: Sequence, w: Sequence) -> bool:
    return all(
        omega_pairing(datum, nd, v) == omega_pairing(datum, nd, w)
        for nd in simple_nodes(datum)
    )


def nu_reference(mu: Sequence[int], frob: Frobenius) -> RatVec:
    """Newton vector of t^mu itself; every w in t^mu W_a has a Newton
    vector with the same per-block coordinate sums."""
    return newton_point(AffineElement.translation(frob.datum, mu), frob).nu


def _central_profile(datum: GroupDatum, vec: Sequence) -> tuple:
    return tuple(Fraction(s) for s in datum.block_sums(vec))


def _vector_through_heights(
    datum: GroupDatum, heights: dict[Node, Fraction], sums: Sequence[Fraction]
) -> RatVec:
    """Rebuild a vector from centered heights <omega_j, v> prescribed at
    the given nodes (linear interpolation elsewhere) and block sums."""
    out: list[Fraction] = []
    for b, (lo, hi) in enumerate(datum.block_ranges()):
        nb = datum.blocks[b]
        total = Fraction(sums[b])
        knots = [(0, Fraction(0))]
        for i in range(1, nb):
            nd = (b, i)
            if nd in heights:
                knots.append((i, heights[nd] + Fraction(i, nb) * total))
        knots.append((nb, total))
        partial = [Fraction(0)] * (nb + 1)
        for (i0, p0), (i1, p1) in zip(knots, knots[1:]):
            for i in range(i0, i1 + 1):
                partial[i] = p0 + (p1 - p0) * Fraction(i - i0, i1 - i0)
        out.extend(partial[i] - partial[i - 1] for i in range(1, nb + 1))
    return tuple(out)


# --- the integrality criterion and its witness ------------------------------

def newton_criterion(v: Sequence, mu: Sequence[int], frob: Frobenius) -> bool:
    """Whether v occurs as the Newton vector of some w in t^mu W_a."""
    datum = frob.datum
    v = tuple(Fraction(x) for x in v)
    if not datum.is_dominant(v):
        raise ValueError("v must be dominant per block")
    if not frob.sigma0.is_invariant(v):
        raise ValueError("v must be sigma0-invariant")
    ref = nu_reference(mu, frob)
    if _central_profile(datum, v) != _central_profile(datum, ref):
        raise ValueError(
            f"central coordinates {datum.block_sums(v)} do not match the"
            f" coset profile {datum.block_sums(ref)}"
        )
    mu_dia = diamond(mu, frob)
    lam_dia = diamond(frob.lam, frob)
    I = support_nodes(datum, v)
    for orbit in frob.sigma0.node_orbits():
        if orbit[0] not in I:
            continue
        val = omega_orbit_pairing(
            datum, orbit, tuple(a + b - c for a, b, c in zip(mu_dia, lam_dia, v))
        )
        if val.denominator != 1:
            return False
    return True


def newton_witness(v: Sequence, mu: Sequence[int], frob: Frobenius) -> AffineElement:
    """Construct w = t^beta x tau^{-1} in t^mu W_a with Newton vector v.

    x is the twisted Coxeter element of the stabilizer of v (one
    representative per sigma0-orbit of J(v), ascending), and beta
    subtracts the integrality defects along one coroot per orbit of
    I(v). The result is checked against the Newton map before return.
    """
    datum = frob.datum
    v = tuple(Fraction(x) for x in v)
    if not newton_criterion(v, mu, frob):
        raise CriterionFailed(f"{v} fails the integrality criterion")
    mu_dia = diamond(mu, frob)
    lam_dia = diamond(frob.lam, frob)
    I = support_nodes(datum, v)
    beta = [a + b for a, b in zip(mu, frob.lam)]
    for orbit in frob.sigma0.node_orbits():
        if orbit[0] not in I:
            continue
        a_c = omega_orbit_pairing(
            datum, orbit, tuple(a + b - c for a, b, c in zip(mu_dia, lam_dia, v))
        )
        if a_c.denominator != 1:
            raise InternalCheckFailed("criterion passed but defect non-integral")
        cor = coroot_vector(datum, min(orbit))
        beta = [x - int(a_c) * y for x, y in zip(beta, cor)]
    x = Permutation.identity(datum.n)
    for orbit in frob.sigma0.node_orbits():
        if orbit[0] in I:
            continue
        b, i = min(orbit)
        lo, _ = datum.block_ranges()[b]
        p = lo - 1 + i
        x = x * Permutation.from_cycles(datum.n, [(p, p + 1)])
    w = (
        AffineElement.translation(datum, beta)
        * AffineElement.from_permutation(datum, x)
        * frob.tau.inverse()
    )
    got = newton_point(w, frob)
    bar, _ = dominant_rep(datum, v)
    got_bar, _ = dominant_rep(datum, got.nu)
    if got_bar != bar:
        raise InternalCheckFailed(
            f"witness Newton vector {got.nu} does not match target {v}"
        )
    if kappa(w) != kappa(AffineElement.translation(datum, mu)):
        raise InternalCheckFailed("witness leaves the translation coset")
    return w


# --- the maximal point -------------------------------------------------------

@dataclass(frozen=True)
class MaximalSolverState:
    """Active-set solve for the maximal point: per-node tent heights
    e, the reduced sigma0-stable active support, and the solution."""

    datum: GroupDatum
    targets: dict
    active: frozenset
    nu_raw: RatVec
    iterations: int


def maximal_newton_state(mu: Sequence[int], frob: Frobenius) -> MaximalSolverState:
    datum = frob.datum
    mu_dia = diamond(mu, frob)
    lam_dia = diamond(frob.lam, frob)
    both = tuple(a + b for a, b in zip(mu_dia, lam_dia))
    targets: dict[Node, Fraction] = {}
    for orbit in frob.sigma0.node_orbits():
        coset_rep = omega_orbit_pairing(datum, orbit, both)
        upper = omega_orbit_pairing(datum, orbit, mu_dia)
        best = coset_rep + math.floor(upper - coset_rep)
        q = max(best, Fraction(0))
        for nd in orbit:
            targets[nd] = q / len(orbit)

    ref = nu_reference(mu, frob)
    sums = _central_profile(datum, ref)
    orbit_of = {nd: orbit for orbit in frob.sigma0.node_orbits() for nd in orbit}
    active = frozenset(nd for nd, t in targets.items() if t > 0)
    iterations = 0
    cap = 4 * datum.n * datum.n + 8
    while True:
        iterations += 1
        if iterations > cap:
            raise InternalCheckFailed("active-set loop failed to converge")
        nu = _vector_through_heights(
            datum, {nd: targets[nd] for nd in active}, sums
        )
        drops = {nd for nd in active if alpha_pairing(datum, nd, nu) < 0}
        if drops:
            active = active - frozenset().union(*(frozenset(orbit_of[nd]) for nd in drops))
            continue
        adds = {
            nd
            for nd in targets
            if nd not in active and omega_pairing(datum, nd, nu) < targets[nd]
        }
        if adds:
            active = active | frozenset().union(*(frozenset(orbit_of[nd]) for nd in adds))
            continue
        break
    # discard knots the hull passes through without a vertex, so the
    # active set is a reduced set with the same majorant
    active = frozenset(nd for nd in active if alpha_pairing(datum, nd, nu) > 0)
    nu = _vector_through_heights(datum, {nd: targets[nd] for nd in active}, sums)

    if not datum.is_dominant(nu):
        raise InternalCheckFailed("maximal point is not dominant")
    if not frob.sigma0.is_invariant(nu):
        raise InternalCheckFailed("maximal point is not sigma0-invariant")
    if not adjoint_leq(datum, nu, mu_dia):
        raise InternalCheckFailed("maximal point exceeds mu_diamond")
    for nd, t in targets.items():
        if omega_pairing(datum, nd, nu) < t:
            raise InternalCheckFailed("maximal point drops below a tent")
    if support_nodes(datum, nu) != active:
        raise InternalCheckFailed("support of the maximal point disagrees")
    if not newton_criterion(nu, mu, frob):
        raise InternalCheckFailed("maximal point fails the integrality criterion")
    return MaximalSolverState(datum, targets, active, nu, iterations)


def maximal_newton(mu: Sequence[int], frob: Frobenius) -> NewtonPoint:
    """The unique maximal acceptable Newton point (raw central scale,
    reporting shift applied)."""
    state = maximal_newton_state(mu, frob)
    shifted = tuple(a - b for a, b in zip(state.nu_raw, frob.shift))
    return NewtonPoint(
        frob.datum, shifted, kappa(AffineElement.translation(frob.datum, mu))
    )


def mu_diamond_acceptable(mu: Sequence[int], frob: Frobenius) -> bool:
    """Whether mu_diamond itself is an acceptable point: the defect
    pairings <omega_c, lam_diamond> are integers on the support."""
    datum = frob.datum
    mu_dia = diamond(mu, frob)
    lam_dia = diamond(frob.lam, frob)
    I = support_nodes(datum, mu_dia)
    for orbit in frob.sigma0.node_orbits():
        if orbit[0] not in I:
            continue
        if omega_orbit_pairing(datum, orbit, lam_dia).denominator != 1:
            return False
    return True


# --- enumeration -------------------------------------------------------------

@dataclass(frozen=True)
class AcceptableSet:
    """All acceptable points, their dominance covers and the maximum.

    ``points`` carry the reporting shift; ``raw`` are the unshifted
    vectors actually produced by the Newton map.
    """

    datum: GroupDatum
    points: tuple[NewtonPoint, ...]
    raw: tuple[RatVec, ...]
    hasse: tuple[tuple[int, int], ...]
    maximum: int

    def to_json_dict(self) -> dict:
        return {
            "schema": "bgmu/1",
            "points": [list(p.strings()) for p in self.points],
            "hasse": [list(pair) for pair in self.hasse],
            "max": self.maximum,
        }


def enumerate_acceptable(
    mu: Sequence[int], frob: Frobenius, guard: Optional[int] = None
) -> AcceptableSet:
    """Every acceptable point, built support by support: on a stable
    support I, the orbit pairings range over a coset of Z intersected
    with [0, <omega_c, mu_diamond>]; each choice determines one
    candidate vector, kept when it is dominant with support exactly I
    and below mu_diamond."""
    datum = frob.datum
    limit = guard_limit(DEFAULT_ENUM_GUARD if guard is None else guard)
    if datum.n > limit:
        raise GuardExceeded(f"enumeration guard: n={datum.n} > {limit}")
    mu_dia = diamond(mu, frob)
    lam_dia = diamond(frob.lam, frob)
    both = tuple(a + b for a, b in zip(mu_dia, lam_dia))
    ref = nu_reference(mu, frob)
    sums = _central_profile(datum, ref)
    orbits = frob.sigma0.node_orbits()

    found: set[RatVec] = set()
    for mask in range(1 << len(orbits)):
        chosen = [orbits[k] for k in range(len(orbits)) if mask >> k & 1]
        support = frozenset(nd for orbit in chosen for nd in orbit)
        ranges = []
        feasible = True
        for orbit in chosen:
            coset_rep = omega_orbit_pairing(datum, orbit, both)
            upper = omega_orbit_pairing(datum, orbit, mu_dia)
            lo_k = math.ceil(Fraction(0) - coset_rep)
            hi_k = math.floor(upper - coset_rep)
            if lo_k > hi_k:
                feasible = False
                break
            ranges.append([coset_rep + k for k in range(lo_k, hi_k + 1)])
        if not feasible:
            continue
        for combo in itertools.product(*ranges):
            heights = {}
            for orbit, q in zip(chosen, combo):
                for nd in orbit:
                    heights[nd] = q / len(orbit)
            v = _vector_through_heights(datum, heights, sums)
            if not datum.is_dominant(v):
                continue
            if support_nodes(datum, v) != support:
                continue
            if not frob.sigma0.is_invariant(v):
                continue
            if not adjoint_leq(datum, v, mu_dia):
                continue
            found.add(v)

    raw = tuple(sorted(found, reverse=True))
    kap = kappa(AffineElement.translation(datum, mu))
    points = tuple(
        NewtonPoint(datum, tuple(a - b for a, b in zip(v, frob.shift)), kap)
        for v in raw
    )
    leq = [
        [adjoint_leq(datum, raw[i], raw[j]) for j in range(len(raw))]
        for i in range(len(raw))
    ]
    maxima = [
        i
        for i in range(len(raw))
        if all(leq[j][i] for j in range(len(raw)))
    ]
    if len(maxima) != 1:
        raise InternalCheckFailed(f"acceptable set has {len(maxima)} maxima")
    hasse = []
    for i in range(len(raw)):
        for j in range(len(raw)):
            if i == j or not leq[i][j]:
                continue
            if any(
                k not in (i, j) and leq[i][k] and leq[k][j] for k in range(len(raw))
            ):
                continue
            hasse.append((i, j))
    result = AcceptableSet(datum, points, raw, tuple(sorted(hasse)), maxima[0])
    state_nu = maximal_newton_state(mu, frob).nu_raw
    if raw and raw[result.maximum] != state_nu:
        raise InternalCheckFailed(
            f"enumerated maximum {raw[result.maximum]} differs from solver {state_nu}"
        )
    return result


# --- admissible set ----------------------------------------------------------

def _orbit_points(datum: GroupDatum, mu: Sequence[int]) -> list[tuple[int, ...]]:
    """Distinct W_0-orbit points of mu, descending lexicographically."""
    per_block = []
    for lo, hi in datum.block_ranges():
        part = tuple(mu[lo - 1 : hi])
        per_block.append(sorted(set(itertools.permutations(part)), reverse=True))
    out = [
        tuple(x for block in combo for x in block)
        for combo in itertools.product(*per_block)
    ]
    out.sort(reverse=True)
    return out


def _stable_perm_to(datum: GroupDatum, mu: Sequence[int], target: Sequence[int]) -> Permutation:
    """Minimal-length x with x(mu) = target (stable matching per value)."""
    images = [0] * datum.n
    for lo, hi in datum.block_ranges():
        slots: dict[int, list[int]] = {}
        for p in range(lo, hi + 1):
            slots.setdefault(target[p - 1], []).append(p)
        for p in range(lo, hi + 1):
            images[p - 1] = slots[mu[p - 1]].pop(0)
    return Permutation(images)


def adm_member(
    w: AffineElement, mu: Sequence[int]
) -> tuple[bool, Optional[Permutation]]:
    """Test w <= t^{x(mu)} over orbit representatives; returns a
    witness x on success."""
    datum = w.datum
    for point in _orbit_points(datum, mu):
        if bruhat_leq(w, AffineElement.translation(datum, point)):
            return True, _stable_perm_to(datum, mu, point)
    return False, None


def adm_enumerate(
    mu: Sequence[int],
    datum: Optional[GroupDatum] = None,
    guard_n: Optional[int] = None,
    guard_spread: int = DEFAULT_ADM_GUARD_SPREAD,
) -> tuple[AffineElement, ...]:
    """The union of the lower Bruhat intervals of all t^{x(mu)}."""
    if datum is None:
        datum = GroupDatum((len(mu),))
    limit = guard_limit(DEFAULT_ADM_GUARD_N if guard_n is None else guard_n)
    if datum.n > limit:
        raise GuardExceeded(f"admissible-set guard: n={datum.n} > {limit}")
    for lo, hi in datum.block_ranges():
        part = mu[lo - 1 : hi]
        if part and max(part) - min(part) > guard_spread:
            raise GuardExceeded(
                f"admissible-set guard: entry spread exceeds {guard_spread}"
            )
    out: set[AffineElement] = set()
    for point in _orbit_points(datum, mu):
        out |= bruhat_lower_set(AffineElement.translation(datum, point))
    return tuple(
        sorted(out, key=lambda e: (e.length(), e.trans, e.perm.images))
    )
