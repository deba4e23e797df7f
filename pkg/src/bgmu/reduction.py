"""Reductions composing the full solver.

A problem (datum, mu, twist) is reduced in a fixed order: adjoint
bookkeeping, conjugation by a length-zero element to put the twist in
the last factor of each block orbit, splitting a transitive orbit to
its last factor, then parabolic descent along the stabilizer of a
generic fixed direction until the residual twist is superbasic on a
single GL factor. Every step records enough data to lift a witness
back; every lift re-verifies with the Newton map and the Bruhat order.

The brute-force strategy takes the maximum over the Newton points of
the admissible set; the auto strategy cross-checks the constructive
answer against it on desk-scale inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .acceptable import (
    DEFAULT_ADM_GUARD_SPREAD,
    adm_enumerate,
    adm_member,
    adjoint_leq,
    guard_limit,
)
from .errors import (
    DimensionMismatch,
    GuardExceeded,
    InternalCheckFailed,
    UnsupportedTwist,
)
from .newton import (
    Frobenius,
    NewtonPoint,
    Sigma0,
    diamond,
    dominant_rep,
    kappa,
    newton_point,
    omega_pairing,
    simple_nodes,
)
from .superbasic import PeelCertificate, superbasic_witness
from .weyl import (
    AffineElement,
    GroupDatum,
    Permutation,
    bruhat_leq,
)

BRUTE_GUARD_N = 6
BRUTE_GUARD_SIZE = 200_000


@dataclass(frozen=True)
class Problem:
    mu: tuple[int, ...]
    frob: Frobenius

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu", tuple(self.mu))
        if len(self.mu) != self.datum.n:
            raise DimensionMismatch("mu has wrong length")
        if not self.datum.is_dominant(self.mu):
            raise ValueError(f"mu {self.mu} is not dominant per block")

    @property
    def datum(self) -> GroupDatum:
        return self.frob.datum


@dataclass(frozen=True)
class Solution:
    """Witness w with x such that w <= t^{x(mu)}, plus the raw Newton
    vector (unshifted, globally dominant) realized by w."""

    nu_raw: tuple[Fraction, ...]
    w: AffineElement
    x: Permutation
    trace: tuple = ()
    certificate: Optional[PeelCertificate] = None


def _verify_solution(problem: Problem, sol: Solution) -> None:
    datum = problem.datum
    bound = AffineElement.translation(datum, sol.x.act(problem.mu))
    if not bruhat_leq(sol.w, bound):
        raise InternalCheckFailed(
            f"witness {sol.w!r} is not below t^{{x(mu)}} = {bound!r}"
        )
    if kappa(sol.w) != kappa(AffineElement.translation(datum, problem.mu)):
        raise InternalCheckFailed("witness leaves the translation coset")
    nd = newton_point(sol.w, problem.frob.with_shift((Fraction(0),) * datum.n))
    bar, _ = dominant_rep(datum, nd.nu)
    if bar != sol.nu_raw:
        raise InternalCheckFailed(
            f"witness Newton point {bar} differs from claimed {sol.nu_raw}"
        )


# --- individual reduction steps ----------------------------------------------

@dataclass(frozen=True)
class AdjointStep:
    kind: str
    original: Frobenius
    kappas: tuple[int, ...]

    def lift(self, problem: Problem, sub: Solution) -> Solution:
        datum = self.original.datum
        w = AffineElement(datum, sub.w.trans, sub.w.perm)
        sol = Solution(sub.nu_raw, w, sub.x, (self,) + sub.trace, sub.certificate)
        _verify_solution(Problem(problem.mu, self.original), sol)
        return sol


def adjoint_project(problem: Problem) -> tuple[Problem, AdjointStep]:
    """Mark every block adjoint; arithmetic stays in the GL lattice and
    the lift restores the flags and the recorded central coordinates."""
    datum = problem.datum
    step = AdjointStep("adjoint", problem.frob,
                       datum.block_sums(problem.mu))
    new_datum = datum.with_adjoint(True)
    tau = AffineElement(new_datum, problem.frob.tau.trans, problem.frob.tau.perm)
    sigma0 = Sigma0(new_datum, problem.frob.sigma0.block_to, problem.frob.sigma0.flip)
    frob = Frobenius(tau, sigma0, problem.frob.shift)
    return Problem(problem.mu, frob), step


@dataclass(frozen=True)
class OmegaStep:
    kind: str
    tau0: AffineElement

    def lift(self, problem: Problem, sub: Solution) -> Solution:
        """B(mu, tau0 sigma tau0^-1) = B(mu, sigma) with witness
        w -> tau0^-1 w tau0."""
        inv = self.tau0.inverse()
        w = inv * sub.w * self.tau0
        x = inv.perm * sub.x
        sol = Solution(sub.nu_raw, w, x, (self,) + sub.trace, sub.certificate)
        _verify_solution(problem, sol)
        return sol


def omega_conjugate(problem: Problem, tau0: AffineElement) -> tuple[Problem, OmegaStep]:
    if tau0.length() != 0:
        raise ValueError("conjugator must have length zero")
    frob = problem.frob
    new_tau = tau0 * frob.tau * frob.sigma0.apply_element(tau0).inverse()
    if new_tau.length() != 0:
        raise InternalCheckFailed("conjugated twist is not length zero")
    return (
        Problem(problem.mu, Frobenius(new_tau, frob.sigma0, frob.shift)),
        OmegaStep("omega-conjugate", tau0),
    )


def _conjugator_into_last(problem: Problem, orbit: Sequence[int]) -> AffineElement:
    """Length-zero tau0 with (tau0 tau sigma0(tau0)^-1) supported on the
    last block of the orbit."""
    frob = problem.frob
    datum = problem.datum
    kappas = datum.block_sums(frob.tau.trans)
    # per-block factors of tau (tau is a product of per-block length-zero
    # elements since its permutation preserves blocks)
    factors = {}
    for b in range(datum.num_blocks):
        kap = [0] * datum.num_blocks
        kap[b] = kappas[b]
        lo, hi = datum.block_ranges()[b]
        trans = [0] * datum.n
        images = list(range(1, datum.n + 1))
        for p in range(lo, hi + 1):
            trans[p - 1] = frob.tau.trans[p - 1]
            images[p - 1] = frob.tau.perm(p)
        factors[b] = AffineElement(datum, trans, Permutation(images))
    g = {orbit[-1]: AffineElement.identity(datum)}
    prev = orbit[-1]
    for b in orbit[:-1]:
        g[b] = frob.sigma0.apply_element(g[prev]) * factors[b].inverse()
        prev = b
    tau0 = AffineElement.identity(datum)
    for b in orbit:
        tau0 = tau0 * g[b]
    return tau0


@dataclass(frozen=True)
class ProductSplitStep:
    kind: str
    orbit: tuple[int, ...]
    parent_frob: Frobenius
    parts: tuple[tuple[int, ...], ...]  # sigma0^{m-i}(mu_i), in block-m coords
    sub_datum: GroupDatum
    embed: tuple[int, ...]  # global positions of the last block

    def lift(self, problem: Problem, sub: Solution) -> Solution:
        datum = self.parent_frob.datum
        sigma0 = self.parent_frob.sigma0
        m = len(self.orbit)
        # factor the sub-witness along the translation parts (already
        # written in last-block coordinates)
        part_bounds = [
            AffineElement.translation(self.sub_datum, sub.x.act(p))
            for p in self.parts
        ]
        pieces = factor_witness(sub.w, part_bounds)
        y = AffineElement.identity(datum)
        x_images = list(range(1, datum.n + 1))
        for i, piece in enumerate(pieces):
            power = -(m - 1 - i)  # sigma0^{i-m} with 1-based i
            emb = _embed_element(datum, piece, self.embed)
            y = y * sigma0.apply_element(emb, power=power)
            x_emb = _embed_perm(datum, sub.x, self.embed)
            x_block = sigma0.apply_perm(x_emb, power=power)
            for p in range(1, datum.n + 1):
                if x_block(p) != p:
                    x_images[p - 1] = x_block(p)
        x = Permutation(x_images)
        nd = newton_point(y, self.parent_frob.with_shift((Fraction(0),) * datum.n))
        bar, _ = dominant_rep(datum, nd.nu)
        # the parent Newton vector spreads the factor vector over the
        # orbit, scaled by 1/m: each pass through the orbit is one
        # application of the factor twist
        spread = [Fraction(0)] * datum.n
        sub_bar = tuple(Fraction(v, 1) / m for v in sub.nu_raw)
        for i, b in enumerate(self.orbit):
            power = -(m - 1 - i)
            vec = [Fraction(0)] * datum.n
            for local, p in enumerate(self.embed):
                vec[p - 1] = sub_bar[local]
            moved = _map_vec(sigma0, vec, power)
            lo, hi = datum.block_ranges()[b]
            block_vals = sorted(moved[lo - 1 : hi], reverse=True)
            spread[lo - 1 : hi] = block_vals
        if tuple(spread) != bar:
            raise InternalCheckFailed(
                f"assembled Newton point {bar} does not spread the factor point"
            )
        sol = Solution(bar, y, x, (self,) + sub.trace, sub.certificate)
        _verify_solution(problem, sol)
        return sol


def _restrict(vec: Sequence, positions: Sequence[int]) -> tuple:
    return tuple(vec[p - 1] for p in positions)


def _embed_element(datum: GroupDatum, w: AffineElement, positions: Sequence[int]) -> AffineElement:
    trans = [0] * datum.n
    images = list(range(1, datum.n + 1))
    for local, p in enumerate(positions):
        trans[p - 1] = w.trans[local]
        images[p - 1] = positions[w.perm(local + 1) - 1]
    return AffineElement(datum, trans, Permutation(images))


def _embed_perm(datum: GroupDatum, x: Permutation, positions: Sequence[int]) -> Permutation:
    images = list(range(1, datum.n + 1))
    for local, p in enumerate(positions):
        images[p - 1] = positions[x(local + 1) - 1]
    return Permutation(images)


def _map_vec(sigma0: Sigma0, vec: Sequence, power: int) -> tuple:
    out = tuple(vec)
    m = sigma0.map() if power >= 0 else sigma0.map().inverse()
    for _ in range(abs(power)):
        out = m.apply(out)
    return out


def product_split(problem: Problem) -> tuple[Problem, ProductSplitStep]:
    """A transitive orbit of blocks reduces to its last factor with
    coweight gamma = sum sigma0^{m-i}(mu_i) and twist sigma^m."""
    frob = problem.frob
    datum = problem.datum
    orbits = frob.sigma0.block_orbits()
    if len(orbits) != 1:
        raise ValueError("sigma0 must act transitively on blocks; split orbits first")
    orbit = orbits[0]
    m = len(orbit)
    for b in orbit[:-1]:
        if datum.block_sums(frob.tau.trans)[b] != 0 or any(
            frob.tau.perm(p) != p for p in range(*_range1(datum, b))
        ):
            raise ValueError("tau must be supported on the last orbit block; conjugate first")
    last = orbit[-1]
    lo, hi = datum.block_ranges()[last]
    embed = tuple(range(lo, hi + 1))
    nb = datum.blocks[last]
    sub_datum = GroupDatum((nb,), (datum.adjoint[last],))
    # parts sigma0^{m-i}(mu_i) land in the last block
    parts = []
    gamma = [0] * nb
    for i, b in enumerate(orbit):
        power = m - 1 - i
        vec = [0] * datum.n
        blo, bhi = datum.block_ranges()[b]
        for p in range(blo, bhi + 1):
            vec[p - 1] = problem.mu[p - 1]
        moved = _map_vec(frob.sigma0, vec, power)
        part = _restrict(moved, embed)
        parts.append(part)
        gamma = [a + c for a, c in zip(gamma, part)]
    # residual diagram automorphism on the last block: flip parity
    flips = sum(frob.sigma0.flip[b] for b in orbit) % 2 == 1
    sub_sigma0 = Sigma0(sub_datum, (0,), (flips,))
    sub_tau = AffineElement(
        sub_datum,
        _restrict(frob.tau.trans, embed),
        Permutation(tuple(frob.tau.perm(p) - lo + 1 for p in embed)),
    )
    sub_frob = Frobenius(sub_tau, sub_sigma0)
    step = ProductSplitStep(
        "product-split", orbit, frob, tuple(tuple(p) for p in parts), sub_datum, embed
    )
    return Problem(tuple(gamma), sub_frob), step


def _range1(datum: GroupDatum, b: int) -> tuple[int, int]:
    lo, hi = datum.block_ranges()[b]
    return lo, hi + 1


def factor_witness(
    w: AffineElement, bounds: Sequence[AffineElement]
) -> tuple[AffineElement, ...]:
    """Split w <= bounds[0] * ... * bounds[-1] (lengths adding) into
    w = w_1 ... w_k with w_i <= bounds[i], by the subword property."""
    total = bounds[0]
    for b in bounds[1:]:
        total = total * b
    if sum(b.length() for b in bounds) != total.length():
        raise ValueError("bound lengths do not add; invalid factorization request")
    if not bruhat_leq(w, total):
        raise ValueError("element is not below the product of the bounds")

    def split2(u: AffineElement, v1: AffineElement, v2: AffineElement) -> tuple[AffineElement, AffineElement]:
        """u <= v1 v2 length-additively: u = u1 u2, u_i <= v_i."""
        from .weyl import left_descent

        if v1.length() == 0:
            return v1, v1.inverse() * u
        _, s = left_descent(v1)
        sv1 = s * v1
        if (s * u).length() < u.length():
            u1, u2 = split2(s * u, sv1, v2)
            return s * u1, u2
        return split2(u, sv1, v2)

    pieces: list[AffineElement] = []
    rest_w = w
    for i in range(len(bounds) - 1):
        tail = bounds[i + 1]
        for b in bounds[i + 2:]:
            tail = tail * b
        w_i, rest_w = split2(rest_w, bounds[i], tail)
        pieces.append(w_i)
    pieces.append(rest_w)
    prod = pieces[0]
    for p in pieces[1:]:
        prod = prod * p
    if prod != w:
        raise InternalCheckFailed("factor product does not rebuild the element")
    for piece, b in zip(pieces, bounds):
        if not bruhat_leq(piece, b):
            raise InternalCheckFailed("a factor escapes its bound")
    return tuple(pieces)


@dataclass(frozen=True)
class ParabolicStep:
    kind: str
    parent_frob: Frobenius
    v0: tuple[Fraction, ...]
    z: Permutation
    J_nodes: frozenset
    sub_datum: GroupDatum

    def lift(self, problem: Problem, sub: Solution) -> Solution:
        datum = self.parent_frob.datum
        z_elt = AffineElement.from_permutation(datum, self.z)
        w = z_elt.inverse() * sub.w.with_datum(datum) * z_elt
        x = self.z.inverse() * sub.x
        nd = newton_point(w, self.parent_frob.with_shift((Fraction(0),) * datum.n))
        bar, _ = dominant_rep(datum, nd.nu)
        sol = Solution(bar, w, x, (self,) + sub.trace, sub.certificate)
        _verify_solution(problem, sol)
        return sol


def _centered(datum: GroupDatum, vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
    out = list(Fraction(x) for x in vec)
    for lo, hi in datum.block_ranges():
        nb = hi - lo + 1
        avg = sum(out[lo - 1 : hi]) / nb
        for p in range(lo - 1, hi):
            out[p] -= avg
    return tuple(out)


def _fixed_direction_space(frob: Frobenius) -> list[tuple[Fraction, ...]]:
    """Basis of the directions fixed by the affine action of the twist
    on the central quotient of the ambient space."""
    datum = frob.datum
    n = datum.n
    lin = frob.affine_map().linear
    cols = []
    for j in range(n):
        e = [Fraction(0)] * n
        e[j] = Fraction(1)
        cols.append(_centered(datum, lin.apply(e)))
    # solve (L - 1)v = 0 restricted to centered vectors; build rows of
    # L - 1 and add the per-block sum-zero constraints
    rows = [
        [cols[j][i] - (1 if i == j else 0) for j in range(n)] for i in range(n)
    ]
    for lo, hi in datum.block_ranges():
        rows.append([Fraction(1) if lo - 1 <= j <= hi - 1 else Fraction(0) for j in range(n)])
    return _nullspace(rows, n)


def _nullspace(rows: list[list[Fraction]], n: int) -> list[tuple[Fraction, ...]]:
    mat = [[Fraction(x) for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -mat[i][fc]
        basis.append(tuple(v))
    return basis


def _generic_point(frob: Frobenius, basis: list[tuple[Fraction, ...]]) -> tuple[Fraction, ...]:
    datum = frob.datum
    n = datum.n
    if not basis:
        return tuple(Fraction(0) for _ in range(n))
    roots = [
        (i, j)
        for lo, hi in datum.block_ranges()
        for i in range(lo, hi + 1)
        for j in range(i + 1, hi + 1)
    ]
    t = n * n + 1
    for _ in range(n ** 3 + n + 8):
        v0 = [Fraction(0)] * n
        scale = 1
        for b in basis:
            v0 = [a + scale * c for a, c in zip(v0, b)]
            scale *= t
        ok = True
        for i, j in roots:
            if v0[i - 1] == v0[j - 1] and any(b[i - 1] != b[j - 1] for b in basis):
                ok = False
                break
        if ok:
            return tuple(v0)
        t += 1
    raise InternalCheckFailed("no generic point found; retry bound exceeded")


def _prefer_dominant(frob: Frobenius, v0: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    """Swap the generic point for its dominant representative when that
    stays inside the fixed-direction space and generic; the descent
    data z then comes out as the identity."""
    datum = frob.datum
    vbar, _ = dominant_rep(datum, v0)
    if vbar == v0:
        return v0
    lin = frob.affine_map().linear
    if _centered(datum, lin.apply(vbar)) != _centered(datum, vbar):
        return v0
    # genericity must be re-verified for the reordered point
    for lo, hi in datum.block_ranges():
        for i in range(lo, hi + 1):
            for j in range(i + 1, hi + 1):
                if vbar[i - 1] == vbar[j - 1] and v0[i - 1] != v0[j - 1]:
                    return v0
    return tuple(vbar)


def parabolic_reduce(problem: Problem) -> Optional[tuple[Problem, ParabolicStep]]:
    """Descend to the stabilizer of the dominant representative of a
    generic twist-fixed direction. Returns None when the twist is
    already superbasic (no proper descent)."""
    frob = problem.frob
    datum = problem.datum
    if datum.num_blocks != 1:
        raise ValueError("parabolic reduction expects a single block")
    basis = _fixed_direction_space(frob)
    v0 = _generic_point(frob, basis)
    v0 = _prefer_dominant(frob, v0)
    vbar, z = dominant_rep(datum, v0)
    J = frozenset(
        nd for nd in simple_nodes(datum)
        if vbar[nd[1] - 1] == vbar[nd[1]]
    )
    if len(J) == len(simple_nodes(datum)):
        return None
    # sigma0 stability of J
    for nd in J:
        if frob.sigma0.node_image(nd) not in J:
            raise InternalCheckFailed("stabilizer support is not sigma0-stable")
    z_elt = AffineElement.from_permutation(datum, z)
    new_tau = z_elt * frob.tau * frob.sigma0.apply_element(z_elt).inverse()
    zlam = z.act(frob.lam)
    if new_tau.trans != zlam:
        raise InternalCheckFailed("conjugated twist translation is not z(lambda)")
    # sub datum: J-intervals of [1..n]
    n = datum.n
    cut = sorted(i for (_, i) in (frozenset(simple_nodes(datum)) - J))
    sizes = []
    prev = 0
    for c in cut + [n]:
        sizes.append(c - prev)
        prev = c
    sub_datum = GroupDatum(tuple(sizes))
    tau_J = AffineElement(sub_datum, new_tau.trans, new_tau.perm)
    if tau_J.length() != 0:
        raise InternalCheckFailed("residual twist is not length zero in the stabilizer")
    # induced diagram automorphism on the interval blocks
    if frob.sigma0.is_identity():
        sub_sigma0 = Sigma0.identity(sub_datum)
    else:
        sub_sigma0 = _induced_sigma0(datum, frob.sigma0, sub_datum)
    sub_frob = Frobenius(tau_J, sub_sigma0)
    _check_integrality_split(problem, z, J, sub_datum)
    step = ParabolicStep("parabolic", frob, tuple(v0), z, J, sub_datum)
    return Problem(problem.mu, sub_frob), step


def _induced_sigma0(datum: GroupDatum, sigma0: Sigma0, sub_datum: GroupDatum) -> Sigma0:
    """Restriction of a single-block flip to the interval blocks."""
    ranges = sub_datum.block_ranges()
    smap = sigma0.map()
    block_to = []
    flips = []
    for lo, hi in ranges:
        tgt_positions = sorted(smap.pos[p - 1] for p in range(lo, hi + 1))
        tgt = next(
            (k for k, (l2, h2) in enumerate(ranges) if (l2, h2) == (tgt_positions[0], tgt_positions[-1])),
            None,
        )
        if tgt is None:
            raise InternalCheckFailed("twist does not permute the stabilizer intervals")
        block_to.append(tgt)
        flips.append(smap.sign[lo - 1] < 0)
    return Sigma0(sub_datum, tuple(block_to), tuple(flips))


def _check_integrality_split(problem: Problem, z: Permutation, J: frozenset,
                             sub_datum: GroupDatum) -> None:
    """The two integrality facts behind the descent: z(lambda) averages
    into the span of the stabilizer coroots, and the defect pairing is
    integral exactly away from the stabilizer."""
    datum = problem.datum
    frob = problem.frob
    zlam_dia = diamond(z.act(frob.lam), frob)
    I = frozenset(simple_nodes(datum)) - J
    for nd in I:
        if omega_pairing(datum, nd, zlam_dia) != 0:
            raise InternalCheckFailed("z(lambda) average escapes the coroot span")
    lam_dia = diamond(frob.lam, frob)
    for orbit in frob.sigma0.node_orbits():
        val = sum((omega_pairing(datum, nd, lam_dia) for nd in orbit), Fraction(0))
        inside_I = orbit[0] in I
        if (val.denominator == 1) != inside_I:
            raise InternalCheckFailed("defect integrality does not match the support")


# --- the solver ---------------------------------------------------------------

@dataclass(frozen=True)
class OrbitSplitStep:
    kind: str
    parent_frob: Frobenius
    orbits: tuple[tuple[int, ...], ...]
    positions: tuple[tuple[int, ...], ...]  # global positions per orbit

    def lift(self, problem: Problem, subs: Sequence[Solution]) -> Solution:
        datum = self.parent_frob.datum
        trans = [0] * datum.n
        images = list(range(1, datum.n + 1))
        x_images = list(range(1, datum.n + 1))
        nu = [Fraction(0)] * datum.n
        trace: tuple = (self,)
        cert = None
        for positions, sub in zip(self.positions, subs):
            for local, p in enumerate(positions):
                trans[p - 1] = sub.w.trans[local]
                images[p - 1] = positions[sub.w.perm(local + 1) - 1]
                x_images[p - 1] = positions[sub.x(local + 1) - 1]
                nu[p - 1] = sub.nu_raw[local]
            trace = trace + sub.trace
            cert = cert or sub.certificate
        w = AffineElement(datum, trans, Permutation(images))
        sol = Solution(tuple(nu), w, Permutation(x_images), trace, cert)
        _verify_solution(problem, sol)
        return sol


@dataclass(frozen=True)
class BaseStep:
    kind: str
    m: int
    n: int
    central: int


def _solve_block(problem: Problem) -> Solution:
    """Single block: parabolic descent until superbasic, then the
    explicit witness."""
    datum = problem.datum
    frob = problem.frob
    nb = datum.blocks[0]
    if nb == 1:
        w = AffineElement.translation(datum, problem.mu)
        nd = newton_point(w, frob.with_shift((Fraction(0),)))
        return Solution(nd.nu, w, Permutation.identity(1),
                        (BaseStep("base-rank-one", 0, 1, problem.mu[0]),), None)
    reduced = parabolic_reduce(problem)
    if reduced is not None:
        sub_problem, step = reduced
        sub_sol = _solve_orbits(sub_problem)
        return step.lift(problem, sub_sol)
    # superbasic base case
    if not frob.sigma0.is_identity():
        raise UnsupportedTwist(
            "a diagram flip survives to the superbasic base; constructive"
            " witnesses are only built for rotation twists"
        )
    kap = datum.block_sums(frob.tau.trans)[0]
    m0 = kap % nb
    central = (kap - m0) // nb
    if m0 == 0 or gcd(m0, nb) != 1:
        raise InternalCheckFailed(
            f"residual twist kappa={kap} is not superbasic on GL_{nb}"
        )
    sw = superbasic_witness(problem.mu, m0, nb)
    # a central part of tau shifts every Newton point by central * d
    nu = tuple(a + central for a in sw.nu.nu)
    w = sw.w.with_datum(datum)
    sol = Solution(
        nu, w, sw.x,
        (BaseStep("base-superbasic", m0, nb, central),), sw.certificate,
    )
    _verify_solution(problem, sol)
    return sol


def _solve_orbit(problem: Problem) -> Solution:
    """sigma0 transitive on the blocks of the problem."""
    orbits = problem.frob.sigma0.block_orbits()
    if len(orbits) != 1:
        raise InternalCheckFailed("orbit solver called on a split problem")
    if problem.datum.num_blocks == 1:
        return _solve_block(problem)
    tau0 = _conjugator_into_last(problem, orbits[0])
    conj_problem, om_step = omega_conjugate(problem, tau0)
    sub_problem, ps_step = product_split(conj_problem)
    sub_sol = _solve_orbits(sub_problem)
    lifted = ps_step.lift(conj_problem, sub_sol)
    return om_step.lift(problem, lifted)


def _solve_orbits(problem: Problem) -> Solution:
    datum = problem.datum
    frob = problem.frob
    orbits = frob.sigma0.block_orbits()
    if len(orbits) == 1:
        return _solve_orbit(problem)
    positions = []
    subs = []
    for orbit in orbits:
        pos = tuple(
            p
            for b in sorted(orbit)
            for p in range(datum.block_ranges()[b][0], datum.block_ranges()[b][1] + 1)
        )
        positions.append(pos)
        sub_blocks = tuple(datum.blocks[b] for b in sorted(orbit))
        sub_adj = tuple(datum.adjoint[b] for b in sorted(orbit))
        sub_datum = GroupDatum(sub_blocks, sub_adj)
        renum = {b: i for i, b in enumerate(sorted(orbit))}
        sub_sigma0 = Sigma0(
            sub_datum,
            tuple(renum[frob.sigma0.block_to[b]] for b in sorted(orbit)),
            tuple(frob.sigma0.flip[b] for b in sorted(orbit)),
        )
        sub_tau = AffineElement(
            sub_datum,
            _restrict(frob.tau.trans, pos),
            _restrict_perm(frob.tau.perm, pos),
        )
        sub_frob = Frobenius(sub_tau, sub_sigma0)
        sub_mu = _restrict(problem.mu, pos)
        subs.append(_solve_orbits(Problem(sub_mu, sub_frob)))
    step = OrbitSplitStep("orbit-split", frob, orbits, tuple(positions))
    return step.lift(problem, subs)


def _restrict_perm(perm: Permutation, positions: Sequence[int]) -> Permutation:
    index = {p: i + 1 for i, p in enumerate(positions)}
    return Permutation(tuple(index[perm(p)] for p in positions))


def lift_witness(trace_or_step, problem: Problem, sub) -> Solution:
    """Replay one recorded step (or a whole trace, outermost first) on
    a verified sub-solution."""
    if isinstance(trace_or_step, (list, tuple)):
        if not trace_or_step:
            return sub
        head, rest = trace_or_step[0], trace_or_step[1:]
        inner = lift_witness(rest, _step_subproblem(head, problem), sub) if rest else sub
        return head.lift(problem, inner)
    return trace_or_step.lift(problem, sub)


def _step_subproblem(step, problem: Problem) -> Problem:
    if isinstance(step, AdjointStep):
        return adjoint_project(problem)[0]
    if isinstance(step, OmegaStep):
        return omega_conjugate(problem, step.tau0)[0]
    if isinstance(step, ProductSplitStep):
        return product_split(problem)[0]
    if isinstance(step, ParabolicStep):
        reduced = parabolic_reduce(problem)
        if reduced is None:
            raise InternalCheckFailed("trace step does not match the problem")
        return reduced[0]
    raise ValueError(f"cannot replay step {step!r}")


def step_json(step) -> dict:
    """Serializable record of one reduction step."""
    from .weyl import format_element

    doc: dict = {"kind": step.kind}
    if isinstance(step, AdjointStep):
        doc["kappa"] = list(step.kappas)
    elif isinstance(step, OmegaStep):
        doc["tau0"] = format_element(step.tau0)
    elif isinstance(step, ProductSplitStep):
        doc["orbit"] = [b + 1 for b in step.orbit]
        doc["parts"] = [list(p) for p in step.parts]
    elif isinstance(step, ParabolicStep):
        doc["z"] = repr(step.z)
        doc["blocks"] = list(step.sub_datum.blocks)
        doc["generic_direction"] = [str(x) for x in step.v0]
    elif isinstance(step, OrbitSplitStep):
        doc["orbits"] = [[b + 1 for b in orbit] for orbit in step.orbits]
    elif isinstance(step, BaseStep):
        doc.update(m=step.m, n=step.n, central=step.central)
    return doc


@dataclass(frozen=True)
class SolveResult:
    problem: Problem
    nu: NewtonPoint
    nu_raw: tuple[Fraction, ...]
    w: AffineElement
    x: Permutation
    trace: tuple
    certificate: Optional[PeelCertificate]
    strategy: str
    checks: dict


def solve(mu: Sequence[int], frob: Frobenius, strategy: str = "auto") -> SolveResult:
    """Maximal acceptable Newton point plus an admissible witness.

    ``constructive`` runs the reduction pipeline; ``bruteforce``
    maximizes over the Newton points of the admissible set (guarded);
    ``auto`` runs the constructive path and cross-checks it against
    the brute force and the enumerated acceptable set when small.
    """
    if strategy not in ("auto", "constructive", "bruteforce"):
        raise ValueError(f"unknown strategy {strategy!r}")
    problem = Problem(tuple(mu), frob)
    checks: dict = {}
    if strategy == "bruteforce":
        sol = _brute_force(problem)
        checks["bruteforce"] = True
    else:
        ad_problem, ad_step = adjoint_project(problem)
        inner = _solve_orbits(ad_problem)
        sol = ad_step.lift(problem, inner)
        target = maximal_newton_raw(problem)
        if sol.nu_raw != target:
            raise InternalCheckFailed(
                f"constructive Newton point {sol.nu_raw} differs from the"
                f" maximal point {target}"
            )
        checks["matches_maximal_newton"] = True
        if strategy == "auto" and _brute_feasible(problem):
            brute = _brute_force(problem)
            if brute.nu_raw != sol.nu_raw:
                raise InternalCheckFailed(
                    f"constructive {sol.nu_raw} and brute force {brute.nu_raw} disagree"
                )
            checks["matches_bruteforce"] = True
    ok, x_adm = adm_member(sol.w, problem.mu)
    if not ok:
        raise InternalCheckFailed("witness is not admissible")
    checks["admissible"] = True
    kap = kappa(AffineElement.translation(problem.datum, problem.mu))
    shifted = tuple(a - b for a, b in zip(sol.nu_raw, frob.shift))
    point = NewtonPoint(problem.datum, shifted, kap)
    return SolveResult(
        problem, point, sol.nu_raw, sol.w, sol.x, sol.trace,
        sol.certificate, strategy, checks,
    )


def maximal_newton_raw(problem: Problem) -> tuple[Fraction, ...]:
    from .acceptable import maximal_newton_state

    return maximal_newton_state(problem.mu, problem.frob).nu_raw


def _brute_feasible(problem: Problem) -> bool:
    datum = problem.datum
    if datum.n > guard_limit(BRUTE_GUARD_N):
        return False
    for lo, hi in datum.block_ranges():
        part = problem.mu[lo - 1 : hi]
        if part and max(part) - min(part) > DEFAULT_ADM_GUARD_SPREAD:
            return False
    return True


def _brute_force(problem: Problem) -> Solution:
    datum = problem.datum
    if datum.n > guard_limit(BRUTE_GUARD_N):
        raise GuardExceeded(f"brute force guard: n={datum.n}")
    elements = adm_enumerate(problem.mu, datum, guard_n=guard_limit(BRUTE_GUARD_N))
    if len(elements) > BRUTE_GUARD_SIZE:
        raise GuardExceeded(f"admissible set too large: {len(elements)}")
    zero_shift = problem.frob.with_shift((Fraction(0),) * datum.n)
    attained: dict[tuple[Fraction, ...], AffineElement] = {}
    for w in elements:
        nd = newton_point(w, zero_shift)
        bar, _ = dominant_rep(datum, nd.nu)
        attained.setdefault(bar, w)
    maxima = [
        p for p in attained
        if all(adjoint_leq(datum, q, p) for q in attained)
    ]
    if len(maxima) != 1:
        raise InternalCheckFailed(
            f"admissible Newton points have {len(maxima)} maxima: {sorted(attained)}"
        )
    best, witness = maxima[0], attained[maxima[0]]
    ok, x = adm_member(witness, problem.mu)
    if not ok:
        raise InternalCheckFailed("brute-force witness is not admissible")
    return Solution(best, witness, x, (BaseStep("bruteforce", 0, datum.n, 0),), None)
