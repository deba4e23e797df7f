"""Shared brute-force oracles and the acceptance report hook.

The oracles here deliberately avoid the library's fast paths: lengths
come from Cayley-graph breadth-first search, Bruhat order from subword
products, Newton points from alternating affine applications with the
linear part tracked on a basis.
"""

import itertools
from fractions import Fraction

import pytest

from bgmu.newton import Frobenius, dominant_rep
from bgmu.weyl import AffineElement, GroupDatum, simple_reflections


def wa_ball(datum: GroupDatum, max_len: int):
    """All affine-Weyl-group elements of length at most max_len."""
    refl = [s for _, s in simple_reflections(datum)]
    out = {AffineElement.identity(datum)}
    frontier = list(out)
    while frontier:
        nxt = []
        for w in frontier:
            for s in refl:
                c = w * s
                if c.length() <= max_len and c not in out:
                    out.add(c)
                    nxt.append(c)
        frontier = nxt
    return out


def coset_ball(datum: GroupDatum, omega: AffineElement, max_len: int):
    """Elements of W_a * omega with length at most max_len."""
    return {a * omega for a in wa_ball(datum, max_len)}


def oracle_length(w: AffineElement, cap: int = 12) -> int:
    """Shortest-word length by breadth-first search."""
    if w.length() == 0:  # sanity cap only; identity-coset reachability
        return 0
    refl = [s for _, s in simple_reflections(w.datum)]
    seen = {w}
    frontier = [w]
    for depth in range(1, cap + 1):
        nxt = []
        for u in frontier:
            for s in refl:
                c = s * u
                if c.length() == 0:
                    return depth
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    raise AssertionError(f"no word of length <= {cap} for {w!r}")


def oracle_newton(w: AffineElement, frob: Frobenius):
    """Newton vector by alternating affine application, detecting the
    trivial linear part on a basis of the ambient space."""
    n = w.datum.n
    tau, sigma0 = frob.tau, frob.sigma0

    def step(v):
        return w.apply(tau.apply(sigma0.apply_vector(v)))

    zero = (Fraction(0),) * n
    basis = [
        tuple(Fraction(1) if j == i else Fraction(0) for j in range(n))
        for i in range(n)
    ]
    vz = zero
    vb = list(basis)
    for k in range(1, 20000):
        vz = step(vz)
        vb = [step(b) for b in vb]
        if all(
            tuple(a - c for a, c in zip(vb[i], vz)) == basis[i] for i in range(n)
        ):
            return k, tuple(Fraction(x) / k for x in vz)
    raise AssertionError("oracle Newton iteration failed to close up")


def oracle_newton_bar(w, frob):
    _, nu = oracle_newton(w, frob)
    bar, _ = dominant_rep(w.datum, nu)
    return bar


def dominant_coweights(n: int, max_entry: int):
    """All weakly decreasing vectors with entries in 0..max_entry."""
    return list(
        itertools.combinations_with_replacement(range(max_entry, -1, -1), n)
    )


_acceptance_lines: list[str] = []


def record_acceptance(line: str) -> None:
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
