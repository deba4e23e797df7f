"""Command-line front end.

Subcommands:

    newton     Newton point of one element under a twist
    max        maximal acceptable point with admissible witness
    enumerate  the full acceptable set as JSON
    adm        admissible-set membership or listing
    polygon    TSV of running sums and their upper hull
    verify     oracle sweep; exit 2 with a replayable problem on mismatch

Groups are written ``gl:8``, ``pgl:4`` or ``gl:2*2``; twists either
``superbasic:m/n`` or ``tau=<element>;sigma0=<targets>`` where targets
is a comma list of 1-based block numbers, negative for a flip (for
example ``sigma0=2,-1``). All fractions are printed exactly.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .acceptable import (
    adm_enumerate,
    adm_member,
    enumerate_acceptable,
    mu_diamond_acceptable,
)
from .errors import BgmuError, GuardExceeded, ParseError
from .newton import Frobenius, Sigma0, dominant_rep, kappa, newton_point
from .reduction import solve, step_json
from .superbasic import chi as chi_vec
from .superbasic import polygon as make_polygon
from .weyl import (
    AffineElement,
    GroupDatum,
    format_element,
    omega_element,
    parse_element,
)

SCHEMA = "bgmu/1"


@dataclass(frozen=True)
class ProblemSpec:
    """Parsed command-line problem: group, coweight and twist."""

    datum: GroupDatum
    mu: Optional[tuple[int, ...]]
    frob: Frobenius

    def to_json_dict(self) -> dict:
        return {
            "group": _format_group(self.datum),
            "mu": list(self.mu) if self.mu is not None else None,
            "tau": format_element(self.frob.tau),
            "sigma0": _format_sigma0(self.frob.sigma0),
            "shift": [str(x) for x in self.frob.shift],
        }


def _parse_group(text: str) -> GroupDatum:
    text = text.strip().lower()
    try:
        kind, spec = text.split(":", 1)
    except ValueError as exc:
        raise ParseError(f"group must look like gl:8 or pgl:2*2, got {text!r}") from exc
    if kind not in ("gl", "pgl"):
        raise ParseError(f"unknown group kind {kind!r}")
    try:
        blocks = tuple(int(b) for b in spec.split("*"))
    except ValueError as exc:
        raise ParseError(f"bad block sizes in {text!r}") from exc
    return GroupDatum(blocks, (kind == "pgl",) * len(blocks))


def _format_group(datum: GroupDatum) -> str:
    kind = "pgl" if all(datum.adjoint) and any(datum.adjoint) else "gl"
    return kind + ":" + "*".join(str(b) for b in datum.blocks)


def _format_sigma0(s: Sigma0) -> str:
    return ",".join(
        ("-" if f else "") + str(t + 1) for t, f in zip(s.block_to, s.flip)
    )


def _parse_sigma0(text: str, datum: GroupDatum) -> Sigma0:
    try:
        entries = [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise ParseError(f"bad sigma0 spec {text!r}") from exc
    if len(entries) != datum.num_blocks:
        raise ParseError(
            f"sigma0 needs {datum.num_blocks} targets, got {len(entries)}"
        )
    return Sigma0(
        datum,
        tuple(abs(e) - 1 for e in entries),
        tuple(e < 0 for e in entries),
    )


def _parse_sigma(text: str, datum: GroupDatum, normalize: bool) -> Frobenius:
    text = text.strip()
    if text.startswith("superbasic:"):
        frac = text[len("superbasic:"):]
        try:
            m_s, n_s = frac.split("/")
            m, n = int(m_s), int(n_s)
        except ValueError as exc:
            raise ParseError(f"superbasic twist must be m/n, got {frac!r}") from exc
        if datum.blocks != (n,):
            raise ParseError(
                f"superbasic:{m}/{n} needs a single block of size {n},"
                f" got {_format_group(datum)}"
            )
        if not (0 < m < n) or gcd(m, n) != 1:
            raise ParseError(f"superbasic twist needs coprime 0 < m < n, got {m}/{n}")
        tau = omega_element(datum, (m,))
        return Frobenius(tau, Sigma0.identity(datum), (Fraction(m, n),) * n)
    tau = AffineElement.identity(datum)
    sigma0 = Sigma0.identity(datum)
    for part in filter(None, (p.strip() for p in text.split(";"))):
        if part.startswith("tau="):
            tau = parse_element(part[4:], datum)
        elif part.startswith("sigma0="):
            sigma0 = _parse_sigma0(part[7:], datum)
        else:
            raise ParseError(f"unknown twist component {part!r}")
    frob = Frobenius(tau, sigma0)
    if normalize:
        frob = frob.with_shift(frob.canonical_shift())
    return frob


def _problem_from_args(args, need_mu: bool = True) -> ProblemSpec:
    datum = _parse_group(args.group)
    mu = None
    if need_mu:
        try:
            mu = tuple(int(x) for x in args.mu.split(","))
        except ValueError as exc:
            raise ParseError(f"bad mu {args.mu!r}") from exc
        if len(mu) != datum.n:
            raise ParseError(f"mu must have {datum.n} entries")
    frob = _parse_sigma(args.sigma, datum, getattr(args, "normalize", False))
    return ProblemSpec(datum, mu, frob)


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")


def cmd_newton(args) -> int:
    spec = _problem_from_args(args, need_mu=False)
    w = parse_element(args.w, spec.datum)
    nd = newton_point(w, spec.frob)
    bar, _ = dominant_rep(spec.datum, nd.nu)
    normalized = tuple(a - b for a, b in zip(bar, spec.frob.shift))
    _emit(
        {
            "schema": SCHEMA,
            "element": format_element(w),
            "order": nd.order,
            "translation": list(nd.translation),
            "nu": [str(x) for x in nd.nu],
            "nu_bar": [str(x) for x in bar],
            "normalized": [str(x) for x in normalized],
            "kappa": list(kappa(w).values),
        }
    )
    return 0


def cmd_max(args) -> int:
    spec = _problem_from_args(args)
    result = solve(spec.mu, spec.frob, strategy=args.strategy)
    doc = {
        "schema": SCHEMA,
        "problem": spec.to_json_dict(),
        "nu": [str(x) for x in result.nu.nu],
        "nu_raw": [str(x) for x in result.nu_raw],
        "kappa": list(result.nu.kappa.values),
        "witness": format_element(result.w),
        "x": repr(result.x),
        "strategy": result.strategy,
        "checks": result.checks,
        "trace": [step_json(step) for step in result.trace],
    }
    if result.certificate is not None:
        doc["certificate"] = result.certificate.to_json_dict()
    _emit(doc)
    return 0


def cmd_enumerate(args) -> int:
    spec = _problem_from_args(args)
    acc = enumerate_acceptable(spec.mu, spec.frob)
    doc = acc.to_json_dict()
    doc["problem"] = spec.to_json_dict()
    doc["mu_diamond_acceptable"] = mu_diamond_acceptable(spec.mu, spec.frob)
    _emit(doc)
    return 0


def cmd_adm(args) -> int:
    datum = _parse_group(args.group)
    try:
        mu = tuple(int(x) for x in args.mu.split(","))
    except ValueError as exc:
        raise ParseError(f"bad mu {args.mu!r}") from exc
    if args.w is not None:
        w = parse_element(args.w, datum)
        ok, x = adm_member(w, mu)
        _emit(
            {
                "schema": SCHEMA,
                "element": format_element(w),
                "member": ok,
                "x": repr(x) if x is not None else None,
            }
        )
        return 0
    elements = adm_enumerate(mu, datum)
    _emit(
        {
            "schema": SCHEMA,
            "size": len(elements),
            "elements": [format_element(e) for e in elements],
        }
    )
    return 0


def cmd_polygon(args) -> int:
    try:
        mu = tuple(int(x) for x in args.mu.split(","))
    except ValueError as exc:
        raise ParseError(f"bad mu {args.mu!r}") from exc
    n = args.n
    if len(mu) != n:
        raise ParseError(f"mu must have {n} entries")
    theta = tuple(a + b for a, b in zip(mu, chi_vec(args.m, n)))
    hull = make_polygon(theta)
    out = ["k\tpartial_sum\thull"]
    partial = 0
    for k in range(n + 1):
        if k > 0:
            partial += theta[k - 1]
        out.append(f"{k}\t{partial}\t{hull.hull_value(k)}")
    sys.stdout.write("\n".join(out) + "\n")
    return 0


def cmd_verify(args) -> int:
    failures = []
    checked = 0
    for n in range(2, args.max_n + 1):
        for m in range(1, n):
            if gcd(m, n) != 1:
                continue
            datum = GroupDatum.gl(n)
            frob = Frobenius.superbasic(m, n)
            for mu in itertools.combinations_with_replacement(
                range(args.max_entry, -1, -1), n
            ):
                checked += 1
                spec = ProblemSpec(datum, mu, frob)
                try:
                    result = solve(mu, frob, strategy="auto")
                    acc = enumerate_acceptable(mu, frob)
                    if acc.raw[acc.maximum] != result.nu_raw:
                        raise BgmuError(
                            f"enumerated maximum {acc.raw[acc.maximum]}"
                            f" != constructive {result.nu_raw}"
                        )
                    want_diamond = mu_diamond_acceptable(mu, frob)
                    from .acceptable import adjoint_eq, diamond

                    is_diamond = adjoint_eq(
                        datum, result.nu_raw, diamond(mu, frob)
                    )
                    if want_diamond != is_diamond:
                        raise BgmuError("mu_diamond criterion mismatch")
                except BgmuError as exc:
                    failures.append((spec, str(exc)))
                    if not args.keep_going:
                        break
            if failures and not args.keep_going:
                break
        if failures and not args.keep_going:
            break
    if failures:
        spec, message = failures[0]
        _emit(
            {
                "schema": SCHEMA,
                "verified": checked,
                "failures": len(failures),
                "first_failure": {
                    "problem": spec.to_json_dict(),
                    "error": message,
                },
            }
        )
        return 2
    _emit({"schema": SCHEMA, "verified": checked, "failures": 0})
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bgmu", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, need_mu=True, need_sigma=True):
        p.add_argument("--group", required=True, help="gl:8, pgl:4 or gl:2*2")
        if need_mu:
            p.add_argument("--mu", required=True, help="comma separated integers")
        if need_sigma:
            p.add_argument("--sigma", required=True,
                           help="superbasic:m/n or tau=...;sigma0=...")
            p.add_argument("--normalize", action="store_true",
                           help="report Newton points with the canonical central shift")

    p = sub.add_parser("newton", help="Newton point of one element")
    add_common(p, need_mu=False)
    p.add_argument("--w", required=True, help="element literal t[...]*cyc(...)")
    p.set_defaults(func=cmd_newton)

    p = sub.add_parser("max", help="maximal point with admissible witness")
    add_common(p)
    p.add_argument("--strategy", choices=("auto", "constructive", "bruteforce"),
                   default="auto")
    p.set_defaults(func=cmd_max)

    p = sub.add_parser("enumerate", help="the full acceptable set")
    add_common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("adm", help="admissible set membership or listing")
    p.add_argument("--group", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--w", help="element literal; omit to list the whole set")
    p.set_defaults(func=cmd_adm)

    p = sub.add_parser("polygon", help="running sums of mu + chi and their hull")
    p.add_argument("--mu", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_polygon)

    p = sub.add_parser("verify", help="oracle sweep over small problems")
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--max-entry", type=int, default=2)
    p.add_argument("--max-length", type=int, default=8,
                   help="reserved for the coset-ball cross check")
    p.add_argument("--keep-going", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except GuardExceeded as exc:
        sys.stderr.write(f"bgmu: guard exceeded: {exc}\n")
        return 1
    except BgmuError as exc:
        sys.stderr.write(f"bgmu: {exc}\n")
        return 1


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
