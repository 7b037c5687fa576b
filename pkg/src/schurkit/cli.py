"""Command-line interface.

Exit codes: 0 success, 1 semantic failure (partition not closed, expectation
mismatch, expected family fact not reproduced), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass

from . import __version__
from .autgrp import format_perm, is_block_system, scheme_automorphisms
from .constructions import m3n_subgroups, paper_partition
from .groups import DEFAULT_ORDER_CAP, FiniteGroup, GroupError, Subgroup, left_cosets, parse_group_spec, right_cosets, subgroup_generated
from .schemes import SchemeError, to_scheme, verify_scheme
from .schurity import is_schurian, quotient_aut_order
from .srings import (
    NotClosed,
    PartitionError,
    SRing,
    a_subgroup_classes,
    format_constants,
    format_partition,
    is_commutative,
    load_partition,
    quotient_sring,
    structure_constants,
)

_GREEK = {"Z": "ξ", "X": "θ", "Y": "ψ", "T": "φ"}
_SUBSCRIPT = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")
_LABEL_RE = re.compile(r"^([ZXYT])_(\d+)$")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    group_spec: str | None = None
    partition_path: str | None = None
    expect: str | None = None
    output_format: str = "human"
    order_cap: int = DEFAULT_ORDER_CAP
    parallel: bool = False


def symbols(S: SRing) -> list[str]:
    """Greek class-sum names when every label is ``Z_i/X_k/Y_k/T_j``, else ``xi_i``."""
    labels = S.partition.labels
    matches = [_LABEL_RE.match(lab or "") for lab in labels]
    if all(matches):
        return [_GREEK[m.group(1)] + m.group(2).translate(_SUBSCRIPT) for m in matches]
    return [f"xi_{i}" for i in range(S.rank)]


def format_combination(terms: dict[int, int], names: list[str]) -> str:
    if not terms:
        return "0"
    parts = [(names[k] if c == 1 else f"{c}{names[k]}") for k, c in sorted(terms.items())]
    return " + ".join(parts)


def format_table(S: SRing) -> str:
    names = symbols(S)
    comm = is_commutative(S)
    lines = []
    for i in range(S.rank):
        for j in range(i if comm else 0, S.rank):
            lines.append(f"{names[i]}{names[j]} = {format_combination(S.product(i, j), names)}")
    return "\n".join(lines) + "\n"


def format_classes(S: SRing) -> str:
    G, P = S.group, S.partition
    names = symbols(S)
    lines = []
    for k, cls in enumerate(P.classes):
        lines.append(f"{P.label(k)} [{names[k]}] size {len(cls)}: " + " ".join(G.format(x) for x in cls))
    return "\n".join(lines) + "\n"


def _load_group(cfg: RunConfig) -> FiniteGroup:
    if not cfg.group_spec:
        raise UsageError("--group is required")
    return parse_group_spec(cfg.group_spec, cap=cfg.order_cap)


def _load_sring(cfg: RunConfig) -> SRing:
    G = _load_group(cfg)
    if not cfg.partition_path:
        raise UsageError("--partition is required")
    P = load_partition(G, cfg.partition_path)
    try:
        return structure_constants(G, P)
    except NotClosed as exc:
        exc.witness_text = (
            f"{P.label(exc.i)} * {P.label(exc.j)} on {P.label(exc.k)}: "
            f"{G.format(exc.x)} has coefficient {exc.cx}, {G.format(exc.y)} has {exc.cy}"
        )
        raise


def _parse_subgroup(G: FiniteGroup, text: str | None, default: str) -> Subgroup:
    if text is None:
        text = default
    if text == "G":
        return Subgroup(G, tuple(range(G.order)))
    tokens = [t for t in re.split(r"[,\s]+", text) if t]
    return subgroup_generated(G, [G.parse(t) for t in tokens])


def cmd_verify(cfg: RunConfig, out) -> int:
    S = _load_sring(cfg)
    if cfg.output_format == "machine":
        out.write(format_constants(S))
    else:
        out.write(f"valid S-ring over {S.group.spec()} with {S.rank} basic sets\n")
        out.write(format_classes(S))
        out.write(format_table(S))
    return 0


def cmd_constants(cfg: RunConfig, out) -> int:
    S = _load_sring(cfg)
    out.write(format_constants(S))
    return 0


def cmd_aut(cfg: RunConfig, out) -> int:
    S = _load_sring(cfg)
    aut = scheme_automorphisms(to_scheme(S), parallel=cfg.parallel)
    K = aut.stabilizer(0)
    out.write(f"order={aut.order()}\n")
    out.write(f"stabilizer_order={K.order()}\n")
    for g in aut.generators:
        out.write(f"gen: {format_perm(g)}\n")
    for orb in K.orbits():
        out.write("orbit: " + " ".join(S.group.format(x) for x in orb) + "\n")
    return 0


def _check_expect(cfg: RunConfig, schurian: bool, err) -> int:
    if cfg.expect is None:
        return 0
    wanted = cfg.expect == "schurian"
    if wanted != schurian:
        err.write(f"expectation mismatch: expected {cfg.expect}\n")
        return 1
    return 0


def cmd_schurity(cfg: RunConfig, out, err=sys.stderr) -> int:
    S = _load_sring(cfg)
    verdict = is_schurian(S, parallel=cfg.parallel)
    out.write(verdict.format(S.group))
    if verdict.mismatch_witness is not None and cfg.output_format == "human":
        k, orb = verdict.mismatch_witness
        out.write(f"witness: basic set {S.partition.label(k)} is not an orbit; it contains orbit "
                  + " ".join(S.group.format(x) for x in orb) + "\n")
    return _check_expect(cfg, verdict.schurian, err)


def cmd_quotient(cfg: RunConfig, upper: str | None, lower: str | None, out) -> int:
    S = _load_sring(cfg)
    G = S.group
    U = _parse_subgroup(G, upper, "G")
    L = _parse_subgroup(G, lower, "e")
    Q = quotient_sring(S, U, L)
    out.write(f"quotient S-ring over a group of order {Q.group.order} with {Q.rank} basic sets\n")
    if cfg.output_format == "machine":
        out.write(format_constants(Q))
    else:
        out.write(format_classes(Q))
    out.write(f"quotient Aut order = {quotient_aut_order(S, U, L)}\n")
    return 0


def cmd_paper(family: str, n: int, cfg: RunConfig, out) -> int:
    """Rebuild one of the two families end to end and report each fact."""
    G, P = paper_partition(family, n, cap=cfg.order_cap)
    S = structure_constants(G, P)
    ok = True
    title = "M_27" if family == "m27" else f"M_{{3^{n}}}"
    out.write(f"# {title}: {G.spec()}, order {G.order}, {S.rank} basic sets\n")
    out.write(format_classes(S))
    out.write("# structure constants\n")
    out.write(format_table(S) if cfg.output_format == "human" else format_constants(S))
    comm = is_commutative(S)
    ok &= comm
    out.write(f"commutative: {'yes' if comm else 'no'}\n")
    q = verify_scheme(to_scheme(S))
    ok &= bool((q == S.constants).all())
    out.write(f"scheme intersection numbers equal structure constants: {'yes' if (q == S.constants).all() else 'no'}\n")

    if family == "m27":
        named = {"U": subgroup_generated(G, [G.parse("a3b1")]).members}
    else:
        named = {k: v for k, v in m3n_subgroups(G).items() if k != "A"}
    a_subs = {S.partition.union(idx): idx for idx in a_subgroup_classes(S)}
    out.write("# A-subgroups\n")
    for members, idx in a_subs.items():
        labels = ", ".join(P.label(k) for k in sorted(idx))
        names = [name for name, mem in named.items() if mem == members]
        out.write(f"order {len(members)}: {labels}" + (f"  ({', '.join(names)})" if names else "") + "\n")
    for name, members in named.items():
        present = members in a_subs
        ok &= present
        out.write(f"{name} is {'an' if present else 'NOT an'} A-subgroup\n")

    aut = scheme_automorphisms(to_scheme(S), parallel=cfg.parallel)
    K = aut.stabilizer(0)
    for name, members in named.items():
        H = Subgroup(G, members)
        left = is_block_system(K, left_cosets(G, H))
        right = is_block_system(aut, right_cosets(G, H))
        ok &= left and right
        out.write(f"left cosets of {name} are blocks of Aut(A): {'yes' if left else 'no'}\n")
        out.write(f"right cosets of {name} are blocks of Aut(C(A)): {'yes' if right else 'no'}\n")

    if family == "m3n":
        whole = Subgroup(G, tuple(range(G.order)))
        H = Subgroup(G, named["H"])
        order = quotient_aut_order(S, whole, H)
        ok &= order == 2
        out.write(f"quotient S-ring over G/H has {quotient_sring(S, whole, H).rank} basic sets\n")
        out.write(f"quotient Aut order = {order}\n")

    verdict = is_schurian(S, parallel=cfg.parallel)
    ok &= not verdict.schurian
    out.write("# schurity\n")
    out.write(verdict.format(G))
    if verdict.mismatch_witness is not None:
        k, orb = verdict.mismatch_witness
        out.write(f"witness: basic set {P.label(k)} is not an orbit; it contains orbit "
                  + " ".join(G.format(x) for x in orb) + "\n")
    return 0 if ok else 1


def cmd_export(family: str, n: int, cfg: RunConfig, out) -> int:
    _, P = paper_partition(family, n, cap=cfg.order_cap)
    out.write(format_partition(P))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=["human", "machine"], default="human")
    common.add_argument("--cap", type=int, default=DEFAULT_ORDER_CAP, help="group order cap")
    common.add_argument("--parallel", action="store_true", help="concurrent automorphism search")

    inputs = argparse.ArgumentParser(add_help=False)
    inputs.add_argument("--group", help="metacyclic:p=<p>,n=<n> | cyclic:m=<m> | table:<path>")
    inputs.add_argument("--partition", help="partition file")

    parser = argparse.ArgumentParser(prog="schurkit", description="S-rings, Cayley schemes and schurity.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common, inputs], help="verify a partition and print its table")
    sub.add_parser("constants", parents=[common, inputs], help="machine-readable structure constants")
    sub.add_parser("aut", parents=[common, inputs], help="automorphism group of the Cayley scheme")
    p = sub.add_parser("schurity", parents=[common, inputs], help="decide schurity")
    p.add_argument("--expect", choices=["schurian", "non-schurian"])
    p = sub.add_parser("quotient", parents=[common, inputs], help="quotient S-ring over U/L")
    p.add_argument("--upper", help="generators of U (comma separated tokens, or G)")
    p.add_argument("--lower", help="generators of L (comma separated tokens)")
    for name, text in (("paper", "reproduce a family end to end"), ("export", "write a family as a partition file")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("family", choices=["m27", "m3n"])
        p.add_argument("--n", type=int, default=None)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    cfg = RunConfig(
        command=args.command,
        group_spec=getattr(args, "group", None),
        partition_path=getattr(args, "partition", None),
        expect=getattr(args, "expect", None),
        output_format=args.output_format,
        order_cap=args.cap,
        parallel=args.parallel,
    )
    try:
        if args.command in ("paper", "export"):
            n = args.n if args.n is not None else (3 if args.family == "m27" else 4)
            if args.family == "m3n" and n < 4:
                raise UsageError("m3n needs --n >= 4; for n = 3 use the m27 family")
            if args.family == "m27" and n != 3:
                raise UsageError("m27 has fixed n = 3")
            fn = cmd_paper if args.command == "paper" else cmd_export
            return fn(args.family, n, cfg, out)
        if args.command == "verify":
            return cmd_verify(cfg, out)
        if args.command == "constants":
            return cmd_constants(cfg, out)
        if args.command == "aut":
            return cmd_aut(cfg, out)
        if args.command == "schurity":
            return cmd_schurity(cfg, out, err)
        return cmd_quotient(cfg, args.upper, args.lower, out)
    except NotClosed as exc:
        err.write(f"not an S-ring: {getattr(exc, 'witness_text', exc)}\n")
        return 1
    except (UsageError, GroupError, PartitionError, SchemeError, OSError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
