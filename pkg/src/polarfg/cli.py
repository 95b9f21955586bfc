"""Command-line interface: ``polarfg <command> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import channel, codec, graphs, polar

GRAPHS = {
    "fe": graphs.fe_full,
    "sc": graphs.fe_sc_full,
    "he": graphs.he_full,
    "base": graphs.base_graph,
}


class CliError(Exception):
    pass


def parse_frozen(m: int, text: str) -> polar.PolarCodeSpec:
    """Frozen-set syntax: ``explicit:0,1,2``, ``bec:<k>:<eps>``, ``rm:<k>`` or ``@path``."""
    if text.startswith("@"):
        body = Path(text[1:]).read_text().strip()
        if body.startswith("{"):
            code = polar.PolarCodeSpec.from_json(body)
            if code.m != m:
                raise CliError(f"code file has m={code.m}, expected {m}")
            return code
        text = body if ":" in body else "explicit:" + ",".join(body.replace(",", " ").split())
    kind, _, rest = text.partition(":")
    try:
        if kind == "explicit":
            labels = [int(t) for t in rest.split(",") if t.strip()]
            return polar.new_code(m, labels)
        if kind == "bec":
            k_s, _, eps_s = rest.partition(":")
            k, eps = int(k_s), float(eps_s)
            return polar.new_code(m, polar.frozen_bec(m, k, eps), f"bec:{eps}")
        if kind == "rm":
            return polar.new_code(m, polar.frozen_rm(m, int(rest)), "rm")
    except ValueError as e:
        raise CliError(str(e)) from None
    raise CliError(f"unrecognised frozen spec {text!r}")


def _bits(text: str, length: int, what: str) -> np.ndarray:
    s = text.replace(",", "").replace(" ", "")
    if len(s) != length or set(s) - {"0", "1"}:
        raise CliError(f"{what} must be {length} bits of 0/1, got {text!r}")
    return np.array([int(c) for c in s], dtype=np.uint8)


def _bitstr(bits) -> str:
    return "".join(str(int(b)) for b in bits)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_construct(args) -> int:
    g = GRAPHS[args.graph](args.m)
    fmt = args.format
    if fmt == "alist":
        payload = g.to_alist()
    elif fmt == "json":
        payload = g.to_json() + "\n"
    else:
        mat = g.biadjacency
        payload = mat.dumps() if args.out else "\n".join(mat.to_strings()) + "\n"
    summary = [f"graph={args.graph} m={args.m} n_var={g.n_var} n_chk={g.n_chk} edges={g.n_edges}"]
    counts = g.role_counts()
    for side in ("var", "chk"):
        summary.append(f"{side}_roles " + " ".join(f"{k}={v}" for k, v in sorted(counts[side].items())))
    _emit(payload, args.out)
    print("\n".join(summary), file=sys.stdout if args.out else sys.stderr)
    return 0


def cmd_girth(args) -> int:
    value = graphs.girth(GRAPHS[args.graph](args.m))
    print("infinite" if value == graphs.INFINITE_GIRTH else int(value))
    return 0


def cmd_code(args) -> int:
    code = parse_frozen(args.m, args.frozen)
    if args.show == "gen":
        mat = polar.generator(code)
    elif args.show == "pc":
        mat = polar.parity_check(code)
    elif args.show == "dual":
        d = polar.dual(code)
        print("frozen=" + ",".join(map(str, d.code.frozen)))
        print(f"k={d.code.k} reversed={'true' if d.reversed else 'false'}")
        return 0
    else:
        print(code.to_json())
        return 0
    if mat.rows:
        print("\n".join(mat.to_strings()))
    return 0


def cmd_encode(args) -> int:
    code = parse_frozen(args.m, args.frozen)
    info = _bits(args.info, code.k, "info")
    x = codec.systematic_encode(code, info) if args.systematic else codec.encode(code, info)
    print(_bitstr(x))
    return 0


def cmd_decode(args) -> int:
    code = parse_frozen(args.m, args.frozen)
    if (args.word is None) == (args.llrs is None):
        raise CliError("give exactly one of --word or --llrs")
    if args.word is not None:
        llr = np.where(_bits(args.word, code.n, "word") == 1, -codec.CLIP, codec.CLIP)
    else:
        try:
            llr = np.array([float(t) for t in args.llrs.split(",")])
        except ValueError:
            raise CliError(f"bad --llrs value {args.llrs!r}") from None
    if args.decoder == "sc":
        r = codec.sc_decode(code, llr, args.systematic)
    else:
        fn = codec.bp_decode_g if args.decoder == "bp-g" else codec.bp_decode_h
        r = fn(code, llr, codec.Schedule(args.schedule), args.iters, args.systematic)
    print(f"bits={_bitstr(r.bits)}")
    print(f"info={_bitstr(r.info_bits)}")
    print(f"converged={'true' if r.converged else 'false'}")
    print(f"iterations={r.iterations}")
    return 0


def cmd_simulate(args) -> int:
    code = parse_frozen(args.m, args.frozen)
    chans = [c for spec in args.channel for c in channel.parse_channel(spec)]
    cfg = channel.DecoderConfig(args.decoder, args.schedule, args.iters, args.systematic, args.all_zero)
    results = [channel.run_monte_carlo(code, ch, cfg, args.trials, args.seed) for ch in chans]
    text = channel.results_to_csv(results) if args.format == "csv" else channel.results_to_json(results) + "\n"
    _emit(text, args.out)
    return 0


def _add_code_args(p, default_m=None):
    p.add_argument("--m", type=int, required=default_m is None, default=default_m, help="exponent; n = 2^m")
    p.add_argument("--frozen", default="explicit:0" if default_m else None, required=default_m is None,
                   help="explicit:<labels> | bec:<k>:<eps> | rm:<k> | @path")


def _add_decoder_args(p):
    p.add_argument("--decoder", choices=("sc", "bp-g", "bp-h"), default="sc")
    p.add_argument("--schedule", choices=[s.value for s in codec.Schedule], default="flooding",
                   help="BP check schedule: flooding, or stagesweep (recursion levels deepest-first then back)")
    p.add_argument("--iters", type=int, default=codec.DEFAULT_MAX_ITERS, help="BP iteration cap")
    p.add_argument("--systematic", action="store_true", help="information bits sit at unfrozen coordinates")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polarfg", description="Polar code factor graphs, duality and decoding.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build an expanded factor graph",
                       description="Build the 4-cycle-free expansion (fe), the conventional SC graph (sc), "
                                   "the H-space transpose of fe (he) or the plain F(m) graph (base).")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--graph", choices=sorted(GRAPHS), default="fe")
    p.add_argument("--format", choices=("alist", "json", "matrix"), default="matrix")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("girth", help="exact girth of a graph",
                       description="Shortest cycle length by BFS from every node; 'infinite' for a tree.")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--graph", choices=sorted(GRAPHS), default="fe")
    p.set_defaults(func=cmd_girth)

    p = sub.add_parser("code", help="generator, parity check or dual of a code",
                       description="Show the generator (unfrozen rows of F(m)), the parity check (frozen rows of "
                                   "F(m)^T), the dual code's frozen set, or the JSON code spec.")
    _add_code_args(p)
    p.add_argument("--show", choices=("gen", "pc", "dual", "json"), default="gen")
    p.set_defaults(func=cmd_code)

    p = sub.add_parser("encode", help="encode information bits",
                       description="Encode with u F(m), or systematically by solving the parity checks for the "
                                   "frozen coordinates.")
    _add_code_args(p)
    p.add_argument("--info", required=True, help="information bits, e.g. 101")
    p.add_argument("--systematic", action="store_true")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode one received word",
                       description="SC decoding, or sum-product BP on the G-space (bp-g) or H-space (bp-h) graph.")
    _add_code_args(p)
    p.add_argument("--word", help="noiseless received bits (mapped to +-CLIP LLRs)")
    p.add_argument("--llrs", help="comma-separated channel LLRs")
    _add_decoder_args(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="Monte-Carlo BER/FER estimate",
                       description="Seeded Monte-Carlo simulation over BEC, BSC or BI-AWGN; one CSV row per "
                                   "channel parameter.")
    _add_code_args(p, default_m=2)
    p.add_argument("--channel", action="append", required=True, help="bec:<eps> | bsc:<p> | awgn:<sigma>; "
                   "comma-separate several parameters or repeat the flag")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    _add_decoder_args(p)
    p.add_argument("--all-zero", action="store_true", help="transmit the all-zero codeword only")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, OSError) as e:
        print(f"polarfg {args.command}: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
