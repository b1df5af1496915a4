"""Command-line front end.

Exit codes: 0 success, 1 bad input or usage, 2 a mathematical check failed.
Every report starts with a ``[config]`` section holding the resolved options.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import modlab as ml
from .errors import DomainError, NongenericQ, ParamMismatch, QDimerError, VerificationError
from .kasteleyn import check_inverse, inverse_csv, invert_K, partition_function
from .lattice import DomainSpec, load_domain
from .ncalg import NCParams, format_scalar, parse_scalar
from .render import heatmap_svg, tiling_svg
from .sampler import ExactSampler, GlauberChain, default_burnin, density_map
from .tilings import Tiling, TilingSpace, make_tiling, tiling_edges_text

log = logging.getLogger("qdimer")


class UsageError(DomainError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 1 instead of argparse's 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------------ parsing helpers

def _scalar(text: str) -> Fraction:
    try:
        return parse_scalar(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _point(text: str) -> tuple[int, int, int]:
    try:
        p = tuple(int(x) for x in text.replace(";", ",").split(","))
    except ValueError:
        p = ()
    if len(p) != 3:
        raise argparse.ArgumentTypeError(f"expected three integers like 0,1,0, got {text!r}")
    return p


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def resolve_params(args) -> NCParams:
    triple = (args.q12, args.q23, args.q31)
    if any(x is not None for x in triple):
        if any(x is None for x in triple):
            raise UsageError("give all of --q12 --q23 --q31 or none")
        p = NCParams(*triple)
        if args.q is not None and p.q != args.q:
            raise ParamMismatch(f"q12*q23*q31 = {format_scalar(p.q)} but --q {format_scalar(args.q)}")
        return p
    if args.q is None:
        raise UsageError("missing --q (or --q12 --q23 --q31)")
    if args.q == 0:
        raise UsageError("q must be nonzero")
    return NCParams.from_q(args.q)


class Report:
    def __init__(self, command: str):
        self.lines: list[str] = []
        self.config: dict[str, str] = {"command": command}

    def section(self, name: str) -> None:
        self.lines.append(f"[{name}]")

    def kv(self, key: str, value) -> None:
        self.lines.append(f"{key}: {value}")

    def line(self, text: str) -> None:
        self.lines.append(text)

    def text(self) -> str:
        head = ["[config]"] + [f"{k}: {v}" for k, v in self.config.items()]
        return "\n".join(head + self.lines) + "\n"


def _config(rep: Report, args, params: NCParams | None = None, domain: DomainSpec | None = None) -> None:
    for key in ("domain", "seed", "threads", "format", "out_dir"):
        v = getattr(args, key, None)
        if v is not None:
            rep.config[key] = str(v)
    if params is not None:
        rep.config["q12"], rep.config["q23"], rep.config["q31"] = (
            format_scalar(params.q12), format_scalar(params.q23), format_scalar(params.q31))
        rep.config["q"] = format_scalar(params.q)
    skip = {"command", "domain", "seed", "threads", "format", "out_dir", "q", "q12", "q23", "q31", "func", "verbose"}
    for k, v in sorted(vars(args).items()):
        if k not in skip and v is not None:
            rep.config[k] = ",".join(map(str, v)) if isinstance(v, (list, tuple)) else str(v)
    if domain is not None:
        rep.config["domain_name"] = domain.name
        rep.config["deg"] = str(domain.deg)
        rep.config["stable_range"] = str(domain.stable_range)


def _out_dir(args) -> Path:
    p = Path(args.out_dir or ".")
    p.mkdir(parents=True, exist_ok=True)
    return p


def _load(args) -> DomainSpec:
    return load_domain(args.domain)


def _pick_white(domain: DomainSpec, w) -> tuple[int, int, int]:
    if w is None:
        from .suite import best_white
        return best_white(domain)
    if tuple(w) not in domain.whites:
        raise UsageError(f"{tuple(w)} is not a white vertex of the domain")
    return tuple(w)


# ------------------------------------------------------------------ commands

def cmd_domain_check(args) -> Report:
    dom = _load(args)
    rep = Report("domain-check")
    _config(rep, args, domain=dom)
    s = dom.summary()
    rep.section("domain")
    for k in ("black_count", "white_count", "deg", "stable_range", "tileable"):
        rep.kv(k, s[k])
    rep.kv("horizontal_heights", " ".join(f"{h}({c})" for h, c in s["horizontal_heights"]))
    rep.section("segments")
    for line in s["segments"]:
        rep.line(line)
    return rep


def cmd_partition(args) -> Report:
    dom = _load(args)
    p = resolve_params(args)
    rep = Report("partition")
    _config(rep, args, p, dom)
    z = partition_function(dom, p)
    rep.section("result")
    rep.line(f"Z = {format_scalar(z)}")
    rep.kv("gauge_invariant", "yes (normalized by the minimal tiling's weight)")
    return rep


def cmd_inverse(args) -> Report:
    dom = _load(args)
    p = resolve_params(args)
    rep = Report("inverse")
    _config(rep, args, p, dom)
    sys_ = invert_K(dom, p)
    if not check_inverse(sys_):
        raise VerificationError("K K^-1 != 1")
    csv = inverse_csv(sys_)
    rep.section("result")
    rep.kv("Z", format_scalar(sys_.Z))
    rep.kv("gauge_invariant", "no (entries depend on the diagonal gauge)")
    if args.format == "csv" or args.out_dir:
        path = _out_dir(args) / "inverse.csv"
        path.write_text(csv)
        rep.kv("csv", path)
    else:
        rep.section("csv")
        rep.lines.extend(csv.rstrip("\n").splitlines())
    return rep


def cmd_kernel(args) -> Report:
    dom = _load(args)
    p = resolve_params(args)
    rep = Report("kernel")
    _config(rep, args, p, dom)
    Q = ml.build_Q(dom, p) if args.w is None and not args.marked else ml.build_Qw(dom, p, _pick_white(dom, args.w))
    top = Q.stable_range
    degrees = args.degrees if args.degrees is not None else list(range(0, top + 1))
    rep.section("dimensions")
    if Q.w is not None:
        rep.kv("w", Q.w)
    ok = True
    for d in degrees:
        dim_m = Q.module.dim(d)
        dim = Q.dim(d)
        exp = Q.expected_dim(d)
        inside = d <= top
        flag = ("ok" if dim == exp else "MISMATCH") if inside else "outside stable range"
        ok &= dim == exp or not inside
        rep.line(f"d={d} dim_M={dim_m} dim_Q={dim} expected={exp} {flag}")
    if not ok:
        raise VerificationError("kernel dimensions differ from the predicted Hilbert function\n" + rep.text())
    return rep


def cmd_resolution(args) -> Report:
    dom = _load(args)
    p = resolve_params(args)
    rep = Report("resolution")
    _config(rep, args, p, dom)
    Q = ml.build_Q(dom, p) if args.w is None and not args.marked else ml.build_Qw(dom, p, _pick_white(dom, args.w))
    try:
        data = ml.generators_relations(Q, args.max_degree)
    except NongenericQ as exc:
        if exc.observed is not None:
            rep.section("observed")
            rep.line(exc.observed.summary())
        raise NongenericQ(f"{exc}\n{rep.text()}") from None
    rep.section("result")
    if Q.w is not None:
        rep.kv("w", Q.w)
    rep.line(data.summary())
    rep.kv("checked_degrees", ",".join(map(str, data.checked_degrees)))
    for n in data.notes:
        rep.kv("note", n)
    rep.section("R")
    for i, row in enumerate(data.relation_matrix):
        for j, f in enumerate(row):
            recs = " ".join(f"({a1},{a2},{a3},{c})" for a1, a2, a3, c in f.records())
            rep.line(f"R[{i}][{j}] = {recs or '0'}")
    return rep


def cmd_boundary(args) -> Report:
    dom = _load(args)
    p = resolve_params(args)
    rep = Report("boundary")
    _config(rep, args, p, dom)
    Q = ml.build_Q(dom, p)
    found = ml.boundary_decomposition(Q, args.axis, args.degree)
    rep.section("result")
    rep.kv("heights", " ".join(str(x.height) for x in sorted(found, key=lambda x: x.height)))
    for x in found:
        rep.line(f"point axis={x.axis} height={x.height} ratio={format_scalar(x.ratio)} "
                 f"raw_ratio={format_scalar(x.raw_ratio)} degree={x.degree}")
    if args.axis == 3:
        expected = sorted(h for h, _ in dom.horizontal_heights)
        got = sorted(x.height for x in found)
        rep.kv("boundary_heights", " ".join(map(str, expected)))
        if got != expected:
            raise VerificationError(f"recovered heights {got} differ from boundary heights {expected}\n" + rep.text())
    return rep


def cmd_annihilator(args) -> Report:
    dom = _load(args)
    p = resolve_params(args)
    rep = Report("annihilator")
    w = _pick_white(dom, args.w)
    _config(rep, args, p, dom)
    Qw = ml.build_Qw(dom, p, w)
    i, fs = ml.annihilator(Qw, args.max_degree)
    rep.section("result")
    rep.kv("w", w)
    rep.kv("w_stable_range", Qw.stable_range)
    rep.kv("degree", i)
    rep.kv("kernel_dim", len(fs))
    rep.kv("hilbert_bound_degree", ml.hilbert_bound_degree(dom.deg))
    for k, f in enumerate(fs):
        ok = ml.annihilates_column(Qw, f)
        rep.line(f"f[{k}] = " + " ".join(f"({a1},{a2},{a3},{c})" for a1, a2, a3, c in f.records()))
        rep.kv(f"f[{k}].annihilates_column", ok)
        if not ok:
            raise VerificationError("annihilator does not kill the column\n" + rep.text())
        for axis, coeffs in ml.axis_intersections(p, f).items():
            rep.kv(f"f[{k}].on_x{axis}=0", " ".join(format_scalar(c) for c in coeffs) or "0")
    return rep


def cmd_move(args) -> Report:
    dom = _load(args)
    p = resolve_params(args)
    rep = Report("move")
    _config(rep, args, p, dom)
    pt, verdict = ml.verify_move(dom, p, args.segment)
    rep.section("result")
    rep.kv("segment", dom.segment(args.segment).describe())
    rep.kv("height", pt.height)
    rep.kv("ratio", format_scalar(pt.ratio))
    for d, n in verdict.dims.items():
        raw = verdict.raw_ratios.get(d)
        rep.line(f"d={d} dim(Q/Q')={n} raw_ratio={format_scalar(raw) if raw is not None else '-'}")
    rep.kv("verdict", "pass" if verdict.passed else "fail")
    rep.kv("detail", verdict.detail)
    if not verdict.passed:
        raise VerificationError("boundary move check failed\n" + rep.text())
    return rep


def cmd_sample(args) -> Report:
    dom = _load(args)
    p = resolve_params(args)
    rep = Report("sample")
    _config(rep, args, p, dom)
    space = TilingSpace(dom)
    tilings: list[Tiling] = []
    if args.method == "exact":
        sampler = ExactSampler(invert_K(dom, p))
        rng = random.Random(args.seed)
        base = space.raw_volume(space.min_matching())
        tilings = [make_tiling(space, sampler.sample(rng), base) for _ in range(args.count)]
    else:
        if p.q <= 0:
            raise UsageError("Glauber dynamics needs q > 0")
        chain = GlauberChain(space, float(p.q), args.seed)
        burn = default_burnin(space) if args.burnin is None else args.burnin
        chain.run(burn)
        for k in range(args.count):
            if k or args.steps:
                chain.run(args.steps if args.steps is not None else len(space.faces))
            tilings.append(Tiling(chain.matching(), chain.volume))
    for k, t in enumerate(tilings):
        rep.section(f"tiling {k}")
        rep.lines.extend(tiling_edges_text(t).rstrip("\n").splitlines())
    if args.format == "svg":
        path = _out_dir(args) / "sample.svg"
        path.write_text(tiling_svg(space, space.to_array(tilings[-1].matching),
                                   comment=f"{dom.name} q={format_scalar(p.q)} seed={args.seed}"))
        rep.section("files")
        rep.kv("svg", path)
    return rep


def cmd_heatmap(args) -> Report:
    dom = _load(args)
    p = resolve_params(args)
    rep = Report("heatmap")
    _config(rep, args, p, dom)
    space = TilingSpace(dom)
    dm = density_map(dom, p if args.method == "exact" else p.q, args.samples, args.seed, args.method,
                     burnin=args.burnin, thin=args.steps, chains=args.chains, threads=args.threads, space=space)
    out = _out_dir(args)
    stem = args.name or f"heatmap_{args.method}"
    csv_path = out / f"{stem}.csv"
    csv_path.write_text(dm.to_csv())
    svg_path = out / f"{stem}.svg"
    svg_path.write_text(heatmap_svg(space, dm.orientation_fractions(), args.orientation,
                                    comment=f"{dom.name} q={format_scalar(p.q)} seed={args.seed} n={args.samples}"))
    rep.section("files")
    rep.kv("csv", csv_path)
    rep.kv("svg", svg_path)
    return rep


def cmd_selftest(args) -> Report:
    from .acceptance import run_all
    rep = Report("selftest")
    _config(rep, args)
    out = Path(args.out_dir) if args.out_dir else None
    rep.section("criteria")
    results = run_all(args.criteria, args.seed, out, report=rep.line)
    passed = sum(r.passed for r in results)
    rep.kv("passed", f"{passed}/{len(results)}")
    if passed != len(results):
        raise VerificationError("some acceptance criteria failed\n" + rep.text())
    return rep


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=0, help="random seed (recorded in every output)")
    g.add_argument("--threads", type=int, default=1, help="worker threads for independent sampling chains")
    g.add_argument("--out-dir", default=None, help="directory for written artifacts")
    g.add_argument("--format", choices=("text", "csv", "svg"), default="text")
    g.add_argument("-v", "--verbose", action="store_true")

    def with_domain(p):
        p.add_argument("--domain", required=True, help="domain file (lines 'A c1 c2 c3' / 'B c1 c2 c3')")

    def with_q(p):
        p.add_argument("--q", type=_scalar, default=None, help="q; gauge (q,1,1) unless the triple is given")
        p.add_argument("--q12", type=_scalar, default=None)
        p.add_argument("--q23", type=_scalar, default=None)
        p.add_argument("--q31", type=_scalar, default=None)

    parser = _Parser(prog="qdimer", description="q-weighted lozenge tilings and their noncommutative modules")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("domain-check", parents=[common], help="validate a domain file and print its boundary data")
    with_domain(p)
    p.set_defaults(func=cmd_domain_check)

    p = sub.add_parser("partition", parents=[common], help="partition function Z(q)")
    with_domain(p), with_q(p)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("inverse", parents=[common], help="exact inverse Kasteleyn matrix as CSV")
    with_domain(p), with_q(p)
    p.set_defaults(func=cmd_inverse)

    p = sub.add_parser("kernel", parents=[common], help="dimensions of Q_d (or Q^w_d with --w/--marked)")
    with_domain(p), with_q(p)
    p.add_argument("--degrees", type=_int_list, default=None)
    p.add_argument("--w", type=_point, default=None, help="white vertex x1,x2,x3 for Q^w")
    p.add_argument("--marked", action="store_true", help="use Q^w with an automatically chosen w")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("resolution", parents=[common], help="minimal generators and relations")
    with_domain(p), with_q(p)
    p.add_argument("--w", type=_point, default=None)
    p.add_argument("--marked", action="store_true")
    p.add_argument("--max-degree", type=int, default=3)
    p.set_defaults(func=cmd_resolution)

    p = sub.add_parser("boundary", parents=[common], help="point-module decomposition of Q / x_axis Q")
    with_domain(p), with_q(p)
    p.add_argument("--axis", type=int, choices=(1, 2, 3), default=3)
    p.add_argument("--degree", type=int, default=1)
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("annihilator", parents=[common], help="lowest-degree difference operators killing a K^-1 column")
    with_domain(p), with_q(p)
    p.add_argument("--w", type=_point, default=None)
    p.add_argument("--max-degree", type=int, default=4)
    p.set_defaults(func=cmd_annihilator)

    p = sub.add_parser("move", parents=[common], help="verify a horizontal boundary move")
    with_domain(p), with_q(p)
    p.add_argument("--segment", type=int, required=True, help="segment index from domain-check")
    p.set_defaults(func=cmd_move)

    p = sub.add_parser("sample", parents=[common], help="random tilings as edge lists")
    with_domain(p), with_q(p)
    p.add_argument("--method", choices=("exact", "mcmc"), default="exact")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--steps", type=int, default=None, help="Glauber steps between samples (default one sweep)")
    p.add_argument("--burnin", type=int, default=None, help="Glauber burn-in steps (default 10 sweeps per face)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("heatmap", parents=[common], help="orientation frequencies as SVG and CSV")
    with_domain(p), with_q(p)
    p.add_argument("--method", choices=("exact", "mcmc"), default="mcmc")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--steps", type=int, default=None, help="Glauber steps between observations (default one sweep)")
    p.add_argument("--burnin", type=int, default=None)
    p.add_argument("--chains", type=int, default=1)
    p.add_argument("--orientation", type=int, choices=(1, 2, 3), default=None,
                   help="shade by this orientation (default: dominant)")
    p.add_argument("--name", default=None, help="file stem for the outputs")
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance criteria")
    p.add_argument("--criteria", type=_int_list, default=None)
    p.set_defaults(func=cmd_selftest)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    for name in ("samples", "count"):
        if getattr(args, name, 1) is not None and getattr(args, name, 1) < 1:
            print(f"qdimer: error: --{name} must be at least 1", file=sys.stderr)
            return 1
    if getattr(args, "threads", 1) < 1:
        print("qdimer: error: --threads must be at least 1", file=sys.stderr)
        return 1
    try:
        rep = args.func(args)
    except DomainError as exc:
        print(f"qdimer: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except VerificationError as exc:
        print(f"qdimer: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except QDimerError as exc:
        print(f"qdimer: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"qdimer: error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(rep.text())
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
