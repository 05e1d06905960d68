"""Command-line surface.

Subcommands: ``dist`` prints one metric distance, ``ball`` traces metric
circles to CSV or SVG, ``convexity`` and ``inclusion`` and ``distortion``
emit JSON reports, ``conjecture`` runs the exploration harnesses. One
``--seed`` drives every random draw, so identical invocations produce
byte-identical outputs. Exit codes: 0 success, 1 usage error, 2
precondition or range error, 3 capability error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import analysis, balls, metrics, moebius
from .analysis import to_jsonable
from .errors import (
    CapabilityError,
    MembershipError,
    ParameterRangeError,
    PoleError,
)
from .geometry import (
    Domain,
    HalfSpace,
    PuncturedSpace,
    PuncturedUnitBall,
    SampledBoundary,
    UnitBall,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _point_type(s: str) -> np.ndarray:
    try:
        return np.array([float(p) for p in s.split(",")], dtype=float)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad point {s!r}: {exc}") from None


def _radius_type(s: str) -> list[float]:
    try:
        return [float(p) for p in s.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad radius {s!r}: {exc}") from None


@dataclass
class RunConfig:
    """One fully parsed invocation; the seed pins all sampling."""

    command: str
    domain_spec: str | None = None
    metric_name: str = "cassinian"
    center: np.ndarray | None = None
    point: np.ndarray | None = None
    radii: list[float] = field(default_factory=list)
    t: float | None = None
    theorem: str | None = None
    rays: int = 512
    samples: int = 1000
    seed: int = 0
    out: str | None = None
    fmt: str | None = None


def _build_parser() -> _Parser:
    parser = _Parser(prog="cassinian", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, metric=True):
        p.add_argument("--domain", required=True,
                       help="punctured-space:ax,ay | unit-ball | punctured-ball:ax,ay"
                            " | half-space | sampled:<csvfile>")
        if metric:
            p.add_argument("--metric", default="cassinian",
                           choices=["cassinian", "j", "rho", "k", "euclid"])
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)

    p = sub.add_parser("dist", help="print one metric distance")
    common(p)
    p.add_argument("--center", type=_point_type, required=True)
    p.add_argument("--point", type=_point_type, required=True)

    p = sub.add_parser("ball", help="trace metric circles to CSV or SVG")
    common(p)
    p.add_argument("--center", type=_point_type, required=True)
    p.add_argument("--radius", type=_radius_type, action="append", required=True)
    p.add_argument("--rays", type=int, default=512)
    p.add_argument("--format", dest="fmt", choices=["csv", "svg"], default=None)

    p = sub.add_parser("convexity", help="convexity report for one ball")
    common(p)
    p.add_argument("--center", type=_point_type, required=True)
    p.add_argument("--radius", type=_radius_type, action="append", required=True)
    p.add_argument("--rays", type=int, default=512)

    p = sub.add_parser("inclusion", help="verify one inclusion theorem")
    common(p, metric=False)
    p.add_argument("--theorem", required=True, choices=list(analysis.THEOREMS))
    p.add_argument("--center", type=_point_type, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--samples", type=int, default=1000)

    p = sub.add_parser("distortion", help="Mobius distortion experiment")
    common(p, metric=False)
    p.add_argument("--samples", type=int, default=1000)

    p = sub.add_parser("conjecture", help="conjecture exploration harnesses")
    common(p, metric=False)
    p.add_argument("--center", type=_point_type, default=None)
    p.add_argument("--radius", type=_radius_type, action="append", default=None)
    p.add_argument("--samples", type=int, default=10,
                   help="half-space: number of centers swept")
    p.add_argument("--rays", type=int, default=512)
    return parser


def _make_domain(spec: str) -> Domain:
    if spec == "unit-ball":
        return UnitBall()
    if spec == "half-space":
        return HalfSpace(2)
    if spec.startswith("punctured-space:"):
        return PuncturedSpace(_point_or_usage(spec.split(":", 1)[1]))
    if spec.startswith("punctured-ball:"):
        return PuncturedUnitBall(_point_or_usage(spec.split(":", 1)[1]))
    if spec.startswith("sampled:"):
        path = spec.split(":", 1)[1]
        try:
            pts = np.loadtxt(path, delimiter=",", ndmin=2)
        except OSError as exc:
            raise UsageError(f"cannot read boundary file: {exc}") from None
        return SampledBoundary(pts, closed=True)
    raise UsageError(f"unknown domain spec {spec!r}")


def _point_or_usage(s: str) -> np.ndarray:
    try:
        return np.array([float(p) for p in s.split(",")], dtype=float)
    except ValueError as exc:
        raise UsageError(f"bad coordinates {s!r}: {exc}") from None


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _emit_json(obj, out: str | None):
    _emit(json.dumps(to_jsonable(obj), indent=2) + "\n", out)


def _flat_radii(groups) -> list[float]:
    return [r for group in groups for r in group]


def run(args: argparse.Namespace) -> int:
    domain = _make_domain(args.domain)
    rng = np.random.default_rng(args.seed)

    if args.command == "dist":
        kind = metrics.METRIC_BY_NAME[args.metric]
        value = metrics.evaluate(kind, domain, args.center, args.point)
        _emit(f"{value:.15g}\n", args.out)
        return 0

    if args.command == "ball":
        kind = metrics.METRIC_BY_NAME[args.metric]
        radii = _flat_radii(args.radius)
        fmt = args.fmt
        if fmt is None:
            fmt = "svg" if (args.out or "").endswith(".svg") else "csv"
        traces = [
            balls.trace_2d(
                balls.BallSpec(domain, kind, args.center, r), rays=args.rays
            )
            for r in radii
        ]
        if fmt == "csv":
            if len(traces) != 1:
                raise UsageError("csv output takes exactly one --radius")
            import io

            buf = io.StringIO()
            balls.write_trace_csv(traces[0], buf)
            _emit(buf.getvalue(), args.out)
        else:
            import io

            buf = io.StringIO()
            balls.write_traces_svg(traces, buf)
            _emit(buf.getvalue(), args.out)
        return 0

    if args.command == "convexity":
        kind = metrics.METRIC_BY_NAME[args.metric]
        radii = _flat_radii(args.radius)
        if len(radii) != 1:
            raise UsageError("convexity takes exactly one --radius")
        ball = balls.BallSpec(domain, kind, args.center, radii[0])
        report = analysis.check_convexity_2d(ball, rays=args.rays)
        _emit_json(report, args.out)
        return 0

    if args.command == "inclusion":
        report = analysis.verify_inclusion(
            args.theorem, domain, args.center, args.t,
            samples=args.samples, rng=rng,
        )
        _emit_json(report, args.out)
        return 0

    if args.command == "distortion":
        if not isinstance(domain, PuncturedUnitBall):
            raise CapabilityError(
                "distortion runs on punctured-ball:ax,ay (the target puncture)"
            )
        a = domain.puncture
        pairs = _random_punctured_ball_pairs(rng, args.samples, a.size)
        report = moebius.distortion_experiment(a, pairs)
        payload = to_jsonable(report)
        payload.pop("ratios")
        _emit_json(payload, args.out)
        return 0

    if args.command == "conjecture":
        if isinstance(domain, HalfSpace):
            centers = _conjecture_centers(args.samples)
            estimate = analysis.explore_convexity_constant(
                domain, centers=centers, rays=args.rays
            )
            _emit_json(estimate, args.out)
            return 0
        if args.center is None:
            raise UsageError("starlikeness exploration needs --center")
        radii = _flat_radii(args.radius) if args.radius else [0.25, 0.5, 0.75, 1.0]
        report = analysis.explore_starlikeness(
            domain, args.center, radii, rays=args.rays
        )
        _emit_json(report, args.out)
        return 0

    raise UsageError(f"unknown command {args.command!r}")


def _random_punctured_ball_pairs(rng, count, dim):
    pts = []
    while len(pts) < 2 * count:
        p = rng.uniform(-1.0, 1.0, size=dim)
        n = np.linalg.norm(p)
        if 0.0 < n < 0.999:
            pts.append(p)
    return [(pts[2 * i], pts[2 * i + 1]) for i in range(count)]


def _conjecture_centers(count):
    base = [
        (0.0, 0.25), (0.0, 0.5), (0.0, 1.0), (0.0, 2.0), (0.0, 4.0),
        (1.0, 1.0), (-1.0, 1.0), (3.0, 0.5), (-2.0, 2.0), (0.7, 1.5),
    ]
    if count <= len(base):
        return base[:count]
    extra = [(0.3 * k, 0.75 + 0.5 * k) for k in range(count - len(base))]
    return base + extra


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return run(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (MembershipError, ParameterRangeError, PoleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapabilityError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return 3


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
