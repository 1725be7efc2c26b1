"""
cli.py

Command-line entry point.

Usage examples:
  python cli.py table --d 2-5
  python cli.py spin-scan --spins 1/2,1,3/2,2 --out fig_spin.csv
  python cli.py power --gate sum --d 2 --method schmidt,trace
  python cli.py power --gate sum --d 2 --method mc --entropy von-neumann --samples 20000 --seed 7
  python cli.py verify --suite prop1 --d 3 --trials 100 --seed 1
  python cli.py asymptotics --d-max 64

Exit codes: 0 all checks pass, 1 a tolerance check failed, 2 usage or
configuration error. Report data goes to stdout (or --out); logs go to stderr.
"""

import argparse
import logging
import math
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from dotenv import load_dotenv

try:
    from .tensor_core import MultipartiteOperator
    from .gate_library import (
        ControlledGate,
        GateKind,
        GateSpec,
        cphase,
        dsum,
        fourier,
        haar_random_unitary,
        local_product,
        matrix_power,
        phase_deviation,
        spin_gate,
        sum_gate,
        swap,
    )
    from .operator_entanglement import (
        find_maxima,
        linear_op_ent_via_trace,
        linear_operator_entanglement,
        operator_schmidt,
        spin_curve,
        spin_label,
        spin_linear_entanglement,
        spin_scan,
        theta_grid,
    )
    from .entangling_power import (
        Check,
        EntropyKind,
        Method,
        asymptotic_table,
        bounds_check,
        closed_form_operator_entanglement,
        closed_form_power,
        compute_power,
        ep_assisted_schmidt,
        ep_assisted_trace,
        ep_unassisted_schmidt,
        ep_unassisted_trace,
        prop1_check,
    )
    from .logging_config import configure_logging
    from .reports import (
        ASYMPTOTIC_COLUMNS,
        CHECK_COLUMNS,
        FORMATS,
        MAXIMA_COLUMNS,
        POWER_COLUMNS,
        SPIN_COLUMNS,
        TABLE_COLUMNS,
        render,
        write_output,
    )
    from .settings import Settings, load_settings, new_seed
except ImportError:
    from tensor_core import MultipartiteOperator
    from gate_library import (
        ControlledGate,
        GateKind,
        GateSpec,
        cphase,
        dsum,
        fourier,
        haar_random_unitary,
        local_product,
        matrix_power,
        phase_deviation,
        spin_gate,
        sum_gate,
        swap,
    )
    from operator_entanglement import (
        find_maxima,
        linear_op_ent_via_trace,
        linear_operator_entanglement,
        operator_schmidt,
        spin_curve,
        spin_label,
        spin_linear_entanglement,
        spin_scan,
        theta_grid,
    )
    from entangling_power import (
        Check,
        EntropyKind,
        Method,
        asymptotic_table,
        bounds_check,
        closed_form_operator_entanglement,
        closed_form_power,
        compute_power,
        ep_assisted_schmidt,
        ep_assisted_trace,
        ep_unassisted_schmidt,
        ep_unassisted_trace,
        prop1_check,
    )
    from logging_config import configure_logging
    from reports import (
        ASYMPTOTIC_COLUMNS,
        CHECK_COLUMNS,
        FORMATS,
        MAXIMA_COLUMNS,
        POWER_COLUMNS,
        SPIN_COLUMNS,
        TABLE_COLUMNS,
        render,
        write_output,
    )
    from settings import Settings, load_settings, new_seed

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

TABLE_GATES = (GateKind.SUM, GateKind.CPHASE, GateKind.DSUM, GateKind.SWAP)
ASYMPTOTIC_GATES = (GateKind.SUM, GateKind.DSUM, GateKind.SWAP)
VERIFY_SUITES = ("prop1", "identities", "bounds", "routes", "spin")


# Argument parsing helpers


def parse_int_list(text: str) -> Tuple[int, ...]:
    """``3``, ``2,3,4`` or ``2-5``."""
    out: List[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        lo, sep, hi = part.partition("-")
        if sep:
            a, b = int(lo), int(hi)
            if b < a:
                raise ValueError(f"empty range {part!r}")
            out.extend(range(a, b + 1))
        else:
            out.append(int(part))
    if not out:
        raise ValueError(f"no values in {text!r}")
    return tuple(out)


def parse_spins(text: str) -> Tuple[int, ...]:
    """Spins such as ``1/2,1,3/2`` as dimensions d = 2j + 1."""
    dims = []
    for part in text.split(","):
        j = Fraction(part.strip())
        d = 2 * j + 1
        if j <= 0 or d.denominator != 1:
            raise ValueError(f"{part.strip()!r} is not a positive half-integer spin")
        dims.append(int(d))
    return tuple(dims)


def parse_gate_kinds(text: str) -> Tuple[GateKind, ...]:
    try:
        return tuple(GateKind(t.strip().lower()) for t in text.split(",") if t.strip())
    except ValueError:
        raise ValueError(f"unknown gate in {text!r}") from None


def parse_methods(text: str) -> Tuple[Method, ...]:
    try:
        return tuple(Method.parse(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise ValueError(f"unknown method in {text!r}") from None


@dataclass(frozen=True)
class RunConfig:
    command: str
    settings: Settings
    seed: int
    fmt: str = "csv"
    out: Optional[str] = None
    gates: Tuple[str, ...] = ()
    d_values: Tuple[int, ...] = ()
    theta_points: int = 2001
    maxima_out: Optional[str] = None
    samples: int = 20000
    methods: Tuple[Method, ...] = (Method.SCHMIDT,)
    entropy: EntropyKind = EntropyKind.LINEAR
    assisted: bool = False
    suite: Optional[str] = None
    trials: int = 20
    mc_samples: int = 0
    timing: bool = False

    @property
    def trace_cap(self) -> int:
        return self.settings.assisted_trace_cap

    @property
    def numeric_tol(self) -> float:
        return self.settings.numeric_tol

    @property
    def exact_tol(self) -> float:
        return self.settings.exact_tol


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", dest="fmt", choices=FORMATS, default="csv")
    p.add_argument("--out", default=None, help="Output file (default: stdout)")
    p.add_argument("--seed", type=int, default=None, help="Master seed (default: ENTPOWER_SEED or fresh)")
    p.add_argument("--workers", type=int, default=None, help="Monte Carlo worker threads")
    p.add_argument("--config", default=None, help="YAML file overlaying entpower.yml")
    p.add_argument("--trace-cap", type=int, default=None, help="Largest d for the assisted trace route")
    p.add_argument("--tol", type=float, default=None, help="Numeric tolerance override")
    p.add_argument("--verbose", action="store_true", help="Log at INFO level")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entpower", description="Entangling power of two-qudit gates")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="Closed forms against computed E, e_p and e_p^anc")
    _add_common(p)
    p.add_argument("--d", default="2-5", help="Dimensions, e.g. 2-5 or 2,3")
    p.add_argument("--gates", default=",".join(g.value for g in TABLE_GATES))

    p = sub.add_parser("spin-scan", help="E(U(theta)) curves and their maxima")
    _add_common(p)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--spins", default=None, help="Spins, e.g. 1/2,1,3/2,2")
    group.add_argument("--dims", default=None, help="Dimensions, e.g. 2,3,4,5")
    p.add_argument("--points", type=int, default=None, help="Theta grid points on [0, 2 pi]")
    p.add_argument("--maxima-out", default=None, help="Write detected maxima to this file")

    p = sub.add_parser("power", help="Entangling power of one gate")
    _add_common(p)
    p.add_argument("--gate", required=True, help="sum, sum:21, dsum, swap, cphase, spin:<theta>, controlled:<file>, ...")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--assisted", action="store_true")
    p.add_argument("--method", default="schmidt", help="Comma list of trace, schmidt, mc, closed-form")
    p.add_argument("--entropy", default="linear", choices=[e.value for e in EntropyKind])
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--timing", action="store_true", help="Fill runtime_ms (output no longer reproducible)")

    p = sub.add_parser("verify", help="Run a verification suite")
    _add_common(p)
    p.add_argument("--suite", required=True, choices=VERIFY_SUITES)
    p.add_argument("--d", default=None, help="Dimensions (suite-specific default)")
    p.add_argument("--gate", default=None, help="Gate(s) to check instead of the suite default")
    p.add_argument("--trials", type=int, default=20, help="Random draws per dimension")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--points", type=int, default=None)

    p = sub.add_parser("asymptotics", help="Large-d bar entangling powers against leading terms")
    _add_common(p)
    p.add_argument("--gates", default=",".join(g.value for g in ASYMPTOTIC_GATES))
    p.add_argument("--d-max", type=int, default=None)
    p.add_argument("--d-list", default=None, help="Explicit ascending dimensions")
    p.add_argument("--mc-samples", type=int, default=0, help="Monte Carlo von Neumann columns for d <= 4")
    return parser


_SUITE_D_DEFAULTS = {
    "prop1": "2-4",
    "identities": "2-6",
    "bounds": "2,3",
    "routes": "2,3",
    "spin": "2-5",
}


def build_run_config(args: argparse.Namespace, settings: Settings) -> RunConfig:
    settings = settings.with_overrides(
        workers=args.workers,
        assisted_trace_cap=args.trace_cap,
        numeric_tol=args.tol,
        seed=args.seed,
    )
    seed = settings.seed if settings.seed is not None else new_seed()
    common = dict(command=args.command, settings=settings, seed=seed, fmt=args.fmt, out=args.out)

    if args.command == "table":
        return RunConfig(
            **common,
            gates=tuple(g.value for g in parse_gate_kinds(args.gates)),
            d_values=parse_int_list(args.d),
        )
    if args.command == "spin-scan":
        if args.spins:
            dims = parse_spins(args.spins)
        elif args.dims:
            dims = parse_int_list(args.dims)
        else:
            dims = (2, 3, 4, 5)
        return RunConfig(
            **common,
            d_values=dims,
            theta_points=args.points or settings.theta_grid_points,
            maxima_out=args.maxima_out,
        )
    if args.command == "power":
        methods = parse_methods(args.method)
        return RunConfig(
            **common,
            gates=(args.gate,),
            d_values=(args.d,) if args.d is not None else (),
            samples=args.samples or settings.mc_samples,
            methods=methods,
            entropy=EntropyKind(args.entropy),
            assisted=args.assisted,
            timing=args.timing,
        )
    if args.command == "verify":
        if args.trials < 1:
            raise ValueError(f"--trials must be >= 1, got {args.trials}")
        return RunConfig(
            **common,
            suite=args.suite,
            gates=tuple(g.strip() for g in args.gate.split(",")) if args.gate else (),
            d_values=parse_int_list(args.d or _SUITE_D_DEFAULTS[args.suite]),
            trials=args.trials,
            samples=args.samples or settings.mc_samples,
            theta_points=args.points or settings.theta_grid_points,
        )
    # asymptotics
    if args.d_list:
        d_values = parse_int_list(args.d_list)
    else:
        d_max = args.d_max or settings.asymptotics_d_max
        d_values = tuple(2**k for k in range(1, int(math.log2(d_max)) + 1)) if d_max >= 2 else ()
    if not d_values or max(d_values) > settings.asymptotics_d_max:
        raise ValueError(f"asymptotics needs 2 <= d <= {settings.asymptotics_d_max}")
    if min(d_values) < 2 or list(d_values) != sorted(set(d_values)):
        raise ValueError(f"--d-list must be strictly ascending dimensions >= 2, got {list(d_values)}")
    return RunConfig(
        **common,
        gates=tuple(g.value for g in parse_gate_kinds(args.gates)),
        d_values=d_values,
        mc_samples=args.mc_samples,
    )


def _emit(config: RunConfig, rows, columns, out: Optional[str] = None) -> None:
    write_output(render(rows, columns, config.fmt), out if out is not None else config.out)


# Commands


def cmd_gate_table(config: RunConfig) -> int:
    """Closed forms next to the Schmidt and trace routes for E, e_p and e_p^anc."""
    rows = []
    failures = 0
    for name in config.gates:
        kind = GateKind(name)
        for d in config.d_values:
            u = GateSpec(kind, d).build()
            cells = [
                ("E", closed_form_operator_entanglement(kind, d),
                 lambda: linear_operator_entanglement(u), lambda: linear_op_ent_via_trace(u)),
                ("e_p", closed_form_power(kind, d, False).value,
                 lambda: ep_unassisted_schmidt(u), lambda: ep_unassisted_trace(u)),
                ("e_p_anc", closed_form_power(kind, d, True).value,
                 lambda: ep_assisted_schmidt(u),
                 (lambda: ep_assisted_trace(u, config.trace_cap)) if d <= config.trace_cap else None),
            ]
            for quantity, exact, schmidt_route, trace_route in cells:
                expected = float(exact)
                schmidt = schmidt_route()
                trace = trace_route() if trace_route is not None else None
                note = ""
                if trace_route is None:
                    note = f"trace route skipped: d > {config.trace_cap}"
                    logger.warning("%s d=%d %s: %s", name, d, quantity, note)
                deviation = max(abs(v - expected) for v in (schmidt, trace) if v is not None)
                if deviation > config.numeric_tol:
                    failures += 1
                    note = (note + "; " if note else "") + "deviation above tolerance"
                rows.append({
                    "gate": name, "d": d, "quantity": quantity, "exact": str(exact),
                    "closed_form": expected, "schmidt": schmidt, "trace": trace,
                    "deviation": deviation, "note": note,
                })
    _emit(config, rows, TABLE_COLUMNS)
    logger.info("table: %d cells, %d above tolerance", len(rows), failures)
    return EXIT_FAILED if failures else EXIT_OK


def cmd_spin_scan(config: RunConfig) -> int:
    grid = theta_grid(config.theta_points)
    _emit(config, spin_scan(config.d_values, grid), SPIN_COLUMNS)
    maxima = []
    for d in config.d_values:
        for m in find_maxima(d, grid, spin_curve(d, grid), periodic=True):
            logger.info("j=%s: maximum E=%r at theta=%r", spin_label(d), m.value, m.theta)
            row = asdict(m)
            row["j"] = spin_label(d)
            maxima.append(row)
    if config.maxima_out:
        _emit(config, maxima, MAXIMA_COLUMNS, out=config.maxima_out)
    return EXIT_OK


def cmd_power(config: RunConfig) -> int:
    d = config.d_values[0] if config.d_values else None
    spec = GateSpec.parse(config.gates[0], d)
    logger.info("power: %s d=%d assisted=%s seed=%d", spec, spec.d, config.assisted, config.seed)
    reports = [
        compute_power(
            spec,
            assisted=config.assisted,
            method=method,
            entropy=config.entropy,
            samples=config.samples,
            seed=config.seed,
            workers=config.settings.workers,
            chunk_size=config.settings.mc_chunk_size,
            trace_cap=config.trace_cap,
            timing=config.timing,
        )
        for method in config.methods
    ]
    _emit(config, reports, POWER_COLUMNS)
    return EXIT_OK


def _check_row(suite: str, check: Check) -> Dict:
    row = check.as_dict()
    row["suite"] = suite
    return row


def _aggregate(name: str, d: int, checks: Sequence[Check], tol: float, detail: str) -> Check:
    """Worst case over many draws of the same check."""
    worst = None
    for c in checks:
        dev = c.deviation if c.deviation is not None else math.inf
        if worst is None or dev > worst[0]:
            worst = (dev, c)
    dev, c = worst
    return Check(name, c.value, c.expected, tol, all(x.passed for x in checks), d, detail)


def _suite_prop1(config: RunConfig) -> List[Check]:
    tol = config.numeric_tol
    checks: List[Check] = []
    if config.gates:
        for d in config.d_values:
            for text in config.gates:
                spec = GateSpec.parse(text, d)
                report = prop1_check(spec, tol, config.trace_cap)
                kind = "controlled" if report.controlled else "non-controlled"
                checks.extend(
                    Check(c.name, c.value, c.expected, c.tolerance, c.passed, d,
                          f"{spec} ({kind}){': ' + c.detail if c.detail else ''}")
                    for c in report.checks
                )
        return checks

    rng = np.random.default_rng(config.seed)
    for d in config.d_values:
        by_name: Dict[str, List[Check]] = {}
        for _ in range(config.trials):
            report = prop1_check(ControlledGate.random(d, rng), tol, config.trace_cap)
            for c in report.checks:
                by_name.setdefault(c.name, []).append(c)
        detail = f"{config.trials} Haar-random controlled gates"
        checks.extend(_aggregate(name, d, cs, tol, detail) for name, cs in by_name.items())

        # orthogonal blocks reach the SUM values
        sum_ep = float(closed_form_power(GateKind.SUM, d).value)
        sum_anc = float(closed_form_power(GateKind.SUM, d, True).value)
        ortho, ortho_anc = [], []
        for _ in range(config.trials):
            u = ControlledGate.random_orthogonal(d, rng).operator()
            ortho.append(Check.close("orthogonal_blocks_ep", ep_unassisted_schmidt(u), sum_ep, tol, d))
            ortho_anc.append(Check.close("orthogonal_blocks_ep_anc", ep_assisted_schmidt(u), sum_anc, tol, d))
        detail = f"{config.trials} orthogonal-block controlled gates against SUM"
        checks.append(_aggregate("orthogonal_blocks_ep", d, ortho, tol, detail))
        checks.append(_aggregate("orthogonal_blocks_ep_anc", d, ortho_anc, tol, detail))
    return checks


def _suite_identities(config: RunConfig) -> List[Check]:
    tol = config.exact_tol
    rng = np.random.default_rng(config.seed)
    checks: List[Check] = []
    for d in config.d_values:
        f = fourier(d)
        sum_via_cphase = local_product(None, f.adjoint()) @ cphase(d) @ local_product(None, f)
        checks.append(Check.close(
            "SUM = (I x F^-1) CPHASE (I x F)", phase_deviation(sum_gate(d), sum_via_cphase), 0.0, tol, d,
        ))
        swap_via_sums = local_product(matrix_power(f, 2), None) @ sum_gate(d) @ dsum(d)
        checks.append(Check.close(
            "S12 = (F^2 x I) SUM DSUM", phase_deviation(swap(d), swap_via_sums), 0.0, tol, d,
        ))
        checks.append(Check.close(
            "U(2 pi/d) = CPHASE", phase_deviation(spin_gate(2 * math.pi / d, d), cphase(d)), 0.0, tol, d,
        ))
        a, b = haar_random_unitary(d, rng), haar_random_unitary(d, rng)
        lhs = local_product(a, b) @ swap(d)
        rhs = swap(d) @ local_product(b, a)
        checks.append(Check.close(
            "(A x B) S12 = S12 (B x A)", phase_deviation(lhs, rhs, exact=True), 0.0, tol, d, "no phase freedom",
        ))
        adjoint_checks = []
        for _ in range(config.trials):
            u = MultipartiteOperator(haar_random_unitary(d * d, rng).data, (d, d))
            adjoint_checks.append(Check.close(
                "E(U) = E(U+)",
                linear_operator_entanglement(u),
                linear_operator_entanglement(u.adjoint()),
                config.numeric_tol,
                d,
            ))
        checks.append(_aggregate(
            "E(U) = E(U+)", d, adjoint_checks, config.numeric_tol, f"{config.trials} Haar-random unitaries",
        ))
        checks.append(Check.close(
            "E(DSUM) = E(SWAP)",
            linear_operator_entanglement(dsum(d)),
            linear_operator_entanglement(swap(d)),
            config.numeric_tol,
            d,
        ))
    return checks


# gate -> (unassisted, assisted) maximal von Neumann generation
_KNOWN_MAXIMA: Dict[GateKind, Callable[[int], Tuple[float, float]]] = {
    GateKind.SUM: lambda d: (math.log(d), math.log(d)),
    GateKind.CPHASE: lambda d: (math.log(d), math.log(d)),
    GateKind.DSUM: lambda d: (math.log(d), 2 * math.log(d)),
    GateKind.SWAP: lambda d: (0.0, 2 * math.log(d)),
}


def _suite_bounds(config: RunConfig) -> List[Check]:
    texts = config.gates or tuple(g.value for g in TABLE_GATES)
    checks: List[Check] = []
    for d in config.d_values:
        for text in texts:
            spec = GateSpec.parse(text, d)
            u = spec.build()
            schmidt_number = operator_schmidt(u).schmidt_number()
            for assisted in (False, True):
                label = f"{spec}{' assisted' if assisted else ''}"
                report = bounds_check(
                    u,
                    assisted,
                    samples=config.samples,
                    seed=config.seed,
                    workers=config.settings.workers,
                    restarts=config.settings.max_restarts,
                    iterations=config.settings.max_iterations,
                    chunk_size=config.settings.mc_chunk_size,
                )
                for c in report.checks:
                    checks.append(Check(c.name, c.value, c.expected, c.tolerance, c.passed, d, label))
                bound = math.log(schmidt_number)
                checks.append(Check(
                    "max_le_schmidt_bound", report.e_max.value, bound, 1e-9,
                    report.e_max.value <= bound + 1e-9, d, label,
                ))
                if spec.kind in _KNOWN_MAXIMA:
                    known = _KNOWN_MAXIMA[spec.kind](d)[1 if assisted else 0]
                    checks.append(Check.close("max_matches_known", report.e_max.value, known, 1e-6, d, label))
    return checks


def _suite_routes(config: RunConfig) -> List[Check]:
    tol = config.numeric_tol
    rng = np.random.default_rng(config.seed)
    texts = config.gates or tuple(g.value for g in TABLE_GATES)
    checks: List[Check] = []
    for d in config.d_values:
        with_trace = d <= config.trace_cap
        if not with_trace:
            logger.warning("routes: assisted trace route skipped at d=%d (cap %d)", d, config.trace_cap)
        for text in texts:
            u = GateSpec.parse(text, d).build()
            checks.append(Check.close("unassisted_routes", ep_unassisted_trace(u), ep_unassisted_schmidt(u), tol, d, text))
            if with_trace:
                checks.append(Check.close(
                    "assisted_routes", ep_assisted_trace(u, config.trace_cap), ep_assisted_schmidt(u), tol, d, text,
                ))
        draws = []
        for _ in range(config.trials):
            u = MultipartiteOperator(haar_random_unitary(d * d, rng).data, (d, d))
            draws.append(Check.close("unassisted_routes", ep_unassisted_trace(u), ep_unassisted_schmidt(u), tol, d))
        checks.append(_aggregate("unassisted_routes", d, draws, tol, f"{config.trials} Haar-random unitaries"))
        if with_trace:
            draws = []
            for _ in range(config.trials):
                u = ControlledGate.random(d, rng).operator()
                draws.append(Check.close("assisted_routes", ep_assisted_trace(u, config.trace_cap), ep_assisted_schmidt(u), tol, d))
            checks.append(_aggregate("assisted_routes", d, draws, tol, f"{config.trials} random controlled gates"))
            draws = []
            for _ in range(config.trials):
                u = MultipartiteOperator(haar_random_unitary(d * d, rng).data, (d, d))
                draws.append(Check.close("assisted_routes", ep_assisted_trace(u, config.trace_cap), ep_assisted_schmidt(u), tol, d))
            checks.append(_aggregate("assisted_routes", d, draws, tol, f"{config.trials} Haar-random unitaries"))
    return checks


def _suite_spin(config: RunConfig) -> List[Check]:
    grid = theta_grid(config.theta_points)
    step = grid[1] - grid[0]
    tol = config.numeric_tol
    checks: List[Check] = []
    for d in config.d_values:
        values = spin_curve(d, grid)
        label = f"j={spin_label(d)}"
        if d == 2:
            expected = 0.5 * np.sin(grid / 2) ** 2
            checks.append(Check.close("closed_form_curve", float(np.max(np.abs(values - expected))), 0.0, tol, d, label))
        ends = spin_curve(d, np.array([0.0, 2.0 * np.pi]))
        checks.append(Check.close("periodic_endpoints", float(abs(ends[1] - ends[0])), 0.0, 1e-12, d, label))
        checks.append(Check.close("zero_at_origin", float(values[0]), 0.0, 1e-12, d, label))
        sample_angles = grid[:: max(1, len(grid) // 16)]
        generic = max(
            abs(spin_linear_entanglement(t, d) - linear_operator_entanglement(spin_gate(t, d))) for t in sample_angles
        )
        checks.append(Check.close("matches_generic_route", generic, 0.0, tol, d, label))
        maxima = find_maxima(d, grid, values, periodic=True)
        target = 2 * math.pi / d
        if maxima:
            first = maxima[0]
            on_node = abs(first.grid_theta - target) <= step / 2 + 1e-12
            checks.append(Check(
                "first_maximum_node", first.grid_theta, target, step / 2, on_node, d, label,
            ))
            checks.append(Check.close("first_maximum_value", first.value, 1 - 1 / d, 1e-8, d, label))
        else:
            checks.append(Check("first_maximum_node", None, target, step / 2, False, d, f"{label}: no maximum"))
        checks.append(Check(
            "maxima_per_period", float(len(maxima)), None, 0.0, True, d,
            f"{label}: {len(maxima)} on a {len(grid)}-point grid",
        ))
    return checks


_SUITES = {
    "prop1": _suite_prop1,
    "identities": _suite_identities,
    "bounds": _suite_bounds,
    "routes": _suite_routes,
    "spin": _suite_spin,
}


def cmd_verify(config: RunConfig) -> int:
    logger.info("verify: suite %s, d=%s, seed %d", config.suite, config.d_values, config.seed)
    checks = _SUITES[config.suite](config)
    _emit(config, [_check_row(config.suite, c) for c in checks], CHECK_COLUMNS)
    failed = [c for c in checks if not c.passed]
    for c in failed:
        logger.warning("check failed: %s d=%s value=%r expected=%r %s", c.name, c.d, c.value, c.expected, c.detail)
    logger.info("verify: %d checks, %d failed", len(checks), len(failed))
    return EXIT_FAILED if failed else EXIT_OK


def cmd_asymptotics(config: RunConfig) -> int:
    rows = asymptotic_table(
        config.gates,
        config.d_values,
        mc_samples=config.mc_samples,
        seed=config.seed,
        workers=config.settings.workers,
        chunk_size=config.settings.mc_chunk_size,
    )
    _emit(config, rows, ASYMPTOTIC_COLUMNS)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "table": cmd_gate_table,
    "spin-scan": cmd_spin_scan,
    "power": cmd_power,
    "verify": cmd_verify,
    "asymptotics": cmd_asymptotics,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE

    try:
        settings = load_settings(args.config)
        configure_logging(settings.log_dir, "INFO" if args.verbose else settings.log_level)
        config = build_run_config(args, settings)
        return COMMANDS[config.command](config)
    except ValueError as exc:
        logger.debug("usage error", exc_info=True)
        print(f"entpower: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
