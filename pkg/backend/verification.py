"""
Verification suites behind the `verify` and `limits` commands.

Each suite returns CheckResult records; nothing here raises on a failed
check, the CLI turns failures into a non-zero exit status.
"""

import logging
import math
import time
from typing import Callable, Dict, List, NamedTuple, Optional

import numpy as np
from colorama import Fore, Style

from config import Settings, get_settings
from gqd_measures import (
    bures_gqd,
    correlation_matrix_w,
    hellinger_gqd,
    hellinger_gqd_model,
    trace_gqd_derivative,
    trace_gqd_model,
    trace_gqd_xstate,
    zero_temperature_measures,
)
from linalg_core import eigvalsh
from measure_service import measure_all
from models.params import ModelParams
from models.results import Measure
from models.states import BlochMeasurement, CQState
from models.sweep import SweepSpec
from oracles import bures_maxfid_grid, cq_assemble, hellinger_gqd_bruteforce, trace_gqd_bruteforce
from spin_model import d_infinity_state, thermal_state
from sweep_service import branch_classifier, detect_for_sweep, detect_sudden_change, preset_spec, run_sweep

logger = logging.getLogger(__name__)

SUITES = ("invariants", "oracle", "limits", "sweeps")

# Q_B of the degenerate ground mixture at delta = B = 3/2
DEGENERATE_START_BURES = 0.5098


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str
    elapsed: float


def _check(name: str, body: Callable[[], str]) -> CheckResult:
    """Run one check; ``body`` returns a detail string or raises AssertionError."""
    started = time.perf_counter()
    try:
        detail = body()
        passed = True
    except AssertionError as e:
        detail, passed = str(e), False
    elapsed = time.perf_counter() - started
    logger.debug(f"{name}: {'pass' if passed else 'FAIL'} in {elapsed:.2f}s")
    return CheckResult(name, passed, detail, elapsed)


def random_params(rng: np.random.Generator, count: int, upper: float = 4.0,
                  t_range=(0.1, 5.0)) -> List[ModelParams]:
    """Model points with J, B, D uniform in [0, upper] and T uniform in t_range."""
    draws = rng.uniform(0.0, upper, size=(count, 3))
    temperatures = rng.uniform(*t_range, size=count)
    return [ModelParams(J=j, B=b, D=d, T=t) for (j, b, d), t in zip(draws, temperatures)]


def random_cq_state(rng: np.random.Generator) -> CQState:
    def ball() -> tuple:
        v = rng.normal(size=3)
        return tuple(v / np.linalg.norm(v) * rng.uniform() ** (1.0 / 3.0))

    axis = rng.normal(size=3)
    return CQState(
        p=float(rng.uniform()),
        measurement=BlochMeasurement.from_vector(axis),
        b1=ball(),
        b2=ball(),
    )


# --- suites ---------------------------------------------------------------


def invariants_suite(samples: int, seed: int, settings: Settings) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    points = random_params(rng, samples)
    tol = settings.tolerances

    def closed_vs_definitional() -> str:
        worst_t = worst_h = 0.0
        for p in points:
            rho = thermal_state(p, tol)
            worst_t = max(worst_t, abs(trace_gqd_model(p, tol).value - trace_gqd_xstate(rho, tol).value))
            worst_h = max(worst_h, abs(hellinger_gqd_model(p, tolerances=tol).value - hellinger_gqd(rho, tol).value))
        assert worst_t <= 1e-10, f"trace closed form off by {worst_t:.2e}"
        assert worst_h <= 1e-10, f"Hellinger closed form off by {worst_h:.2e}"
        return f"max deviation trace {worst_t:.1e}, hellinger {worst_h:.1e}"

    def w_matrix_bounds() -> str:
        top = 0.0
        for p in points:
            eigenvalues = eigvalsh(correlation_matrix_w(thermal_state(p, tol), tol).astype(complex), tol)
            assert eigenvalues[-1] >= -1e-10, f"W not PSD at {p.to_dict()}"
            top = max(top, float(eigenvalues[0]))
        assert top <= 1.0 + 1e-10, f"lambda_max(W) = {top}"
        return f"largest W eigenvalue {top:.6f}"

    def sign_symmetry() -> str:
        for p in points[: max(1, samples // 10)]:
            reference = measure_all(p, [Measure.TRACE, Measure.HELLINGER], settings=settings)
            for signs in ((-1, 1, 1), (1, -1, 1), (1, 1, -1), (-1, -1, -1)):
                flipped = p.replace(J=signs[0] * p.J, B=signs[1] * p.B, D=signs[2] * p.D)
                other = measure_all(flipped, [Measure.TRACE, Measure.HELLINGER], settings=settings)
                for m in reference:
                    assert abs(reference[m].value - other[m].value) <= 1e-9, f"{m.value} not symmetric at {p.to_dict()}"
        p = points[0]
        base = bures_gqd(thermal_state(p, tol), settings).value
        flipped = bures_gqd(thermal_state(p.replace(J=-p.J, B=-p.B, D=-p.D), tol), settings).value
        assert abs(base - flipped) <= 1e-6, f"Bures not symmetric: {base} vs {flipped}"
        return "values invariant under sign flips of J, B, D"

    def infinite_temperature() -> str:
        hot = [p.replace(T=1e6) for p in points[:10]]
        worst = 0.0
        for index, p in enumerate(hot):
            measures = list(Measure) if index < 3 else [Measure.TRACE, Measure.HELLINGER]
            worst = max(worst, max(r.value for r in measure_all(p, measures, settings=settings).values()))
        assert worst < 1e-4, f"discord {worst:.2e} at T = 1e6"
        verbatim = hellinger_gqd_model(hot[0], paper_verbatim=True).value
        assert verbatim < -1.0, f"uncorrected Hellinger constants unexpectedly pass ({verbatim})"
        return f"max discord {worst:.1e}; uncorrected constants give {verbatim:.3f}"

    def derivative() -> str:
        worst = 0.0
        for p in points:
            h = 1e-6 * max(1.0, p.delta)
            if p.delta <= 10.0 * h:
                continue
            up, down = ((p.delta + h) / p.delta, (p.delta - h) / p.delta)
            q_up = trace_gqd_model(p.replace(J=p.J * up, D=p.D * up), tol).value
            q_down = trace_gqd_model(p.replace(J=p.J * down, D=p.D * down), tol).value
            slope = (q_up - q_down) / (2.0 * h)
            exact = trace_gqd_derivative(p)
            assert exact > 0.0, f"non-positive derivative at {p.to_dict()}"
            assert slope > 0.0 or exact < 1e-8, f"finite difference not positive at {p.to_dict()}"
            worst = max(worst, abs(slope - exact))
        assert worst < 1e-5, f"derivative off by {worst:.2e}"
        return f"closed-form derivative matches finite differences within {worst:.1e}"

    def monotone_in_d() -> str:
        grid = np.arange(0.0, 6.0 + 1e-9, 0.01)
        for b in (0.0, 0.5, 1.0, 1.5, 2.0, 3.0):
            values = [trace_gqd_model(ModelParams(J=1.0, B=b, D=d, T=0.5), tol).value for d in grid]
            assert np.all(np.diff(values) >= 0.0), f"Q_T decreases in D at B={b}"
        return "Q_T non-decreasing in D for every field of the dm preset"

    return [
        _check("closed form = definitional", closed_vs_definitional),
        _check("W matrix PSD, lambda_max <= 1", w_matrix_bounds),
        _check("sign-flip symmetry", sign_symmetry),
        _check("infinite-temperature null", infinite_temperature),
        _check("dQ_T/d delta", derivative),
        _check("Q_T monotone in D", monotone_in_d),
    ]


def oracle_suite(samples: int, seed: int, settings: Settings) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    points = random_params(rng, samples)
    states = [thermal_state(p, settings.tolerances) for p in points]
    tol = settings.tolerances

    def trace_agreement() -> str:
        worst = max(abs(trace_gqd_bruteforce(rho, settings=settings).value - trace_gqd_xstate(rho, tol).value)
                    for rho in states)
        assert worst <= 2e-4, f"trace oracle off by {worst:.2e}"
        return f"max deviation {worst:.1e}"

    def hellinger_agreement() -> str:
        worst = max(abs(hellinger_gqd_bruteforce(rho, settings=settings).value - hellinger_gqd(rho, tol).value)
                    for rho in states)
        assert worst <= 1e-6, f"Hellinger oracle off by {worst:.2e}"
        return f"max deviation {worst:.1e}"

    def bures_agreement() -> str:
        worst = 0.0
        for rho in states:
            grid = bures_maxfid_grid(rho, settings=settings).value
            refined = bures_gqd(rho, settings).diagnostics["max_fidelity"]
            worst = max(worst, abs(grid - refined))
        assert worst <= 1e-5, f"Bures grid oracle off by {worst:.2e}"
        return f"max fidelity deviation {worst:.1e}"

    def zero_discord() -> str:
        worst = {m: 0.0 for m in Measure}
        for _ in range(samples):
            rho = cq_assemble(random_cq_state(rng))
            worst[Measure.TRACE] = max(worst[Measure.TRACE], trace_gqd_bruteforce(rho, settings=settings).value)
            worst[Measure.HELLINGER] = max(
                worst[Measure.HELLINGER], hellinger_gqd_bruteforce(rho, settings=settings).value
            )
            worst[Measure.BURES] = max(worst[Measure.BURES], bures_gqd(rho, settings).value)
        assert worst[Measure.TRACE] < 2e-4, f"trace oracle gives {worst[Measure.TRACE]:.2e} on a CQ state"
        for m in (Measure.HELLINGER, Measure.BURES):
            assert worst[m] < 1e-6, f"{m.value} gives {worst[m]:.2e} on a CQ state"
        return ", ".join(f"{m.value} {v:.1e}" for m, v in worst.items())

    return [
        _check("trace oracle agreement", trace_agreement),
        _check("Hellinger oracle agreement", hellinger_agreement),
        _check("Bures grid oracle agreement", bures_agreement),
        _check("zero discord on CQ states", zero_discord),
    ]


def limits_suite(samples: int, seed: int, settings: Settings) -> List[CheckResult]:
    def trichotomy() -> str:
        cases = [
            (ModelParams(J=1.0, D=2.0, B=1.0, T=0.0), (1.0, 1.0, 1.0), (1e-12, 1e-12, 1e-6)),
            (ModelParams(J=1.0, D=1.0, B=3.0, T=0.0), (0.0, 0.0, 0.0), (1e-9, 1e-9, 1e-9)),
            (ModelParams(J=1.0, D=math.sqrt(5.0) / 2.0, B=1.5, T=0.0), (0.5, 0.5, 0.5098), (1e-9, 1e-9, 5e-4)),
        ]
        for params, expected, tolerance in cases:
            results = zero_temperature_measures(params, settings=settings)
            for m, want, eps in zip(Measure, expected, tolerance):
                got = results[m].value
                assert abs(got - want) <= eps, f"{m.value} at {params.to_dict()}: {got} != {want}"
        return "ground-state values 1 / 0 / (1/2, 1/2, 0.5098)"

    def large_d() -> str:
        lowest = 1.0
        for b in (0.0, 1.0, 3.0):
            results = measure_all(ModelParams(J=1.0, D=50.0, B=b, T=0.5), settings=settings)
            lowest = min(lowest, min(r.value for r in results.values()))
        assert lowest > 0.999, f"discord {lowest} at D = 50"
        limit = measure_all(d_infinity_state(), settings=settings)
        assert min(r.value for r in limit.values()) > 1.0 - 1e-9, "D -> infinity state is not maximally discordant"
        return f"smallest discord at D = 50: {lowest:.6f}"

    return [
        _check("zero-temperature trichotomy", trichotomy),
        _check("D -> infinity limit", large_d),
    ]


def sweeps_suite(samples: int, seed: int, settings: Settings) -> List[CheckResult]:
    def dm_sweep_properties() -> str:
        spec = preset_spec("dm", steps=601, measures=[Measure.TRACE, Measure.HELLINGER])
        rows = run_sweep(spec, settings)
        at_three = []
        for index, field in enumerate(spec.family_values):
            chunk = rows[index * spec.steps:(index + 1) * spec.steps]
            q_t = [row.Q_T for row in chunk]
            assert np.all(np.diff(q_t) >= 0.0), f"Q_T not monotone at B={field}"
            at_three.append(next(row.Q_T for row in chunk if abs(row.D - 3.0) < 1e-9))
            if field > 1.0:
                xs = [row.D for row in chunk]
                classify = branch_classifier(spec.fixed.replace(B=field), "D", Measure.HELLINGER, settings=settings)
                points = detect_sudden_change(
                    xs, [row.Q_H for row in chunk], [row.branches["hellinger"] for row in chunk], classify,
                )
                expected = math.sqrt(field * field - 1.0)
                assert any(
                    p.kind == "argmax-switch" and abs(p.location - expected) <= 1e-3 for p in points
                ), f"no Hellinger kink near {expected:.4f}"
        assert all(a > b for a, b in zip(at_three, at_three[1:])), "curves not ordered by field at D = 3"
        return "Q_T monotone, ordered by B, Hellinger kinks at sqrt(B^2 - 1)"

    def temperature_sweep_properties() -> str:
        spec = preset_spec("temperature", steps=100)
        rows = run_sweep(spec, settings)
        for index, d in enumerate(spec.family_values):
            chunk = rows[index * spec.steps:(index + 1) * spec.steps]
            for column in ("Q_T", "Q_H", "Q_B"):
                values = np.array([getattr(row, column) for row in chunk])
                slack = 1e-7 if column == "Q_B" else 1e-12
                if d < 1.0:
                    assert values[0] < 1e-3 and values.max() > values[-1] and values.argmax() > 0, \
                        f"{column} at D={d} does not rise and fall"
                elif d < 1.5:
                    expected = DEGENERATE_START_BURES if column == "Q_B" else 0.5
                    assert abs(values[0] - expected) <= 1e-3, \
                        f"{column} at D={d} starts at {values[0]:.5f}, expected {expected:.4f}"
                    assert values[-1] < values[0], f"{column} at D={d} does not decay"
                else:
                    assert abs(values[0] - 1.0) <= 1e-3, f"{column} at D={d} starts at {values[0]:.5f}"
                    assert np.all(np.diff(values) <= slack), f"{column} at D={d} increases with T"
        return "low-D curves rise then decay, degenerate curve starts at 1/2, the others decay from 1"

    def bures_dip() -> str:
        spec = SweepSpec(
            vary="D", start=0.0, stop=6.0, steps=61, fixed=ModelParams(J=1.0, B=3.0, T=0.5),
            measures=[Measure.BURES],
        )
        rows = run_sweep(spec, settings)
        points = detect_for_sweep(spec, rows, settings)
        switches = [p for p in points if p.kind == "argmax-switch"]
        assert switches, "no Bures argmax switch at B = 3"
        first = switches[0].location
        turning = [p for p in points if p.kind == "turning-point" and p.location > first]
        assert turning, "no turning point after the Bures switch"
        second = turning[0]
        after_switch = next(row.Q_B for row in rows if row.D > first)
        assert second.value < after_switch, "Q_B does not decrease between the critical points"
        return f"critical points D_c1 = {first:.4f}, D_c2 = {second.location:.4f}"

    return [
        _check("DM sweep properties", dm_sweep_properties),
        _check("temperature sweep properties", temperature_sweep_properties),
        _check("Bures decreasing segment at B = 3", bures_dip),
    ]


SUITE_RUNNERS: Dict[str, Callable[[int, int, Settings], List[CheckResult]]] = {
    "invariants": invariants_suite,
    "oracle": oracle_suite,
    "limits": limits_suite,
    "sweeps": sweeps_suite,
}


def run_suites(suite: str, samples: int = 20, seed: int = 0,
               settings: Optional[Settings] = None) -> Dict[str, List[CheckResult]]:
    """Run one suite or ``all`` of them, in a fixed order."""
    settings = settings or get_settings()
    names = SUITES if suite == "all" else (suite,)
    results = {}
    for name in names:
        logger.info(f"Running {name} suite ({samples} samples, seed {seed})")
        results[name] = SUITE_RUNNERS[name](samples, seed, settings)
    return results


def print_report(results: Dict[str, List[CheckResult]]) -> bool:
    """Print a colored pass/fail report; returns True when every check passed."""
    all_passed = True
    for suite, checks in results.items():
        print(f"\n{Style.BRIGHT}{suite}{Style.RESET_ALL}")
        for check in checks:
            mark = f"{Fore.GREEN}PASS" if check.passed else f"{Fore.RED}FAIL"
            print(f"  {mark}{Style.RESET_ALL} {check.name} ({check.elapsed:.2f}s): {check.detail}")
            all_passed = all_passed and check.passed
    return all_passed


def evaluate_limit(case: str, params: ModelParams, settings: Optional[Settings] = None) -> Dict[Measure, float]:
    """
    Values of the analytic limiting cases.

    ``zero`` evaluates the ground state of ``params``; ``dinf`` evaluates the
    model at the given (large) D and, with D = inf, the limiting state itself.
    """
    settings = settings or get_settings()
    if case == "zero":
        return {m: r.value for m, r in zero_temperature_measures(params, settings=settings).items()}
    if case == "dinf":
        target = d_infinity_state() if math.isinf(params.D) else params
        return {m: r.value for m, r in measure_all(target, settings=settings).items()}
    raise ValueError(f"Unknown limit case '{case}'")
