"""First-passage solvers sharing one run-record contract.

Solver kinds
------------
MW / MWR
    Multi-walk over the ruler neighborhood, without / with random restarts.
DEsF / DEsFR
    Plain rand/1 differential evolution with box confinement, extended with
    the first-passage stopping rule, without / with the same restart
    machinery as MWR.
DEoF1 .. DEoF6
    Six classic differential-evolution strategy variants with binomial
    crossover, first-passage stopping, no restarts.

All solvers move the whole population once per step, commit acceptances
synchronously at step end, accept strictly improving candidates only, and
stop the moment the quantized running best equals the quantized target.
A run that exhausts its step budget first is censored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .objectives import EvalCounter, ObjectiveSpec, evaluate_batch, quantize
from .ruler import MIN_MARKS, RulerState, neighborhood_eval

__all__ = [
    "SOLVER_KINDS",
    "SolverConfig",
    "RunRecord",
    "RunningBest",
    "WalkTrace",
    "de_mutate",
    "mw_step",
    "run_solver",
    "mw_run",
    "mwr_run",
    "desf_run",
    "desfr_run",
    "de_strategy_run",
    "trace_to_text",
]

SOLVER_KINDS = ("MW", "MWR", "DEsF", "DEsFR",
                "DEoF1", "DEoF2", "DEoF3", "DEoF4", "DEoF5", "DEoF6")

_RESTART_KINDS = ("MWR", "DEsFR")
_RULER_KINDS = ("MW", "MWR")


@dataclass(frozen=True)
class SolverConfig:
    """Full parameterization of one solver run."""

    kind: str
    objective: str
    seed: int
    steps_limit: int
    marks: int = 32
    radius: Optional[int] = None          # MW / MWR only
    dither: float = 0.01                  # MW / MWR neighborhood noise
    rde: float = 1.0                      # DE mutation scale
    cr: float = 0.9                       # DE strategy crossover rate
    de_jitter: float = 1e-4               # per-component scale jitter, DEoF3
    plateau_limit: Optional[int] = None   # restart kinds; defaults to marks
    digits_target: int = 9
    label: Optional[str] = None

    def __post_init__(self):
        if self.kind not in SOLVER_KINDS:
            raise ValueError(f"unknown solver kind {self.kind!r}; known: {', '.join(SOLVER_KINDS)}")
        if self.marks < MIN_MARKS:
            raise ValueError(f"need at least {MIN_MARKS} marks, got {self.marks}")
        if self.steps_limit < 1:
            raise ValueError("steps_limit must be >= 1")
        if self.kind in _RULER_KINDS:
            if self.radius is None:
                raise ValueError(f"{self.kind} requires a neighborhood radius")
            if not 1 <= self.radius <= self.marks - 2:
                raise ValueError(
                    f"radius must be in [1, {self.marks - 2}] for {self.marks} marks, "
                    f"got {self.radius}"
                )
        if not 0.0 <= self.dither <= 1.0:
            raise ValueError("dither must be in [0, 1]")
        if not 0.0 <= self.cr <= 1.0:
            raise ValueError("cr must be in [0, 1]")
        if self.plateau_limit is not None and self.plateau_limit < 1:
            raise ValueError("plateau_limit must be >= 1")
        if self.digits_target < 1:
            raise ValueError("digits_target must be >= 1")

    @property
    def uses_ruler(self) -> bool:
        return self.kind in _RULER_KINDS

    @property
    def restarts_enabled(self) -> bool:
        return self.kind in _RESTART_KINDS

    @property
    def de_strategy(self) -> Optional[int]:
        return int(self.kind[-1]) if self.kind.startswith("DEoF") else None

    @property
    def effective_plateau_limit(self) -> int:
        return self.marks if self.plateau_limit is None else self.plateau_limit

    @property
    def solver_label(self) -> str:
        if self.label is not None:
            return self.label
        if self.kind in _RULER_KINDS:
            return f"{self.kind}{self.radius:02d}"
        if self.kind in ("DEsF", "DEsFR"):
            return f"{self.kind}1"
        return self.kind


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one solver run."""

    coord_best: tuple
    value_best: float        # quantized
    agent_id: int            # 1-based population index, argmin of final values
    steps: int               # total across restarts
    probes: int
    restarts: int
    is_censored: bool
    seed: int


@dataclass
class WalkTrace:
    """Per-step, per-agent raw values with restart boundaries.

    ``steps[k] = (step, restart_index, values_copy, running_best)`` where
    ``running_best`` is the quantized best over the whole run so far.
    ``first_passage`` is ``(step, agent_id)`` once the target is reached.
    """

    label: str
    steps: list = field(default_factory=list)
    first_passage: Optional[tuple] = None
    epoch_seeds: list = field(default_factory=list)


@dataclass
class RunningBest:
    """Best candidate seen so far: the quantized value and its coordinates.

    The comparison is raw value against quantized best, after the greedy
    acceptance template, so the stored value only ever decreases.
    """

    value: float = math.inf
    coord: Optional[np.ndarray] = None


def _greedy_commit(marks, values, cand_coords, cand_values, best: RunningBest,
                   digits: int):
    """Synchronous step commit: each member accepts its candidate only on a
    strict improvement; the running best tracks every candidate, accepted or
    not.  Returns the updated (marks, values)."""
    for i in range(len(cand_values)):
        fi = cand_values[i]
        if fi < best.value:
            best.value = quantize(float(fi), digits)
            best.coord = cand_coords[i].copy()
    improved = cand_values < values
    new_values = np.where(improved, cand_values, values)
    new_marks = np.where(improved[:, None], cand_coords, marks)
    return new_marks, new_values


def mw_step(state: RulerState, spec: ObjectiveSpec, cfg: "SolverConfig",
            rng: np.random.Generator, counter: EvalCounter,
            best: RunningBest):
    """One multi-walk step: evaluate the neighborhood, accept strictly
    improving candidates synchronously, update the running best in place.
    Costs exactly ``marks * radius`` probes."""
    prop = neighborhood_eval(state, spec, cfg.radius, cfg.dither, rng, counter)
    marks, values = _greedy_commit(state.marks, state.values, prop.coords,
                                   prop.values, best, cfg.digits_target)
    return RulerState(marks=marks, values=values), best


def de_mutate(marks: np.ndarray, rng: np.random.Generator, rde: float,
              lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """One rand/1 mutant with box confinement.

    Draws three distinct mark indices, returns
    ``marks[a] + rde * (marks[b] - marks[c])``; if any component leaves the
    box the whole candidate is replaced by a fresh uniform draw inside it.
    """
    m, p = marks.shape
    a, b, c = rng.choice(m, size=3, replace=False)
    cand = marks[a] + rde * (marks[b] - marks[c])
    if np.any(cand < lower) or np.any(cand > upper):
        cand = lower + rng.uniform(size=p) * (upper - lower)
    return cand


def _distinct_triples(rng: np.random.Generator, m: int) -> np.ndarray:
    """(m, 3) donor indices, each row a uniformly random ordered distinct
    triple from [0, m); one rank block per step keeps the draw order fixed."""
    ranks = rng.uniform(size=(m, m))
    return np.argsort(ranks, axis=1)[:, :3]


def _confine(trials: np.ndarray, lower: np.ndarray, upper: np.ndarray,
             rng: np.random.Generator) -> np.ndarray:
    """Replace every out-of-box trial row by a fresh uniform draw."""
    out = np.any(trials < lower, axis=1) | np.any(trials > upper, axis=1)
    n_out = int(np.count_nonzero(out))
    if n_out:
        p = trials.shape[1]
        trials[out] = lower + rng.uniform(size=(n_out, p)) * (upper - lower)
    return trials


def _de_simple_trials(marks: np.ndarray, cfg: SolverConfig, spec: ObjectiveSpec,
                      rng: np.random.Generator) -> np.ndarray:
    m, _ = marks.shape
    idx = _distinct_triples(rng, m)
    trials = marks[idx[:, 0]] + cfg.rde * (marks[idx[:, 1]] - marks[idx[:, 2]])
    return _confine(trials, spec.lower, spec.upper, rng)


def _de_strategy_trials(marks: np.ndarray, values: np.ndarray, cfg: SolverConfig,
                        spec: ObjectiveSpec, rng: np.random.Generator) -> np.ndarray:
    """Donor per strategy, then binomial crossover with one guaranteed donor
    component, then confinement.  Draw order per step: per-step scale, donor
    index block, per-vector extras, crossover positions, crossover mask,
    confinement redraws."""
    m, p = marks.shape
    strategy = cfg.de_strategy
    rde = cfg.rde
    step_scale = rng.uniform(0.5, 1.0) if strategy == 5 else None
    idx = _distinct_triples(rng, m)
    a, b, c = idx[:, 0], idx[:, 1], idx[:, 2]
    best = marks[int(np.argmin(values))]

    if strategy == 1:
        donors = marks[a] + rde * (marks[b] - marks[c])
    elif strategy == 2:
        donors = marks + rde * (best - marks) + rde * (marks[a] - marks[b])
    elif strategy == 3:
        scale = rde + cfg.de_jitter * (rng.uniform(size=(m, p)) - 0.5)
        donors = best + scale * (marks[a] - marks[b])
    elif strategy == 4:
        scale = rng.uniform(0.5, 1.0, size=m)[:, None]
        donors = marks[a] + scale * (marks[b] - marks[c])
    elif strategy == 5:
        donors = marks[a] + step_scale * (marks[b] - marks[c])
    elif strategy == 6:
        coins = rng.uniform(size=m) < 0.5
        mutants = marks[a] + rde * (marks[b] - marks[c])
        recombined = marks + 0.5 * (rde + 1.0) * (marks[a] + marks[b] - 2.0 * marks)
        donors = np.where(coins[:, None], mutants, recombined)
    else:  # pragma: no cover - kinds are validated at configuration
        raise ValueError(f"unknown strategy {strategy}")

    forced = rng.integers(0, p, size=m)
    take = rng.uniform(size=(m, p)) < cfg.cr
    take[np.arange(m), forced] = True
    trials = np.where(take, donors, marks)
    return _confine(trials, spec.lower, spec.upper, rng)


def _check_objective(cfg: SolverConfig, spec: ObjectiveSpec) -> float:
    if spec.value_target is None:
        raise ValueError(
            f"objective {spec.name!r} has no stored target value; "
            "compute it with the target oracle first"
        )
    if spec.digits_target != cfg.digits_target:
        raise ValueError(
            f"config quantizes to {cfg.digits_target} digits but the objective "
            f"target is stored at {spec.digits_target}"
        )
    return spec.value_target


def _run(cfg: SolverConfig, spec: ObjectiveSpec, initial_marks=None,
         record_trace: bool = False):
    target = _check_objective(cfg, spec)
    digits = cfg.digits_target
    m = cfg.marks
    counter = EvalCounter()
    trace = WalkTrace(label=cfg.solver_label) if record_trace else None

    total_steps = 0
    restarts = -1
    best_value = np.inf      # quantized, over all epochs
    best_coord = None
    passed = False
    epoch_seed = cfg.seed

    while True:
        restarts += 1
        if trace is not None:
            trace.epoch_seeds.append(epoch_seed)
        rng = np.random.default_rng(epoch_seed)

        u = rng.uniform(size=(m, spec.dims))
        marks = spec.lower + u * (spec.upper - spec.lower)
        if cfg.uses_ruler:
            marks[0] = spec.lower
            marks[-1] = spec.upper
        if initial_marks is not None and restarts == 0:
            marks = np.array(initial_marks, dtype=float).reshape(m, spec.dims)
        values = evaluate_batch(spec, marks, counter)  # probes += m per epoch

        err_prev = float(values.min()) - target  # raw seed for the plateau rule
        epoch_best = RunningBest()
        plateau = 0

        while True:
            total_steps += 1
            if cfg.uses_ruler:
                state, _ = mw_step(RulerState(marks, values), spec, cfg, rng,
                                   counter, epoch_best)
                marks, values = state.marks, state.values
            else:
                if cfg.de_strategy is None:
                    cand_coords = _de_simple_trials(marks, cfg, spec, rng)
                else:
                    cand_coords = _de_strategy_trials(marks, values, cfg, spec, rng)
                cand_values = evaluate_batch(spec, cand_coords, counter)
                marks, values = _greedy_commit(marks, values, cand_coords,
                                               cand_values, epoch_best, digits)

            if epoch_best.value < best_value:
                best_value = epoch_best.value
                best_coord = epoch_best.coord

            if trace is not None:
                trace.steps.append((total_steps, restarts, values.copy(), float(best_value)))

            if epoch_best.value == target:
                passed = True
                break
            if cfg.restarts_enabled:
                error = epoch_best.value - target
                if error >= err_prev:
                    plateau += 1
                else:
                    plateau = 0
                    err_prev = error
                if plateau == cfg.effective_plateau_limit:
                    break  # restart with a fresh seed
            if total_steps >= cfg.steps_limit:
                break

        if passed or total_steps >= cfg.steps_limit or not cfg.restarts_enabled:
            break
        epoch_seed = int(rng.integers(1, 2 ** 31))  # drawn from the run's own stream

    agent_id = int(np.argmin(values)) + 1
    record = RunRecord(
        coord_best=tuple(float(x) for x in np.atleast_1d(best_coord)),
        value_best=float(best_value),
        agent_id=agent_id,
        steps=total_steps,
        probes=counter.probes,
        restarts=restarts,
        is_censored=not passed,
        seed=cfg.seed,
    )
    if trace is not None and passed:
        trace.first_passage = (total_steps, agent_id)
    return (record, trace) if record_trace else record


def run_solver(cfg: SolverConfig, spec: ObjectiveSpec, initial_marks=None,
               record_trace: bool = False):
    """Run any configured solver; returns a RunRecord, plus the WalkTrace
    when ``record_trace`` is set."""
    return _run(cfg, spec, initial_marks=initial_marks, record_trace=record_trace)


def _expect_kind(cfg: SolverConfig, *kinds: str) -> None:
    if cfg.kind not in kinds:
        raise ValueError(f"expected a {'/'.join(kinds)} config, got {cfg.kind}")


def mw_run(cfg: SolverConfig, spec: ObjectiveSpec, initial_marks=None,
           record_trace: bool = False):
    _expect_kind(cfg, "MW")
    return _run(cfg, spec, initial_marks=initial_marks, record_trace=record_trace)


def mwr_run(cfg: SolverConfig, spec: ObjectiveSpec, record_trace: bool = False):
    _expect_kind(cfg, "MWR")
    return _run(cfg, spec, record_trace=record_trace)


def desf_run(cfg: SolverConfig, spec: ObjectiveSpec, record_trace: bool = False):
    _expect_kind(cfg, "DEsF")
    return _run(cfg, spec, record_trace=record_trace)


def desfr_run(cfg: SolverConfig, spec: ObjectiveSpec, record_trace: bool = False):
    _expect_kind(cfg, "DEsFR")
    return _run(cfg, spec, record_trace=record_trace)


def de_strategy_run(cfg: SolverConfig, spec: ObjectiveSpec, record_trace: bool = False):
    _expect_kind(cfg, "DEoF1", "DEoF2", "DEoF3", "DEoF4", "DEoF5", "DEoF6")
    return _run(cfg, spec, record_trace=record_trace)


def trace_to_text(trace: WalkTrace, config_lines=()) -> str:
    """Stable delimited trace export: comment lines echoing the configuration,
    a column header, one row per (step, restart, agent, value), and a footer
    with the first passage."""
    lines = [f"# {line}" for line in config_lines]
    lines.append(f"# solver = {trace.label}")
    lines.append(f"# epoch_seeds = {','.join(str(s) for s in trace.epoch_seeds)}")
    lines.append("step,restart,agentId,value")
    for step, restart, values, _best in trace.steps:
        for agent, value in enumerate(values, start=1):
            lines.append(f"{step},{restart},{agent},{float(value)!r}")
    if trace.first_passage is not None:
        lines.append(f"# first_passage_step={trace.first_passage[0]},"
                     f"first_passage_agentId={trace.first_passage[1]}")
    else:
        lines.append("# first_passage=none")
    return "\n".join(lines) + "\n"
