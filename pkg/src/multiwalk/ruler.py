"""Ruler population structure and pairwise-difference candidate generation.

A population of ``m`` marks on ``p`` rulers (one ruler per dimension) moves by
proposing, for each mark, candidate coordinates built from absolute pairwise
differences between marks, offset by the lower bound so every candidate is a
valid coordinate.  The number of neighbors consulted per mark is the
neighborhood radius, between 1 and ``m - 2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .objectives import EvalCounter, ObjectiveSpec, evaluate_batch

__all__ = [
    "RulerState",
    "NeighborhoodProposal",
    "init_rulers",
    "eligible_neighbors",
    "candidate_coords",
    "neighborhood_eval",
    "candidate_table_text",
]

MIN_MARKS = 4  # radius <= m - 2 must admit radius >= 2


@dataclass
class RulerState:
    """Mark coordinates (m, p) and their raw objective values (m,)."""

    marks: np.ndarray
    values: np.ndarray

    @property
    def n_marks(self) -> int:
        return self.marks.shape[0]


@dataclass
class NeighborhoodProposal:
    """Best evaluated candidate per mark for one step.

    ``coords[i]`` is the winning candidate for mark ``i``, ``values[i]`` its
    raw objective value, ``chosen[i]`` the neighbor index that produced it and
    ``neighbor_sets[i]`` the full index set consulted (ascending).
    """

    coords: np.ndarray
    values: np.ndarray
    chosen: np.ndarray
    neighbor_sets: np.ndarray


def init_rulers(spec: ObjectiveSpec, n_marks: int, rng: np.random.Generator,
                counter: EvalCounter) -> RulerState:
    """Uniform random marks with rows 1 and m anchored at the bounds.

    Costs exactly ``n_marks`` probes for the initial values.
    """
    if n_marks < MIN_MARKS:
        raise ValueError(f"need at least {MIN_MARKS} marks, got {n_marks}")
    u = rng.uniform(size=(n_marks, spec.dims))
    marks = spec.lower + u * (spec.upper - spec.lower)
    marks[0] = spec.lower
    marks[-1] = spec.upper
    values = evaluate_batch(spec, marks, counter)
    return RulerState(marks=marks, values=values)


def eligible_neighbors(i: int, n_marks: int) -> np.ndarray:
    """The m - 2 neighbor indices of mark ``i`` (0-based, ascending).

    Besides itself, mark 0 skips the last mark and every other mark skips
    mark 0.  Exclusion is by fixed index, so at the anchored initial state
    the skipped column would only reproduce the mark's own position (or the
    upper bound, for mark 0).
    """
    if n_marks < MIN_MARKS:
        raise ValueError(f"need at least {MIN_MARKS} marks, got {n_marks}")
    if not 0 <= i < n_marks:
        raise ValueError(f"mark index {i} out of range for {n_marks} marks")
    if i == 0:
        return np.arange(1, n_marks - 1)
    return np.array([j for j in range(1, n_marks) if j != i])


_ELIGIBLE_CACHE: dict = {}


def _eligible_matrix(n_marks: int) -> np.ndarray:
    """(m, m - 2) matrix of eligible neighbor indices, row per mark."""
    table = _ELIGIBLE_CACHE.get(n_marks)
    if table is None:
        table = np.stack([eligible_neighbors(i, n_marks) for i in range(n_marks)])
        _ELIGIBLE_CACHE[n_marks] = table
    return table


def candidate_coords(marks: np.ndarray, i: int, j: int, lower: np.ndarray,
                     upper: np.ndarray, dither: float = 0.0,
                     rng: np.random.Generator | None = None) -> np.ndarray:
    """Candidate for mark ``i`` from neighbor ``j``: the pairwise difference
    offset by the lower bound, optionally dithered, clamped into the box.

    Per dimension: ``clip(lower + |marks[i] - marks[j]| * (1 + dither * u),
    lower, upper)`` with ``u`` drawn fresh from U(-1, 1) for each dimension.
    With ``dither == 0`` the map is deterministic and no draws are consumed.
    """
    if i == j:
        raise ValueError("a mark is not its own neighbor")
    diff = np.abs(marks[i] - marks[j])
    if dither > 0.0:
        if rng is None:
            raise ValueError("dither > 0 requires a generator")
        diff = diff * (1.0 + dither * rng.uniform(-1.0, 1.0, size=diff.shape))
    return np.clip(lower + diff, lower, upper)


def neighborhood_eval(state: RulerState, spec: ObjectiveSpec, radius: int,
                      dither: float, rng: np.random.Generator,
                      counter: EvalCounter) -> NeighborhoodProposal:
    """Evaluate each mark's neighborhood and keep its best candidate.

    At full radius (m - 2) every eligible neighbor is consulted; otherwise a
    fresh uniform sample of ``radius`` neighbors is drawn per mark per step,
    shared across dimensions.  Random draws happen in a fixed order (sampling
    block first, then one dither block filled mark-major, neighbor-minor,
    dimension-minor) so the evaluations themselves can be farmed out without
    changing the committed step.  Costs exactly ``m * radius`` probes.
    Ties between candidates break toward the lowest neighbor index.
    """
    marks = state.marks
    m, p = marks.shape
    if not 1 <= radius <= m - 2:
        raise ValueError(f"radius must be in [1, {m - 2}], got {radius}")
    eligible = _eligible_matrix(m)
    if radius == m - 2:
        neighbor_sets = eligible
    else:
        ranks = rng.uniform(size=(m, m - 2))
        sel = np.sort(np.argsort(ranks, axis=1)[:, :radius], axis=1)
        neighbor_sets = np.take_along_axis(eligible, sel, axis=1)

    diffs = np.abs(marks[:, None, :] - marks[neighbor_sets])  # (m, radius, p)
    if dither > 0.0:
        noise = rng.uniform(-1.0, 1.0, size=(m, radius, p))
        diffs = diffs * (1.0 + dither * noise)
    cands = np.clip(spec.lower + diffs, spec.lower, spec.upper)

    values = evaluate_batch(spec, cands.reshape(m * radius, p), counter)
    values = values.reshape(m, radius)
    pick = np.argmin(values, axis=1)  # first minimum = lowest index (sets ascend)
    rows = np.arange(m)
    return NeighborhoodProposal(
        coords=cands[rows, pick],
        values=values[rows, pick],
        chosen=neighbor_sets[rows, pick],
        neighbor_sets=neighbor_sets,
    )


def candidate_table_text(marks: np.ndarray, lower: np.ndarray, upper: np.ndarray,
                         radius: int | None = None) -> str:
    """Dump the undithered candidate table as text, one block per dimension:
    rows are marks, columns the eligible (full-radius) neighbor candidates.
    """
    marks = np.asarray(marks, dtype=float)
    if marks.ndim == 1:
        marks = marks[:, None]
    lower = np.broadcast_to(np.asarray(lower, dtype=float), (marks.shape[1],))
    upper = np.broadcast_to(np.asarray(upper, dtype=float), (marks.shape[1],))
    m, p = marks.shape
    radius = m - 2 if radius is None else radius
    eligible = _eligible_matrix(m)[:, :radius]
    lines = []
    for dim in range(p):
        if p > 1:
            lines.append(f"dimension {dim + 1}")
        header = "mark | " + " ".join(f"n{j + 1:>6d}"[-7:] for j in range(radius))
        lines.append(header)
        for i in range(m):
            cells = []
            for j in eligible[i]:
                c = np.clip(lower[dim] + abs(marks[i, dim] - marks[j, dim]),
                            lower[dim], upper[dim])
                cells.append(f"{c:7.6g}")
            lines.append(f"{i + 1:4d} | " + " ".join(cells))
    return "\n".join(lines) + "\n"
