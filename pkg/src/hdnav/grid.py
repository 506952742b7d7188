"""Grid-position map learner: shared cardinal actions, touch-sensor gating.

Physical grids let one action matrix column serve every cell: movement
east from any cell adds the same action vector.  Two random Gaussian
action vectors are drawn for south and east; north and west are their
exact negations, so opposite moves cancel (``a_s + a_n = 0``).

The cell states P (one column per cell, row-major indexing) start from
zero and are trained against the fixed actions over every directed
adjacency until ``p_neighbor ~= p_cell + a_direction`` holds everywhere.

Navigation differs from the abstract learner in two ways: the action
utilities use the plain transpose of the action matrix instead of a
pseudo-inverse, and the per-node gating matrix is replaced by the live
touch-sensor vector in [E, S, N, W] order (0 = wall contact).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cml import select_action

Cell = tuple[int, int]  # (row, col); (0, 0) is the northwest corner

DIRECTIONS = ("E", "S", "N", "W")
DELTAS: dict[str, Cell] = {"E": (0, 1), "S": (1, 0), "N": (-1, 0), "W": (0, -1)}

DEFAULT_GRID_LEARNING_RATE = 0.05
DEFAULT_GRID_EPOCH_CAP = 20_000


@dataclass(frozen=True)
class TouchSensors:
    """Four contact sensors; 0 means a wall (or the grid edge) in that direction."""

    e: int
    s: int
    n: int
    w: int

    def as_gate(self) -> np.ndarray:
        return np.array([self.e, self.s, self.n, self.w], dtype=float)


@dataclass(frozen=True)
class GridCml:
    """Trained grid learner: cell states P and the fixed 4-column action matrix."""

    P: np.ndarray  # (d, width * height), column row*width + col for cell (row, col)
    A4: np.ndarray  # (d, 4) in [E, S, N, W] order
    width: int
    height: int

    @property
    def d(self) -> int:
        return self.P.shape[0]

    def cell_index(self, cell: Cell) -> int:
        row, col = cell
        if not (0 <= row < self.height and 0 <= col < self.width):
            raise ValueError(f"cell {cell} outside {self.height}x{self.width} grid")
        return row * self.width + col

    def state(self, cell: Cell) -> np.ndarray:
        return self.P[:, self.cell_index(cell)]


def build_actions(d: int, rng: np.random.Generator) -> np.ndarray:
    """Draw south/east action vectors and derive north/west by negation.

    Columns are ordered [E, S, N, W] to match the sensor gate.  The
    vectors are Gaussian N(0, 1) like every learned action column; only
    their direction matters to the cosine arithmetic downstream.
    """
    if d < 4:
        raise ValueError(f"need d >= 4, got {d}")
    a_s = rng.normal(0.0, 1.0, size=d)
    a_e = rng.normal(0.0, 1.0, size=d)
    return np.stack([a_e, a_s, -a_s, -a_e], axis=1)


def directed_edge_count(width: int, height: int) -> int:
    """Directed adjacencies of the full grid: 2 * ((W-1) H + (H-1) W)."""
    return 2 * ((width - 1) * height + (height - 1) * width)


def train_grid(
    width: int,
    height: int,
    d: int,
    A4: np.ndarray,
    learning_rate: float = DEFAULT_GRID_LEARNING_RATE,
    convergence_tol: float | None = None,
    epoch_cap: int = DEFAULT_GRID_EPOCH_CAP,
) -> GridCml:
    """Train P from zeros over all directed grid adjacencies, actions fixed.

    Each epoch accumulates, for every directed edge (i -> j) with action
    a, the batch update that shrinks the prediction error
    ``p_j - (p_i + a)``: the source column gains ``lr * err`` and the
    destination column loses it.  West/north edges mirror east/south
    edges exactly (their actions are negations), contributing the same
    update again, so the loop below walks east and south slices and
    applies each update twice.  Convergence is the mean error norm over
    all directed edges dropping below ``convergence_tol`` (default
    1e-2 * sqrt(d)).
    """
    if width * height < 2:
        raise ValueError("grid needs at least two cells")
    if convergence_tol is None:
        convergence_tol = 1e-2 * np.sqrt(d)
    P3 = np.zeros((d, height, width))
    a_e = A4[:, 0][:, None, None]
    a_s = A4[:, 1][:, None, None]
    for _ in range(epoch_cap):
        err_e = P3[:, :, 1:] - (P3[:, :, :-1] + a_e)
        err_s = P3[:, 1:, :] - (P3[:, :-1, :] + a_s)
        mean_residual = float(
            np.concatenate(
                [
                    np.sqrt((err_e**2).sum(axis=0)).ravel(),
                    np.sqrt((err_s**2).sum(axis=0)).ravel(),
                ]
            ).mean()
        )
        if mean_residual < convergence_tol:
            return GridCml(
                P=P3.reshape(d, height * width), A4=A4.copy(), width=width, height=height
            )
        upd = np.zeros_like(P3)
        upd[:, :, :-1] += (2 * learning_rate) * err_e
        upd[:, :, 1:] -= (2 * learning_rate) * err_e
        upd[:, :-1, :] += (2 * learning_rate) * err_s
        upd[:, 1:, :] -= (2 * learning_rate) * err_s
        P3 += upd
    raise RuntimeError(
        f"grid training failed to converge: residual {mean_residual:.3g} "
        f"after {epoch_cap} epochs"
    )


def grid_utility(grid_cml: GridCml, target: np.ndarray, current: np.ndarray) -> np.ndarray:
    """Transpose utility u = A4^T (target - current), one score per direction.

    The regular structure of trained grid states makes the transpose as
    good a direction scorer as the pseudo-inverse, and opposite actions
    get exactly opposite scores.
    """
    return grid_cml.A4.T @ (target - current)


def grid_step(
    grid_cml: GridCml,
    target: np.ndarray,
    current_cell: Cell,
    sensors: TouchSensors,
) -> tuple[str, Cell]:
    """One sensor-gated move toward the target state.

    The environment owns the true coordinates: the current state is the
    P column of ``current_cell``, the gated winner-take-all (largest
    nonzero score, even if negative) picks a direction, and the returned
    next cell is one step that way.
    """
    gate = sensors.as_gate()
    u = grid_utility(grid_cml, target, grid_cml.state(current_cell))
    pick = select_action(u, gate)
    if pick is None:
        raise ValueError(f"no legal move from {current_cell}: all sensors report walls")
    direction = DIRECTIONS[pick]
    dr, dc = DELTAS[direction]
    return direction, (current_cell[0] + dr, current_cell[1] + dc)
