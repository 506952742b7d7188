"""Hierarchical sequential-goal executor.

Three nested loops wire the modules together.  The outer loop unrolls
the policy one goal at a time.  The middle loop asks the object-graph
learner for the next waypoint object on the way to the goal, looks its
position up in the map memory, and hands that position to the grid
layer.  The inner loop steps the robot cell by cell under touch-sensor
gating until it stands on the waypoint, where the map is queried for the
object found there and the answer feeds the middle loop.

The executor never raises on a failed trial: every abort path is
classified (dithering, step caps, unrecoverable states, unreachable
targets) and reported in the trial result.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from . import cml as cml_mod
from . import hdc, semantic_map
from .grid import Cell, GridCml, grid_step
from .maze import DOOR_LABELS, Maze, move_robot, sense
from .semantic_map import MapMemory, Policy


class FailureReason(enum.Enum):
    NONE = "none"
    DITHER_ABORT = "dither_abort"
    STEP_CAP = "step_cap"
    UNRECOVERABLE_STATE = "unrecoverable_state"
    UNREACHABLE = "unreachable"


@dataclass(frozen=True)
class GoalOutcome:
    goal: str
    reached: bool
    object_path: tuple[str, ...]
    grid_path: tuple[Cell, ...]
    steps: int


@dataclass(frozen=True)
class TrialResult:
    success: bool
    goal_outcomes: tuple[GoalOutcome, ...]
    failure_reason: FailureReason
    dither_cells: tuple[Cell, ...] = ()

    @property
    def total_steps(self) -> int:
        return sum(outcome.steps for outcome in self.goal_outcomes)


@dataclass(frozen=True)
class MissionContext:
    """Everything one trial needs; hypervector dimensions must agree."""

    object_cml: cml_mod.Cml
    grid_cml: GridCml
    memory: MapMemory
    maze: Maze
    policy: Policy
    theta: float = hdc.DEFAULT_THETA      # noise floor for recoveries
    theta_o: float = hdc.DEFAULT_THETA    # policy exhaustion threshold
    phi_o: float = 0.8                    # object-goal arrival similarity
    phi_g: float = 0.999                  # grid arrival similarity
    grid_step_cap: int = 0                # 0 = derive 4 * (W + H)
    object_hop_cap: int = 0               # 0 = derive 2 * n
    mission_cell_cap: int = 0             # 0 = derive 10 * W * H

    def derived_grid_cap(self) -> int:
        return self.grid_step_cap or 4 * (self.maze.width + self.maze.height)

    def derived_hop_cap(self) -> int:
        return self.object_hop_cap or 2 * self.object_cml.graph.n

    def derived_cell_cap(self) -> int:
        return self.mission_cell_cap or 10 * self.maze.width * self.maze.height


def detect_dither(path: list[Cell]) -> tuple[Cell, Cell] | None:
    """The two cells of a position 2-cycle repeated three times, if present."""
    if len(path) < 7:
        return None
    a, b = path[-1], path[-2]
    if a == b:
        return None
    if path[-3] == a and path[-5] == a and path[-4] == b and path[-6] == b:
        return (b, a)
    return None


def remove_door(object_cml: cml_mod.Cml, door: str) -> cml_mod.Cml:
    """Zero the gates of every edge touching a door node.

    Only the gating matrix changes: states, actions, and the cached
    pseudo-inverse stay untouched, so planning reroutes around the
    missing node with no retraining.
    """
    if door not in DOOR_LABELS:
        raise ValueError(f"not a door: {door!r}")
    door_idx = object_cml.graph.node_index(door)
    G = object_cml.G.copy()
    for edge_idx, (src, dst) in enumerate(object_cml.graph.directed_edges):
        if door_idx in (src, dst):
            G[edge_idx, :] = 0.0
    return replace(object_cml, G=G)


@dataclass
class _LegResult:
    maze: Maze
    path: list[Cell]
    reason: FailureReason
    dither_cells: tuple[Cell, ...] = ()


def _grid_leg(
    grid_cml: GridCml,
    maze: Maze,
    target_cell: Cell,
    target_state: np.ndarray,
    phi_g: float,
    step_cap: int,
) -> _LegResult:
    """Drive the robot to a target cell under sensor gating.

    The loop exit is the grid-arrival similarity test, confirmed against
    the environment's true coordinates: duplicate grid states can push
    the similarity past threshold a few cells early, in which case the
    utilities still point at the real target and the leg keeps walking.
    """
    path = [maze.robot]
    while True:
        here = grid_cml.state(maze.robot)
        if (
            hdc.cosine(target_state, here) >= phi_g
            and maze.robot == target_cell
        ):
            return _LegResult(maze=maze, path=path, reason=FailureReason.NONE)
        if len(path) - 1 >= step_cap:
            return _LegResult(maze=maze, path=path, reason=FailureReason.STEP_CAP)
        direction, _ = grid_step(grid_cml, target_state, maze.robot, sense(maze, maze.robot))
        maze = move_robot(maze, direction)
        path.append(maze.robot)
        cycle = detect_dither(path)
        if cycle is not None:
            return _LegResult(
                maze=maze,
                path=path,
                reason=FailureReason.DITHER_ABORT,
                dither_cells=cycle,
            )


def _classify_zero_step(
    object_cml: cml_mod.Cml, target: np.ndarray, current: np.ndarray, theta: float
) -> FailureReason:
    states = object_cml.state_dictionary()
    if hdc.recover(target, states, theta) is None:
        return FailureReason.UNRECOVERABLE_STATE
    if hdc.recover(current, states, theta) is None:
        return FailureReason.UNRECOVERABLE_STATE
    return FailureReason.UNREACHABLE  # recoveries fine, so the node has no open gate


def run_mission(ctx: MissionContext) -> TrialResult:
    """Execute every goal in the policy; returns the full trial trace."""
    maze = ctx.maze
    policy = ctx.policy
    outcomes: list[GoalOutcome] = []
    cells_budget = ctx.derived_cell_cap()
    current_label = "h"  # the robot starts at home and knows it
    o_t = ctx.memory.objects.vector(current_label)

    while True:
        goal_label, policy = semantic_map.next_goal(policy, ctx.memory.objects, ctx.theta_o)
        if goal_label is None:
            break
        o_star = ctx.memory.objects.vector(goal_label)
        object_path = [current_label]
        grid_path: list[Cell] = [maze.robot]
        hops = 0
        failure = FailureReason.NONE
        dither: tuple[Cell, ...] = ()

        while hdc.cosine(o_star, o_t) < ctx.phi_o:
            if hops >= ctx.derived_hop_cap():
                failure = FailureReason.STEP_CAP
                break
            hops += 1
            planned = cml_mod.step(ctx.object_cml, o_star, o_t, ctx.theta)
            if planned.is_zero:
                failure = _classify_zero_step(ctx.object_cml, o_star, o_t, ctx.theta)
                break
            pos_label = semantic_map.query_position(
                ctx.memory, planned.predicted_next, ctx.theta
            )
            if pos_label is None:
                failure = FailureReason.UNRECOVERABLE_STATE
                break
            leg = _grid_leg(
                ctx.grid_cml,
                maze,
                semantic_map.parse_position_label(pos_label),
                ctx.memory.positions.vector(pos_label),
                ctx.phi_g,
                min(ctx.derived_grid_cap(), cells_budget),
            )
            maze = leg.maze
            cells_budget -= len(leg.path) - 1
            grid_path.extend(leg.path[1:])
            if leg.reason is not FailureReason.NONE:
                failure = leg.reason
                dither = leg.dither_cells
                break
            found = semantic_map.query_object(
                ctx.memory, ctx.grid_cml.state(maze.robot), ctx.theta
            )
            if found is not None:  # non-recoveries are ignored
                o_t = ctx.memory.objects.vector(found)
                current_label = found
                object_path.append(found)

        reached = failure is FailureReason.NONE
        outcomes.append(
            GoalOutcome(
                goal=goal_label,
                reached=reached,
                object_path=tuple(object_path),
                grid_path=tuple(grid_path),
                steps=len(grid_path) - 1,
            )
        )
        if not reached:
            return TrialResult(
                success=False,
                goal_outcomes=tuple(outcomes),
                failure_reason=failure,
                dither_cells=dither,
            )

    return TrialResult(
        success=bool(outcomes) and all(o.reached for o in outcomes),
        goal_outcomes=tuple(outcomes),
        failure_reason=FailureReason.NONE,
    )


def run_grid_only(
    grid_cml: GridCml,
    maze: Maze,
    phi_g: float = 0.999,
    grid_step_cap: int = 0,
) -> TrialResult:
    """Key-to-treasure traversal with the grid layer and sensors alone.

    No object graph, no map: the target is the treasure cell's state.
    Greedy utility steering cannot see doors displaced from its straight
    line, so a sizeable fraction of mazes ends in a dithering abort; the
    result carries the classification for the baseline statistic.
    """
    start = maze.placements["k"]
    target_cell = maze.placements["t"]
    leg = _grid_leg(
        grid_cml,
        replace(maze, robot=start),
        target_cell,
        grid_cml.state(target_cell),
        phi_g,
        grid_step_cap or 4 * (maze.width + maze.height),
    )
    reached = leg.reason is FailureReason.NONE
    outcome = GoalOutcome(
        goal="t",
        reached=reached,
        object_path=("k", "t") if reached else ("k",),
        grid_path=tuple(leg.path),
        steps=len(leg.path) - 1,
    )
    return TrialResult(
        success=reached,
        goal_outcomes=(outcome,),
        failure_reason=leg.reason,
        dither_cells=leg.dither_cells,
    )
