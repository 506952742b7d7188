"""Associative object-position memory and the permutation-encoded goal policy.

The map hypervector is the signed bundle of the eight object/position
bindings (one per placed object, plus a tie-break vector to keep the
total bipolar):

    map = sgn(sgn(o_1 * p_1) + ... + sgn(o_8 * p_8) + eta)

Binding the map with an object vector releases a noisy copy of that
object's position, cleaned up against the trial's eight known position
states; binding with a position state releases the object stored there.
Grid states of different cells can be strongly correlated, so not every
arrangement yields a map whose recoveries are all unambiguous; the
``check_viability`` predicate tells usable maps apart and the harness
regenerates mazes that fail it.

A goal policy is a bundle of permuted object vectors, the i-th goal
shifted i places.  Unpermuting once exposes the next goal above the
noise floor; when the rotation runs past the last goal the recovery
falls below threshold, signalling completion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import hdc
from .grid import Cell, GridCml
from .maze import OBJECT_LABELS, Maze


def position_label(cell: Cell) -> str:
    return f"{cell[0]},{cell[1]}"


def parse_position_label(label: str) -> Cell:
    row, col = label.split(",")
    return (int(row), int(col))


@dataclass(frozen=True)
class MapMemory:
    """The map hypervector plus the trial's explicit dictionaries.

    ``positions`` holds the eight grid-state columns keyed by stringified
    cell coordinates; ``cell_of`` bridges object labels to cells for
    oracles and dictionary construction.
    """

    map_hv: np.ndarray
    objects: hdc.Dictionary
    positions: hdc.Dictionary
    cell_of: dict[str, Cell]

    def position_of(self, label: str) -> str:
        return position_label(self.cell_of[label])


@dataclass(frozen=True)
class Policy:
    """Bundled goal sequence; ``remaining`` counts goals not yet revealed."""

    policy_hv: np.ndarray
    remaining: int


def build_map(
    objects: hdc.Dictionary, maze: Maze, grid_cml: GridCml, rng: np.random.Generator
) -> MapMemory:
    """Bind each object to the state of its cell and bundle the signed terms."""
    terms = []
    position_pairs = []
    cell_of: dict[str, Cell] = {}
    for label in OBJECT_LABELS:
        cell = maze.placements[label]
        state = grid_cml.state(cell)
        terms.append(hdc.sign(hdc.bind(objects.vector(label), state)))
        position_pairs.append((position_label(cell), state.copy()))
        cell_of[label] = cell
    map_hv = hdc.bundle(terms, rng)  # even count, so bundle adds the tie-break eta
    return MapMemory(
        map_hv=map_hv,
        objects=objects,
        positions=hdc.Dictionary.from_pairs(position_pairs),
        cell_of=cell_of,
    )


def check_viability(memory: MapMemory, theta: float = hdc.DEFAULT_THETA) -> bool:
    """True when every object's position recovers unambiguously from the map.

    Grid states of different cells can be strongly correlated, so a
    sizeable share of arrangements yields maps whose position recoveries
    collide; those maps are unusable and counted by the viability
    statistic.
    """
    for label in memory.objects.labels:
        query = hdc.bind(memory.map_hv, memory.objects.vector(label))
        if hdc.recover(query, memory.positions, theta) != memory.position_of(label):
            return False
    return True


def mission_ready(memory: MapMemory, theta: float = hdc.DEFAULT_THETA) -> bool:
    """Viability plus reliable arrival feedback: the full round trip.

    The executor also queries the object found at each arrival cell, and
    with near-parallel grid states that reverse direction can collide on
    maps whose forward recoveries are clean.  The mission harness
    regenerates mazes until both directions hold for all eight objects.
    """
    if not check_viability(memory, theta):
        return False
    for label in memory.objects.labels:
        position_state = memory.positions.vector(memory.position_of(label))
        if query_object(memory, position_state, theta) != label:
            return False
    return True


def query_position(
    memory: MapMemory, object_hv: np.ndarray, theta: float = hdc.DEFAULT_THETA
) -> str | None:
    """Position label of the object bound into the map; None below threshold.

    Works for approximate object vectors (e.g. planner predictions), not
    just exact dictionary entries.
    """
    return hdc.recover(hdc.bind(memory.map_hv, object_hv), memory.positions, theta)


def query_object(
    memory: MapMemory, position_hv: np.ndarray, theta: float = hdc.DEFAULT_THETA
) -> str | None:
    """Object label stored at a grid position; None at object-free cells.

    The position input is sign-normalised before unbinding: grid states
    of nearby cells differ mostly in magnitude profile, and comparing
    sign patterns against sign patterns keeps the stored object
    separable from its angular neighbors even where raw-state cosines
    crowd toward 1.
    """
    return hdc.recover(
        hdc.bind(memory.map_hv, hdc.sign(position_hv)), memory.objects, theta
    )


def encode_policy(
    goals: list[str], objects: hdc.Dictionary, rng: np.random.Generator
) -> Policy:
    """Bundle the goal vectors, the i-th goal permuted by i (1-based)."""
    if not goals:
        raise ValueError("policy needs at least one goal")
    for goal in goals:
        if goal not in objects:
            raise ValueError(f"unknown goal object {goal!r}")
    terms = [hdc.permute(objects.vector(goal), i) for i, goal in enumerate(goals, start=1)]
    return Policy(policy_hv=hdc.bundle(terms, rng), remaining=len(goals))


def next_goal(
    policy: Policy, objects: hdc.Dictionary, theta: float = hdc.DEFAULT_THETA
) -> tuple[str | None, Policy]:
    """Unpermute the policy once and recover the revealed goal.

    Returns (label, advanced policy); a None label means the policy is
    exhausted (the unpermuted vector no longer resembles any object).
    """
    unrolled = hdc.permute(policy.policy_hv, -1)
    label = hdc.recover(unrolled, objects, theta)
    advanced = Policy(policy_hv=unrolled, remaining=max(policy.remaining - 1, 0))
    return label, advanced
