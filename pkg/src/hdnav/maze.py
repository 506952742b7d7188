"""Three-room grid maze with doors, eight placed objects, and a robot.

The layout template: two full-height vertical walls split the 10x20
grid into left/middle/right rooms.  The left wall carries door ``a``
(upper half) and door ``b`` (lower half); the right wall carries ``e``
(upper) and ``d`` (lower).  A horizontal wall spans the middle room at a
random interior row with door ``c`` in it, separating an upper sub-room
(sighted through a and e) from a lower one (b and d).  ``h`` (home) and
``k`` (key) land in the left room, ``t`` (treasure) in the right room;
the robot starts at home.

Walls are blocked cells; doors are ordinary passable cells carrying an
object label.  The relative structure is fixed across trials while the
exact wall columns, door rows, and h/k/t cells vary with the seed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace

import numpy as np

from . import cml
from .grid import DELTAS, DIRECTIONS, Cell, TouchSensors

WIDTH = 20
HEIGHT = 10

OBJECT_LABELS = ("a", "b", "c", "d", "e", "k", "t", "h")
DOOR_LABELS = ("a", "b", "c", "d", "e")

# Line-of-sight graph of the eight objects: 13 undirected pairs, 26
# directed actions.  h/k/a/b see each other across the left room, a-e and
# b-d sight lines cross the middle sub-rooms, c joins both halves, d/e/t
# share the right room.
OBJECT_GRAPH_EDGES = (
    ("h", "k"),
    ("h", "a"),
    ("h", "b"),
    ("k", "a"),
    ("k", "b"),
    ("a", "e"),
    ("b", "d"),
    ("d", "t"),
    ("e", "t"),
    ("a", "c"),
    ("b", "c"),
    ("c", "d"),
    ("c", "e"),
)

GENERATION_ATTEMPT_CAP = 1000


def object_graph() -> cml.CmlGraph:
    """The fixed abstract graph of the eight maze objects."""
    return cml.CmlGraph.from_undirected(list(OBJECT_LABELS), list(OBJECT_GRAPH_EDGES))


@dataclass(frozen=True)
class Maze:
    blocked: frozenset[Cell]
    placements: dict[str, Cell]  # object label -> cell
    robot: Cell
    width: int = WIDTH
    height: int = HEIGHT

    def in_bounds(self, cell: Cell) -> bool:
        return 0 <= cell[0] < self.height and 0 <= cell[1] < self.width

    def passable(self, cell: Cell) -> bool:
        return self.in_bounds(cell) and cell not in self.blocked


def generate_maze(rng: np.random.Generator) -> Maze:
    """Sample a maze from the template; retried until fully connected."""
    for _ in range(GENERATION_ATTEMPT_CAP):
        maze = _sample_layout(rng)
        if _connected_from(maze, maze.placements["h"]):
            return maze
    raise RuntimeError("maze generation failed: no connected layout found")


def _sample_layout(rng: np.random.Generator) -> Maze:
    width, height = WIDTH, HEIGHT
    wall1 = int(rng.integers(2, width // 3 + 1))            # left third, >= 2 off border
    wall2 = int(rng.integers(2 * width // 3, width - 2))    # right third, >= 2 off border
    hrow = int(rng.integers(2, height - 2))                 # interior row of middle wall
    row_a = int(rng.integers(0, min(height // 2, hrow)))    # upper half, above hrow
    row_e = int(rng.integers(0, min(height // 2, hrow)))
    row_b = int(rng.integers(max(height // 2, hrow + 1), height))  # lower half, below
    row_d = int(rng.integers(max(height // 2, hrow + 1), height))
    door_c_col = int(rng.integers(wall1 + 1, wall2))

    blocked = set()
    for row in range(height):
        if row not in (row_a, row_b):
            blocked.add((row, wall1))
        if row not in (row_d, row_e):
            blocked.add((row, wall2))
    for col in range(wall1 + 1, wall2):
        if col != door_c_col:
            blocked.add((hrow, col))

    placements: dict[str, Cell] = {
        "a": (row_a, wall1),
        "b": (row_b, wall1),
        "c": (hrow, door_c_col),
        "d": (row_d, wall2),
        "e": (row_e, wall2),
    }
    left_room = [(r, c) for r in range(height) for c in range(wall1)]
    right_room = [(r, c) for r in range(height) for c in range(wall2 + 1, width)]
    h_pick, k_pick = rng.choice(len(left_room), size=2, replace=False)
    placements["h"] = left_room[int(h_pick)]
    placements["k"] = left_room[int(k_pick)]
    placements["t"] = right_room[int(rng.integers(0, len(right_room)))]

    return Maze(blocked=frozenset(blocked), placements=placements, robot=placements["h"])


def _connected_from(maze: Maze, start: Cell) -> bool:
    free = maze.width * maze.height - len(maze.blocked)
    seen = {start}
    queue = deque([start])
    while queue:
        row, col = queue.popleft()
        for dr, dc in DELTAS.values():
            nxt = (row + dr, col + dc)
            if maze.passable(nxt) and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return len(seen) == free


def sense(maze: Maze, cell: Cell) -> TouchSensors:
    """Touch sensors at a cell: 0 where the neighbor is blocked or off-grid."""
    if not maze.passable(cell):
        raise ValueError(f"cannot sense from blocked cell {cell}")
    values = {}
    for direction in DIRECTIONS:
        dr, dc = DELTAS[direction]
        values[direction.lower()] = int(maze.passable((cell[0] + dr, cell[1] + dc)))
    return TouchSensors(**values)


def move_robot(maze: Maze, direction: str) -> Maze:
    """Advance the robot one cell; illegal moves raise and leave the maze as-is."""
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    dr, dc = DELTAS[direction]
    nxt = (maze.robot[0] + dr, maze.robot[1] + dc)
    if not maze.passable(nxt):
        raise ValueError(f"illegal move {direction} from {maze.robot} into {nxt}")
    return replace(maze, robot=nxt)


def object_at(maze: Maze, cell: Cell) -> str | None:
    """Ground-truth lookup of the object at a cell (None when empty)."""
    for label, placed in maze.placements.items():
        if placed == cell:
            return label
    return None


def close_door(maze: Maze, door: str) -> tuple[Maze, Cell]:
    """Turn a door cell into wall, removing the door from play.

    Returns the updated maze and the closed cell.  The geometry edit
    accompanies zeroing the door's gates in the object-graph learner; the
    cell becomes untraversable so sensors keep the robot honest.
    """
    if door not in DOOR_LABELS:
        raise ValueError(f"not a door: {door!r}")
    cell = maze.placements[door]
    if maze.robot == cell:
        raise ValueError(f"robot occupies door {door!r}")
    placements = {k: v for k, v in maze.placements.items() if k != door}
    return (
        replace(maze, blocked=maze.blocked | {cell}, placements=placements),
        cell,
    )


# --- text serialization ------------------------------------------------------
#
# Header "W H", then H rows of W characters: '#' wall, '.' open cell,
# object letters at their cells, 'r' for the robot.  A robot standing on
# an object cell renders as the uppercase object letter so the format
# round-trips exactly.


def to_text(maze: Maze) -> str:
    grid = [["."] * maze.width for _ in range(maze.height)]
    for row, col in maze.blocked:
        grid[row][col] = "#"
    for label, (row, col) in maze.placements.items():
        grid[row][col] = label
    rr, rc = maze.robot
    grid[rr][rc] = grid[rr][rc].upper() if grid[rr][rc] != "." else "r"
    lines = [f"{maze.width} {maze.height}"]
    lines.extend("".join(row) for row in grid)
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Maze:
    lines = text.strip("\n").split("\n")
    try:
        width, height = (int(part) for part in lines[0].split())
    except (ValueError, IndexError) as exc:
        raise ValueError(f"bad maze header {lines[0]!r}") from exc
    if len(lines) != height + 1:
        raise ValueError(f"expected {height} rows, got {len(lines) - 1}")
    blocked = set()
    placements: dict[str, Cell] = {}
    robot: Cell | None = None
    for row, line in enumerate(lines[1:]):
        if len(line) != width:
            raise ValueError(f"row {row} has length {len(line)}, expected {width}")
        for col, char in enumerate(line):
            if char == "#":
                blocked.add((row, col))
            elif char == "r":
                robot = (row, col)
            elif char.isupper():
                placements[char.lower()] = (row, col)
                robot = (row, col)
            elif char != ".":
                placements[char] = (row, col)
    if robot is None:
        raise ValueError("maze text has no robot")
    return Maze(
        blocked=frozenset(blocked),
        placements=placements,
        robot=robot,
        width=width,
        height=height,
    )
