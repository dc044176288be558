"""Minimum-cost routing on the 4-connected tile grid.

Path cost is the sum of the per-tile traversal costs of every tile
entered (the start tile is free). Blocked tiles are never entered.
Ties are broken on tile coordinates so plans are deterministic.
"""

from __future__ import annotations

import heapq

import numpy as np

Tile = tuple[int, int]

STEPS_4 = ((1, 0), (-1, 0), (0, 1), (0, -1))


def plan_path(
    cost: np.ndarray, blocked: np.ndarray, start: Tile, goal: Tile
) -> list[Tile]:
    """Cheapest 4-connected path from start to goal, as [(ix, iy), ...].

    Includes both endpoints. Returns [] iff the goal is unreachable or
    blocked. A blocked start tile may still be departed from.
    """
    h, w = cost.shape
    sx, sy = start
    gx, gy = goal
    if not (0 <= sx < w and 0 <= sy < h and 0 <= gx < w and 0 <= gy < h):
        raise ValueError(f"start {start} or goal {goal} outside {w}x{h} grid")
    if blocked[gy, gx]:
        return []
    if start == goal:
        return [start]

    dist = np.full((h, w), np.inf)
    dist[sy, sx] = 0.0
    prev: dict[Tile, Tile] = {}
    frontier: list[tuple[float, int, int]] = [(0.0, sx, sy)]
    while frontier:
        d, x, y = heapq.heappop(frontier)
        if d > dist[y, x]:
            continue
        if (x, y) == goal:
            break
        for dx, dy in STEPS_4:
            nx, ny = x + dx, y + dy
            if not (0 <= nx < w and 0 <= ny < h) or blocked[ny, nx]:
                continue
            nd = d + cost[ny, nx]
            if nd < dist[ny, nx]:
                dist[ny, nx] = nd
                prev[(nx, ny)] = (x, y)
                heapq.heappush(frontier, (nd, nx, ny))

    if not np.isfinite(dist[gy, gx]):
        return []
    path = [goal]
    while path[-1] != start:
        path.append(prev[path[-1]])
    path.reverse()
    return path


def path_cost(cost: np.ndarray, path: list[Tile]) -> float:
    """Total cost of a path under the entered-tile convention."""
    return float(sum(cost[y, x] for x, y in path[1:]))
