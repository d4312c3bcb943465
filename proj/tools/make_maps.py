#!/usr/bin/env python3
"""Regenerates the scenario grids under assets/.

The two port layouts are hand-tuned approximations of real harbor shapes: an
open convex basin (scenario_a) and a sport wharf with finger piers and narrow
lanes (scenario_b).  Cells: 0 obstacle, 1 navigable, 2 navigable deploy zone.
"""

import os

H, W = 62, 46


def rounded_basin(h, w, corner):
    """Water inside a rounded-rectangle, 1-cell land ring around the border."""
    grid = [[0] * w for _ in range(h)]
    for i in range(1, h - 1):
        for j in range(1, w - 1):
            di = max(0, corner - i, i - (h - 1 - corner))
            dj = max(0, corner - j, j - (w - 1 - corner))
            if di * di + dj * dj <= corner * corner:
                grid[i][j] = 1
    return grid


def fill(grid, i0, i1, j0, j1, value):
    for i in range(i0, i1 + 1):
        for j in range(j0, j1 + 1):
            grid[i][j] = value


def scenario_a():
    g = rounded_basin(H, W, corner=9)
    # headland on the east shore and a stub breakwater; keeps the basin convex
    # enough that straight lines between most cell pairs stay in the water
    fill(g, 0, 14, 38, W - 1, 0)
    fill(g, 26, 29, 0, 7, 0)
    # dock with the deploy apron at the south shore
    fill(g, 56, 58, 16, 27, 2)
    return g


def scenario_b():
    g = rounded_basin(H, W, corner=5)
    # finger piers, 2 cells thick, alternating shore, 4-cell lanes between;
    # every lane only opens at one end, so travel between lanes serpentines
    piers = [8, 14, 20, 26, 32, 38, 44, 50]
    for k, row in enumerate(piers):
        if k % 2 == 0:
            fill(g, row, row + 1, 0, 29, 0)
        else:
            fill(g, row, row + 1, 16, W - 1, 0)
    # deploy apron in the open water south of the last pier
    fill(g, 56, 58, 5, 12, 2)
    return g


def desk_open():
    g = [[1] * 18 for _ in range(24)]
    fill(g, 20, 21, 7, 10, 2)
    return g


def connected(grid):
    h, w = len(grid), len(grid[0])
    start = next((i, j) for i in range(h) for j in range(w) if grid[i][j])
    seen = {start}
    stack = [start]
    while stack:
        i, j = stack.pop()
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                n = (i + di, j + dj)
                if 0 <= n[0] < h and 0 <= n[1] < w and grid[n[0]][n[1]] and n not in seen:
                    seen.add(n)
                    stack.append(n)
    return len(seen) == sum(v != 0 for row in grid for v in row)


def write(path, grid):
    assert connected(grid), path
    h, w = len(grid), len(grid[0])
    water = sum(v != 0 for row in grid for v in row)
    deploy = sum(v == 2 for row in grid for v in row)
    with open(path, "w") as f:
        f.write(f"# {os.path.basename(path)}: {water} navigable, {deploy} deploy cells\n")
        f.write(f"{h} {w}\n")
        for row in grid:
            f.write("".join(str(v) for v in row) + "\n")
    print(f"{path}: {h}x{w}, {water} navigable ({100 * water / (h * w):.0f}%), {deploy} deploy")


def main():
    out = os.path.join(os.path.dirname(__file__), "..", "assets")
    os.makedirs(out, exist_ok=True)
    write(os.path.join(out, "scenario_a.map"), scenario_a())
    write(os.path.join(out, "scenario_b.map"), scenario_b())
    write(os.path.join(out, "desk_open.map"), desk_open())


if __name__ == "__main__":
    main()
