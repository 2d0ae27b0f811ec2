"""Shared test grids and the acceptance summary section."""

from __future__ import annotations

from pathlib import Path

from gridsigns import GridDiagram, parse_grid

GRIDS_DIR = Path(__file__).resolve().parent.parent / "grids"

G1 = GridDiagram(1, (1,), (1,))
G2U = GridDiagram(2, (1, 2), (1, 2))  # two-component unlink
G2K = GridDiagram(2, (2, 1), (1, 2))  # unknot
G3U = GridDiagram(3, (1, 2, 3), (1, 2, 3))  # three-component unlink
G3C = GridDiagram(3, (2, 3, 1), (1, 2, 3))  # unknot on three rows
G4H = GridDiagram(4, (3, 4, 1, 2), (1, 2, 3, 4))  # Hopf link
G5T = GridDiagram(5, (3, 4, 5, 1, 2), (1, 2, 3, 4, 5))  # trefoil
G6F = GridDiagram(6, (3, 6, 1, 5, 4, 2), (1, 2, 4, 3, 6, 5))  # figure eight


def bundled_grids() -> list[tuple[str, GridDiagram]]:
    out = []
    for path in sorted(GRIDS_DIR.glob("*.grid")):
        out.append((path.stem, parse_grid(path.read_text())))
    return out


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    try:
        import test_acceptance as acc
    except ImportError:
        return
    if not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, label, budget in acc.CRITERIA:
        res = acc.RESULTS.get(num)
        if res is None:
            line = f"[{num}/{len(acc.CRITERIA)}] {label:<58} NOT RUN"
        else:
            state = "PASS" if res["ok"] else "FAIL"
            line = (
                f"[{num}/{len(acc.CRITERIA)}] {label:<58} {state} "
                f"{res['seconds']:.2f}s (budget {budget:g}s)"
            )
        terminalreporter.write_line(line)
