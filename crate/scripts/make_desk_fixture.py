#!/usr/bin/env python3
"""Writes the week-long desk fixture series into crates/core/fixtures/desk/.

Usage: make_desk_fixture.py [out_dir]

demand.csv holds grid load and hydrogen demand; cf_<label>.csv holds the
wind and solar capacity factors of one weather year. Shapes match the
synthetic series used by the integration tests.
"""
import math
import sys
from pathlib import Path

HOURS = 168
H2_TPH = 18.4

# label -> (wind level, swell phase)
YEARS = {
    "y1": (1.10, 0.0),
    "y2": (1.00, 1.3),
    "y3": (0.90, 2.6),
    "y4": (0.80, 0.7),
    "y5": (1.05, 3.9),
}


def wind(t: int, level: float, phase: float) -> float:
    v = 0.5 + 0.3 * math.sin(2 * math.pi * t / 61 + phase) + 0.1 * math.cos(2 * math.pi * t / 24 + 1)
    return min(max(level * v, 0.0), 1.0)


def solar(t: int) -> float:
    h = t % 24
    return 0.85 * math.sin(math.pi * (h - 6) / 12) if 6 <= h < 18 else 0.0


def load(t: int) -> float:
    return 1000 + 250 * math.sin(2 * math.pi * ((t % 24) - 11) / 24)


def fmt(x: float) -> str:
    return f"{x:.6f}"


def main() -> int:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "crates/core/fixtures/desk"
    out.mkdir(parents=True, exist_ok=True)
    rows = ["hour,grid_load,h2_demand"]
    rows += [f"{t + 1},{fmt(load(t))},{H2_TPH}" for t in range(HOURS)]
    (out / "demand.csv").write_text("\n".join(rows) + "\n")
    for label, (level, phase) in YEARS.items():
        rows = ["hour,wind,solar"]
        rows += [f"{t + 1},{fmt(wind(t, level, phase))},{fmt(solar(t))}" for t in range(HOURS)]
        (out / f"cf_{label}.csv").write_text("\n".join(rows) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
