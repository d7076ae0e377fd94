"""Regenerates data/wr36.csv.

Three speeds (8, 12, 17 m/s) over 36 directions at 10 deg spacing. The
direction shares are a flat floor plus a Gaussian bump centred on 300 deg;
each sector splits 0.18 / 0.30 / 0.52 across the three speeds. The shape
is a reconstruction read off the published rose figure; the speed split is
calibrated so that a lone turbine under 0.3 u^3 produces about 950 kW, in
line with the efficiencies reported for this benchmark.
"""
import math
import sys

PEAK_DEG = 300.0
WIDTH_DEG = 45.0
FLOOR = 0.3
SPEEDS = (8.0, 12.0, 17.0)
SPLIT = (0.18, 0.30, 0.52)


def main(path):
    dirs = [10.0 * i for i in range(36)]
    weights = []
    for d in dirs:
        off = min(abs(d - PEAK_DEG), 360.0 - abs(d - PEAK_DEG))
        weights.append(FLOOR + math.exp(-0.5 * (off / WIDTH_DEG) ** 2))
    total = sum(weights)
    with open(path, "w") as f:
        f.write("# 36-direction, 3-speed benchmark rose (reconstructed, see tools/make_wr36.py)\n")
        f.write("speed_ms,direction_deg,probability\n")
        for d, w in zip(dirs, weights):
            for u, s in zip(SPEEDS, SPLIT):
                f.write(f"{u:g},{d:g},{w / total * s:.17g}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/wr36.csv")
