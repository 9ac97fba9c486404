"""Walkthrough: indifference-curve fanning on the probability triangle.

Lotteries over three fixed prizes live on a 2-simplex.  With concavity
rising toward safer references, sampled indifference slopes steepen
toward dominating lotteries (fan out).  The script classifies a fitted
grid and writes the CSV used for plotting the field.
"""

import sys
from fractions import Fraction as F

from refdep import AreuParams, ReferenceOrder, fanning_classify, triangle_rows

PRIZES = (F(0), F(1), F(3))
RESOLUTION = 10


def grid(k):
    points = {}
    for i in range(k + 1):
        for j in range(k + 1 - i):
            points[f"g{i}_{j}"] = (F(i, k), F(k - i - j, k), F(j, k))
    return points


points = grid(RESOLUTION)
ranking = sorted(points, key=lambda a: (points[a][0], -points[a][2], a))
neutral = (PRIZES[1] - PRIZES[0]) / (PRIZES[2] - PRIZES[0])
n = len(ranking)
utilities = {a: (F(0), neutral + (1 - neutral) * F(n - r, n + 1), F(1))
             for r, a in enumerate(ranking)}
params = AreuParams.build(PRIZES, points, ReferenceOrder(tuple(ranking)),
                          utilities)

report = fanning_classify(params, PRIZES, RESOLUTION)
print("classification:", report.category.value)
print("risk-neutral slope:", report.neutral_slope)
print("sampled comparisons:", len(report.samples))
flat = sorted({s.slope for s in report.samples})
print(f"slope range: {flat[0]} .. {flat[-1]}")

out = sys.argv[1] if len(sys.argv) > 1 else "triangle.csv"
rows = triangle_rows(params, PRIZES, RESOLUTION)
with open(out, "w") as fh:
    fh.write("p_b,p_w,reference_id,utility_level\n")
    for row in rows:
        fh.write(",".join(row) + "\n")
print(f"wrote {len(rows)} grid rows to {out}")
