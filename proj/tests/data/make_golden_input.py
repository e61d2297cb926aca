"""Regenerates golden_input.csv: 30 respondents x 4 items on a 1-5 scale."""
import random

rng = random.Random(2024)
weights = {
    "agree_high": [1, 2, 5, 12, 10],
    "balanced": [4, 6, 8, 6, 4],
    "disagree": [10, 9, 6, 3, 2],
    "spread": [7, 4, 2, 4, 7],
}
with open("golden_input.csv", "w", newline="\n") as f:
    f.write(",".join(weights) + "\n")
    for _ in range(30):
        row = [str(rng.choices(range(1, 6), w)[0]) for w in weights.values()]
        f.write(",".join(row) + "\n")
