"""Reference values for the formula oracles, evaluated with 50-digit mpmath.

Run from this directory: python3 make_oracles.py
"""
import random

from mpmath import mp, mpf, log, sqrt

mp.dps = 50
rng = random.Random(20170728)


def ucb_rows(n_rows=1000):
    rows = []
    for _ in range(n_rows):
        n = int(10 ** rng.uniform(0, 6))
        w = rng.randint(0, n)
        t = int(10 ** rng.uniform(0.31, 7))
        alpha = rng.uniform(0.01, 4.0)
        value = mpf(w) / n + sqrt(mpf(alpha) * log(t) / n)
        rows.append(f"{w},{n},{t},{alpha!r},{mp.nstr(value, 30)}")
    return rows


def kl_half(p):
    d = mpf(0)
    if p > 0:
        d += p * log(p / mpf("0.5"))
    if p < 1:
        d += (1 - p) * log((1 - p) / mpf("0.5"))
    return d


def rmed_rows(n_rows=1000):
    rows = []
    for _ in range(n_rows):
        k = rng.randint(2, 6)
        w = [[0 if i == j else rng.randint(0, 200) for j in range(k)] for i in range(k)]
        i = rng.randrange(k)
        total = mpf(0)
        for j in range(k):
            n = w[i][j] + w[j][i]
            if j == i or n == 0:
                continue
            p = mpf(w[i][j]) / n
            if p <= mpf("0.5"):
                total += n * kl_half(p)
        flat = " ".join(str(x) for row in w for x in row)
        rows.append(f"{k},{i},{flat},{mp.nstr(total, 30)}")
    return rows


def dcg(grades, k):
    return sum((mpf(2) ** g - 1) / log(i + 2, 2) for i, g in enumerate(grades[:k]))


NDCG_CASES = [
    ([2, 0, 1], [2, 1, 0], 3),
    ([0, 1, 2], [2, 1, 0], 3),
    ([1, 0, 0, 1], [1, 1, 0, 0], 4),
    ([0, 0, 0, 1], [1, 0, 0, 0], 4),
    ([4, 3, 2, 1, 0], [0, 1, 2, 3, 4], 5),
    ([3, 4, 0, 2, 1, 0], [4, 3, 2, 1, 0, 0], 6),
    ([1, 2, 0, 0, 2, 1, 0, 0, 0, 1, 2, 0], [2, 2, 2, 1, 1, 1, 0, 0, 0, 0, 0, 0], 10),
    ([0, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 2], [2, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0], 10),
    ([2, 1], [2, 1, 2, 2], 2),
    ([0, 3, 0, 3, 0, 3, 0, 3], [3, 3, 3, 3, 0, 0, 0, 0], 8),
]


def ndcg_rows():
    rows = []
    for ranking, everything, k in NDCG_CASES:
        ideal = sorted(everything, reverse=True)
        value = dcg(ranking, k) / dcg(ideal, k)
        r = " ".join(map(str, ranking))
        a = " ".join(map(str, everything))
        rows.append(f"{r},{a},{k},{mp.nstr(value, 30)}")
    return rows


def write(name, header, rows):
    with open(name, "w") as f:
        f.write(header + "\n")
        f.write("\n".join(rows) + "\n")


write("ucb.csv", "w,n,t,alpha,value", ucb_rows())
write("rmed.csv", "k,arm,wins_row_major,value", rmed_rows())
write("ndcg.csv", "ranking,all_grades,k,value", ndcg_rows())
