"""Independent oracle for the 20-sample golden sweep report.

Writes the fixture (tests/data/golden20.mia.jsonl) and prints the expected
CSV report computed with brute-force metrics: AUROC from all member/nonmember
pairs, TPR/FPR operating points by enumerating every candidate threshold.
Run once; the output is frozen in tests/data/golden20_report.csv.
"""
import json
import math
import sys
import zlib
from pathlib import Path

WORDS = ["The", "Quick", "river", "Paris", "model", "Token", "quiet", "NEWS",
         "garden", "Alice", "copper", "window"]


def lcg(seed):
    state = seed
    while True:
        state = (1103515245 * state + 12345) % (2 ** 31)
        yield state >> 16


def build_fixture():
    records = []
    gen = lcg(2024)
    for i in range(20):
        member = i < 10
        length = 5 + next(gen) % 8
        base = 2 if member else 3
        # quarter-valued log-probs; deep tokens are likelier in non-members
        lps = []
        for _ in range(length):
            q = base + next(gen) % 10
            if next(gen) % (5 if not member else 11) == 0:
                q += 14
            lps.append(-q / 4.0)
        lower = [-(base + 1 + next(gen) % 8) / 4.0 for _ in range(length)]
        neighbors = [[-(2 + next(gen) % 8) / 4.0 for _ in range(length)]
                     for _ in range(3)]
        text = " ".join(WORDS[next(gen) % len(WORDS)] for _ in range(length + 1))
        records.append({
            "id": f"{'m' if member else 'n'}{i % 10:02d}",
            "label": "member" if member else "nonmember",
            "text": text,
            "token_logprobs": lps,
            "aux": {"lowercase_logprobs": lower, "neighbor_logprobs": neighbors},
        })
    return records


def mean_nll(seq):
    return -sum(seq) / len(seq)


def gamma(k, n):
    return min(max(1, math.floor(k * n + 1e-9)), n)


def lowest_mean(values, k):
    g = gamma(k, len(values))
    return sum(sorted(values)[:g]) / g


def score(rec, attack, k, w):
    lp = rec["token_logprobs"]
    if attack == "loss":
        return -mean_nll(lp)
    if attack == "lowercase":
        return mean_nll(rec["aux"]["lowercase_logprobs"]) / mean_nll(lp)
    if attack == "zlib":
        return -mean_nll(lp) / len(zlib.compress(rec["text"].encode(), 6))
    if attack == "neighborhood":
        nb = rec["aux"]["neighbor_logprobs"]
        return -(mean_nll(lp) - sum(mean_nll(s) for s in nb) / len(nb))
    if attack == "min_k":
        return lowest_mean(lp, k)
    if attack == "win_k":
        windows = [sum(lp[j:j + w]) / w for j in range(len(lp) - w + 1)]
        return lowest_mean(windows, k)
    raise ValueError(attack)


def metrics(values, labels):
    pos = [v for v, m in zip(values, labels) if m]
    neg = [v for v, m in zip(values, labels) if not m]
    pairs = sum(1.0 if p > q else 0.5 if p == q else 0.0
                for p in pos for q in neg)
    auroc = pairs / (len(pos) * len(neg))
    points = [(0.0, 0.0)]
    for t in sorted(set(values), reverse=True):
        points.append((sum(q >= t for q in neg) / len(neg),
                       sum(p >= t for p in pos) / len(pos)))
    points.append((1.0, 1.0))
    tpr = max(t for f, t in points if f <= 0.01)
    fpr = min(f for f, t in points if t >= 0.99)
    return auroc, tpr, fpr, len(pos), len(neg)


def main():
    root = Path(__file__).resolve().parents[1]
    records = build_fixture()
    if "--write-fixture" in sys.argv:
        with open(root / "data" / "golden20.mia.jsonl", "w") as f:
            for r in records:
                f.write(json.dumps(r, separators=(",", ":")) + "\n")
    k_grid, w_grid = [0.2, 0.5], [1, 2, 3]
    cells = [("loss", None, None), ("lowercase", None, None),
             ("zlib", None, None), ("neighborhood", None, None)]
    cells += [("min_k", k, None) for k in k_grid]
    cells += [("win_k", k, w) for w in w_grid for k in k_grid]
    labels = [r["label"] == "member" for r in records]
    print("attack,k,w,auroc,tpr_at_fpr_0.01,fpr_at_tpr_0.99,"
          "n_members,n_nonmembers")
    for attack, k, w in cells:
        vals = [score(r, attack, k, w) for r in records]
        a, t, f, nm, nn = metrics(vals, labels)
        ks = "" if k is None else f"{k:.4f}"
        ws = "" if w is None else str(w)
        print(f"{attack},{ks},{ws},{a:.4f},{t:.4f},{f:.4f},{nm},{nn}")


if __name__ == "__main__":
    main()
