#!/usr/bin/env python3
"""Independent recount of the fixture build.

Re-derives, without using the Rust code, the numbers a `trialonto build`
run must report for a corpus/lexicon/scaffold triple: mention counts, the
seed set, the enrichment queue, the two-class threshold p (by enumerating
every split in exact fractions), coverage before and after enrichment and
manual additions, and the final class list.

Matching here is brute force: every token-aligned substring of a normalized
line is looked up, then matches are chosen left to right, longest first.

Usage:
  scripts/recount.py --corpus fixtures/corpus.jsonl --lexicon fixtures/lexicon.tsv \
      --scaffold fixtures/scaffold.toml --manual-additions fixtures/manual_additions.tsv \
      --seed-size 2 --disable SDoH > fixtures/expected/expected.json
"""

import argparse
import json
import re
import sys
import unicodedata
from collections import Counter
from fractions import Fraction

CATEGORIES = ["DiagnosticTest", "Disease", "Fertility", "Medication", "Procedure", "RatingCriteria", "SDoH"]


def normalize(text):
    t = unicodedata.normalize("NFKC", text)
    t = unicodedata.normalize("NFKC", t.lower())
    out = []
    for ch in t:
        if unicodedata.category(ch).startswith("P") and ch not in "'’-":
            out.append(" ")
        else:
            out.append(ch)
    return " ".join("".join(out).split())


HEADER = re.compile(r"^(inclusion|exclusion) criteria", re.IGNORECASE)
MARKER = re.compile(r"^(?:[-*•]|[0-9]+[.)](?![0-9]))\s*")


def segment(text):
    items = []
    polarity = "unknown"
    current = None

    def flush():
        nonlocal current
        if current is not None and current.strip():
            items.append((polarity, current))
        current = None

    for raw in text.split("\n"):
        line = raw.strip()
        if not line:
            flush()
            continue
        m = HEADER.match(line)
        if m:
            flush()
            polarity = m.group(1).lower()
            continue
        m = MARKER.match(line)
        if m:
            flush()
            current = line[m.end():]
            continue
        current = line if not current else current + " " + line
    flush()
    return items


def load_lexicon(path):
    surfaces = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            surface, concept, category = line.split("\t")
            surfaces[normalize(surface)] = (concept, category.strip())
    return surfaces


def matches(text, surfaces):
    """Brute-force token-aligned matches chosen left to right, longest first."""
    if not text:
        return []
    cands = []
    n = len(text)
    for start in range(n):
        if start > 0 and text[start - 1] != " ":
            continue
        for end in range(start + 1, n + 1):
            if end < n and text[end] != " ":
                continue
            if text[start:end] in surfaces:
                cands.append((start, end))
    chosen = []
    pos = 0
    while True:
        nxt = [c for c in cands if c[0] >= pos]
        if not nxt:
            break
        start = min(c[0] for c in nxt)
        end = max(c[1] for c in nxt if c[0] == start)
        chosen.append(surfaces[text[start:end]])
        pos = end
    return chosen


def scaffold_info(path):
    """Class ids and default parents from the scaffold's [[root]]/[[class]] tables."""
    blocks = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.split("#", 1)[0].strip() if not line.strip().startswith("#") else ""
            if line in ("[[root]]", "[[class]]"):
                blocks.append((line, {}))
            elif "=" in line and blocks:
                key, value = line.split("=", 1)
                blocks[-1][1][key.strip()] = json.loads(value.strip())
    ids = set(CATEGORIES)
    default_parent = {c: c for c in CATEGORIES}
    for kind, fields in blocks:
        if kind == "[[class]]":
            ids.add(fields["id"])
        elif "default_parent" in fields:
            default_parent[fields["category"]] = fields["default_parent"]
    return ids, default_parent


def load_manual(path):
    rows = []
    if not path:
        return rows
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            rows.append(line.split("\t")[0].strip())
    return rows


def sse(values):
    if not values:
        return Fraction(0)
    mean = sum(values, Fraction(0)) / len(values)
    return sum(((v - mean) ** 2 for v in values), Fraction(0))


def two_class_threshold(gains):
    """Size of the high class of the best two-class split of the gains."""
    n = len(gains)
    if n == 0:
        return 0
    if all(g == gains[0] for g in gains):
        return n
    exact = [Fraction(g) for g in gains]
    best = None
    for p in range(n - 1, 0, -1):  # larger prefixes first: ties keep the larger p
        cost = sse(exact[:p]) + sse(exact[p:])
        if best is None or cost < best[0]:
            best = (cost, p)
    return best[1]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--corpus", required=True)
    ap.add_argument("--lexicon", required=True)
    ap.add_argument("--scaffold", required=True)
    ap.add_argument("--manual-additions")
    ap.add_argument("--seed-size", type=int, default=20)
    ap.add_argument("--disable", default="SDoH", help="comma-separated categories, or none")
    args = ap.parse_args()
    disabled = set() if args.disable == "none" else set(args.disable.split(","))

    surfaces = load_lexicon(args.lexicon)
    mentions = []
    trials = 0
    lines = 0
    with open(args.corpus, encoding="utf-8") as f:
        for raw in f:
            if not raw.strip():
                continue
            trials += 1
            record = json.loads(raw)
            for _, text in segment(record["eligibility_text"]):
                lines += 1
                mentions.extend(matches(normalize(text), surfaces))

    counts = Counter(mentions)
    total = len(mentions)

    seeds = []
    for cat in CATEGORIES:
        ranked = sorted(((c, n) for (c, k), n in counts.items() if k == cat), key=lambda x: (-x[1], x[0]))
        seeds.extend(c for c, _ in ranked[: args.seed_size])
    seed_set = set(seeds)

    queue = sorted(
        ((n, k, c) for (c, k), n in counts.items() if k not in disabled and c not in seed_set),
        key=lambda x: (-x[0], x[1], x[2]),
    )
    # gains as the pipeline computes them: mentions / total in binary floating point
    gains = [n / total for n, _, _ in queue]
    p = two_class_threshold(gains)
    added = [c for _, _, c in queue[:p]]
    manual = load_manual(args.manual_additions)

    def covered(concepts):
        return sum(n for (c, _), n in counts.items() if c in concepts)

    baseline = covered(seed_set)
    optimized = covered(seed_set | set(added))
    final = covered(seed_set | set(added) | set(manual))

    scaffold_ids, _ = scaffold_info(args.scaffold)
    classes = sorted(scaffold_ids | seed_set | set(added) | set(manual))

    def fmt(k):
        return "%.4f" % (k / total if total else 0.0)

    json.dump(
        {
            "trials": trials,
            "criterion_lines": lines,
            "mentions": total,
            "distinct_concepts": len(counts),
            "seeded": len(seeds),
            "series_length": len(queue),
            "p": p,
            "added": added,
            "covered_mentions": {"baseline": baseline, "optimized": optimized, "final": final},
            "coverage": {"baseline": fmt(baseline), "optimized": fmt(optimized), "final": fmt(final)},
            "class_count": len(classes),
            "classes": classes,
        },
        sys.stdout,
        indent=2,
    )
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
