#!/usr/bin/env python3
"""Regenerates the synthetic extraction fixture.

Writes corpus.txt (~5000 tokens), words.txt (200-word database),
manifest.tsv (expected side of every candidate) and summary.tsv (expected
per-source counts). Expected values are computed here from the
construction, independently of the Rust code.
"""
import random
from pathlib import Path

THRESHOLD = 5
ZWNJ = "‌"
PREFIXES = ["پاد", "نا", "بی", "ضد", "غیر", "لا", "ن"]
# no base or filler starts with a prefix letter, so the only prefix-led
# tokens are the ones built below
SAFE_INITIAL = list("اتثجچحخدذرزژسشصطظعفقکگموهی")
ALL_LETTERS = list("ابپتثجچحخدذرزژسشصضطظعغفقکگلمنوهی")

rng = random.Random(20240517)
out = Path(__file__).resolve().parent


def fresh(used, length):
    while True:
        w = rng.choice(SAFE_INITIAL) + "".join(
            rng.choice(ALL_LETTERS) for _ in range(length - 1)
        )
        if w not in used:
            used.add(w)
            return w


used = set()
bases = [fresh(used, rng.randint(3, 5)) for _ in range(180)]
fillers = [fresh(used, rng.randint(2, 6)) for _ in range(150)]

# base frequencies straddle the threshold, including the boundary itself
count_choices = [0, 0, 1, 2, 3, 4, 5, 5, 6, 7, 9, 12, 20, 35]
base_count = {b: rng.choice(count_choices) for b in bases}


def prefixed(base):
    choices = [p for p in PREFIXES if not (p == "ن" and base.startswith("ا"))]
    p = rng.choice(choices)
    sep = ZWNJ if rng.random() < 0.25 else ""
    return p + sep + base, p


def expected(base):
    return "valid_affixed" if base_count[base] > THRESHOLD else "exceptions"


db_candidates = {}
for base in bases[:160]:
    word, _ = prefixed(base)
    db_candidates[word] = base
db_plain = [fresh(used, rng.randint(3, 6)) for _ in range(40)]
words = list(db_candidates) + db_plain
assert len(words) == 200 and len(set(words)) == 200

# corpus-side candidates: 10 shared with the database, 20 new
corpus_candidates = {}
for word in list(db_candidates)[:10]:
    corpus_candidates[word] = db_candidates[word]
for base in bases[160:180]:
    word, _ = prefixed(base)
    corpus_candidates[word] = base

tokens = []
for base, n in base_count.items():
    tokens += [base] * n
for word in corpus_candidates:
    tokens += [word] * rng.randint(1, 3)
while len(tokens) < 5000:
    tokens.append(rng.choice(fillers))
rng.shuffle(tokens)

lines = []
for i in range(0, len(tokens), 12):
    sep = " " if i % 5 else "  \t"
    lines.append(sep.join(tokens[i : i + 12]))
(out / "corpus.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")

db_lines = sorted(words, key=lambda _: rng.random())
(out / "words.txt").write_text("\n".join(db_lines) + "\n", encoding="utf-8")

rows = []
summary = {}
for source, cands in (("words", db_candidates), ("corpus", corpus_candidates)):
    for word, base in sorted(cands.items()):
        side = expected(base)
        rows.append(f"{source}\t{word}\t{side}\t{base}\t{base_count[base]}")
        summary[(source, side)] = summary.get((source, side), 0) + 1
(out / "manifest.tsv").write_text("\n".join(rows) + "\n", encoding="utf-8")

with open(out / "summary.tsv", "w", encoding="utf-8") as f:
    for source in ("words", "corpus"):
        for side in ("exceptions", "valid_affixed"):
            f.write(f"{source}\t{side}\t{summary.get((source, side), 0)}\n")

print(len(tokens), "corpus tokens")
print((out / "summary.tsv").read_text(encoding="utf-8"))
