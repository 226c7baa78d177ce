#!/usr/bin/env python3
"""Reference implementation of the text pipeline, written from the rules
rather than the Rust code. Used to check the fixture and to compute the
frozen values in the core tests.

    python3 tools/oracle.py best "I prefer vegetarian" ...
    python3 tools/oracle.py cosine "a" "b"
    python3 tools/oracle.py table "I prefer vegetarian"
"""

import json
import math
import pathlib
import re
import sys

DATA = pathlib.Path(__file__).resolve().parent.parent / "crates/core/data"
DIM = 256
THRESHOLD = 0.85
NEGATORS = {"not", "never", "no", "hardly", "barely", "isn't", "wasn't", "don't"}
ABBREV = {"mr.", "mrs.", "dr.", "st.", "vs.", "etc.", "e.g.", "i.e."}


def table(name, arity):
    for line in (DATA / name).read_text().splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        assert len(fields) == arity, line
        yield fields


STOP = {l.strip() for l in (DATA / "stopwords.txt").read_text().splitlines()
        if l.strip() and not l.strip().startswith("#")}
JOY = {t: float(w) for t, w in table("joy_lexicon.tsv", 2)}


def words(text):
    text = text.replace("’", "'").replace("‘", "'").lower()
    out = []
    for m in re.finditer(r"[^\W_]+(?:'[^\W_]*)*|'+", text):
        w = m.group(0).strip("'")
        if w:
            out.append(w)
    return out


def stem(w):
    if w.endswith("'s"):
        w = w[:-2]
    w = w.replace("'", "")
    if len(w) > 3 and w.endswith("s") and not w.endswith("ss"):
        w = w[:-1]
    return w[:5]


def fnv(s):
    h = 0xcbf29ce484222325
    for b in s.encode():
        h = ((h ^ b) * 0x100000001b3) & 0xFFFFFFFFFFFFFFFF
    return h


def embed(text):
    stems = [stem(w) for w in words(text) if w not in STOP]
    stems = [s for s in stems if s]
    feats = stems + [a + " " + b for a, b in zip(stems, stems[1:])]
    v = [0.0] * DIM
    for f in feats:
        h = fnv(f)
        v[(h >> 1) % DIM] += 1.0 if h & 1 == 0 else -1.0
    n = math.sqrt(sum(x * x for x in v))
    if n == 0:
        v = [0.0] * DIM
        v[0] = 1.0
        return v
    return [x / n for x in v]


def cos(a, b):
    return max(-1.0, min(1.0, sum(x * y for x, y in zip(a, b))))


def joy(text):
    toks = words(text)
    best = 0.0
    for i, t in enumerate(toks):
        w = JOY.get(t, 0.0)
        if w > 0 and any(p in NEGATORS for p in toks[max(0, i - 3):i]):
            w *= 0.2
        best = max(best, w)
    return best


def ntokens(s):
    return len(re.findall(r"[\w'’]+|[^\w\s'’]+", s))


def sentences(text):
    # boundaries: terminal punctuation run, optional closing quotes, then end
    # of text or whitespace + optional opening quotes + uppercase letter
    out, start = [], 0
    for m in re.finditer(r"[.!?]+[\"')”’]*", text):
        rest = text[m.end():]
        nxt = re.match(r"\s+[\"'(“‘]*(.)", rest)
        at_end = rest.strip() == ""
        if not (at_end or (nxt and nxt.group(1).isupper())):
            continue
        if m.group(0) == ".":
            last = text[start:m.end()].split()[-1].lstrip("\"'(").lower() if text[start:m.end()].split() else ""
            if last in ABBREV:
                continue
        out.append(text[start:m.end()].strip())
        start = m.end() + (len(rest) - len(rest.lstrip()))
    if start < len(text):
        out.append(text[start:].strip())
    return [s for s in out if ntokens(s) >= 3]


def catalog():
    return json.loads((DATA / "fixture_catalog.json").read_text())


def pool(exclude=()):
    rows = []
    for r in catalog()["restaurants"]:
        if r["id"] in exclude:
            continue
        for rv in r["reviews"]:
            for i, s in enumerate(sentences(rv["text"])):
                rows.append((r["id"], rv["id"], i, s, joy(s), embed(s)))
    return rows


def best(prefs, exclude=()):
    rows = [r for r in pool(exclude) if r[4] >= THRESHOLD]
    cands = []
    for pi, p in enumerate(prefs):
        pv = embed(p)
        for rid, rvid, i, s, j, e in rows:
            cands.append((-cos(pv, e), pi, rid, rvid, i, s))
    return min(cands) if cands else None


if __name__ == "__main__":
    cmd, args = sys.argv[1], sys.argv[2:]
    if cmd == "best":
        b = best(args)
        print(b and (-b[0], args[b[1]], b[2], b[3], b[4], b[5]))
    elif cmd == "cosine":
        print(repr(cos(embed(args[0]), embed(args[1]))))
    elif cmd == "table":
        pv = embed(args[0])
        rows = sorted(pool(), key=lambda r: (r[4] < THRESHOLD, -cos(pv, r[5]), r[0], r[1], r[2]))
        for r in rows[: int(args[1]) if len(args) > 1 else 10]:
            print(f"{cos(pv, r[5]):.4f} joy={r[4]:.2f} {r[0]} {r[1]}#{r[2]} {r[3]}")
    elif cmd == "count":
        p = pool()
        print(len(p), sum(1 for r in p if r[4] >= THRESHOLD))
