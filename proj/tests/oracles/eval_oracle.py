#!/usr/bin/env python3
"""Independent scorer for the eval5 fixture.

Full-matrix edit distance with an explicit traceback, Counter-based BLEU,
and unicodedata for NFC. Shares no code with the C++ implementation.
Writes oracle.json next to the fixture:

    python3 tests/oracles/eval_oracle.py tests/fixtures/eval5
"""
import json
import math
import sys
import unicodedata
from collections import Counter
from pathlib import Path

TASHKEEL = {chr(c) for c in range(0x064B, 0x0653)} | {"ٰ"}


def normalize(text, strip_tashkeel):
    t = unicodedata.normalize("NFC", text)
    if strip_tashkeel:
        t = unicodedata.normalize("NFC", "".join(c for c in t if c not in TASHKEEL))
    return " ".join(t.split())


def edit_counts(ref, hyp):
    n, m = len(ref), len(hyp)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        d[i][0] = i
    for j in range(m + 1):
        d[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            d[i][j] = min(d[i - 1][j - 1] + (ref[i - 1] != hyp[j - 1]),
                          d[i - 1][j] + 1, d[i][j - 1] + 1)
    s = dl = ins = 0
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and d[i][j] == d[i - 1][j - 1] + (ref[i - 1] != hyp[j - 1]):
            s += ref[i - 1] != hyp[j - 1]
            i, j = i - 1, j - 1
        elif i > 0 and d[i][j] == d[i - 1][j] + 1:
            dl += 1
            i -= 1
        else:
            ins += 1
            j -= 1
    return {"substitutions": s, "deletions": dl, "insertions": ins}


def grams(words, n):
    return Counter(tuple(words[i:i + n]) for i in range(len(words) - n + 1))


def bleu_counts(ref, hyp):
    out = []
    for n in range(1, 5):
        h, r = grams(hyp, n), grams(ref, n)
        out.append((sum(min(c, r[g]) for g, c in h.items()), max(len(hyp) - n + 1, 0)))
    return out


def bp(r, c):
    return 1.0 if c >= r else math.exp(1 - r / c)


def sentence_bleu(ref, hyp, eps=1e-9):
    if not hyp:
        return 1.0 if not ref else 0.0
    order = min(4, len(hyp))
    counts = bleu_counts(ref, hyp)[:order]
    logs = sum(math.log((m if m else eps) / t) for m, t in counts)
    return bp(len(ref), len(hyp)) * math.exp(logs / order)


def corpus_bleu(pairs):
    matches, totals, r, c = [0] * 4, [0] * 4, 0, 0
    for ref, hyp in pairs:
        for n, (m, t) in enumerate(bleu_counts(ref, hyp)):
            matches[n] += m
            totals[n] += t
        r, c = r + len(ref), c + len(hyp)
    if c == 0 or any(t == 0 or m == 0 for m, t in zip(matches, totals)):
        return 0.0
    return bp(r, c) * math.exp(sum(math.log(m / t) for m, t in zip(matches, totals)) / 4)


def score(manifest, preds, strip_tashkeel):
    samples, pairs = [], []
    for rec in sorted(manifest, key=lambda r: r["id"]):
        ref = normalize(rec["ground_truth_plain"], strip_tashkeel)
        hyp = normalize(preds[rec["id"]], strip_tashkeel)
        rw, hw = ref.split(), hyp.split()
        ce, we = edit_counts(ref, hyp), edit_counts(rw, hw)
        samples.append({
            "id": rec["id"],
            "char_edits": ce,
            "word_edits": we,
            "ref_chars": len(ref),
            "ref_words": len(rw),
            "cer": sum(ce.values()) / max(len(ref), 1),
            "wer": sum(we.values()) / max(len(rw), 1),
            "sentence_bleu": sentence_bleu(rw, hw),
        })
        pairs.append((rw, hw))
    n = len(samples)
    char_total = sum(sum(s["char_edits"].values()) for s in samples)
    word_total = sum(sum(s["word_edits"].values()) for s in samples)
    return {
        "samples": samples,
        "aggregate": {
            "n_samples": n,
            "macro_cer": sum(s["cer"] for s in samples) / n,
            "macro_wer": sum(s["wer"] for s in samples) / n,
            "micro_cer": char_total / max(sum(s["ref_chars"] for s in samples), 1),
            "micro_wer": word_total / max(sum(s["ref_words"] for s in samples), 1),
            "corpus_bleu": corpus_bleu(pairs),
            "macro_sentence_bleu": sum(s["sentence_bleu"] for s in samples) / n,
        },
    }


def main():
    root = Path(sys.argv[1])
    manifest = [json.loads(l) for l in (root / "manifest.jsonl").read_text("utf-8").splitlines() if l.strip()]
    preds = {}
    for l in (root / "predictions.jsonl").read_text("utf-8").splitlines():
        if l.strip():
            p = json.loads(l)
            preds[p["id"]] = p["text"]
    oracle = {"default": score(manifest, preds, False),
              "strip_tashkeel": score(manifest, preds, True)}
    (root / "oracle.json").write_text(json.dumps(oracle, indent=1, ensure_ascii=False) + "\n", "utf-8")


if __name__ == "__main__":
    main()
