#!/usr/bin/env python3
"""Regenerates captions.conllu and corpus.jsonl from the tables below.

Each token row is (form, lemma, upos, head, deprel) with 1-based heads.
"""
import json
import pathlib

HERE = pathlib.Path(__file__).resolve().parent

SENTENCES = {
    "chasing": ("A black cat is chasing a small brown bird", [
        ("A", "a", "DET", 3, "det"), ("black", "black", "ADJ", 3, "amod"),
        ("cat", "cat", "NOUN", 5, "nsubj"), ("is", "be", "AUX", 5, "aux"),
        ("chasing", "chase", "VERB", 0, "root"), ("a", "a", "DET", 9, "det"),
        ("small", "small", "ADJ", 9, "amod"), ("brown", "brown", "ADJ", 9, "amod"),
        ("bird", "bird", "NOUN", 5, "obj")]),
    "cake": ("cake with 21 yellow candles", [
        ("cake", "cake", "NOUN", 0, "root"), ("with", "with", "ADP", 5, "case"),
        ("21", "21", "NUM", 5, "nummod"), ("yellow", "yellow", "ADJ", 5, "amod"),
        ("candles", "candle", "NOUN", 1, "nmod")]),
    "looks": ("the dog looks happy", [
        ("the", "the", "DET", 2, "det"), ("dog", "dog", "NOUN", 3, "nsubj"),
        ("looks", "look", "VERB", 0, "root"), ("happy", "happy", "ADJ", 3, "xcomp")]),
    "eating": ("a person is eating an apple", [
        ("a", "a", "DET", 2, "det"), ("person", "person", "NOUN", 4, "nsubj"),
        ("is", "be", "AUX", 4, "aux"), ("eating", "eat", "VERB", 0, "root"),
        ("an", "a", "DET", 6, "det"), ("apple", "apple", "NOUN", 4, "obj")]),
    "redcar": ("red car", [
        ("red", "red", "ADJ", 2, "amod"), ("car", "car", "NOUN", 0, "root")]),
    "birthday": ("a birthday cake on a table", [
        ("a", "a", "DET", 3, "det"), ("birthday", "birthday", "NOUN", 3, "compound"),
        ("cake", "cake", "NOUN", 0, "root"), ("on", "on", "ADP", 6, "case"),
        ("a", "a", "DET", 6, "det"), ("table", "table", "NOUN", 3, "nmod")]),
    "frisbee": ("a dog catching a red frisbee", [
        ("a", "a", "DET", 2, "det"), ("dog", "dog", "NOUN", 0, "root"),
        ("catching", "catch", "VERB", 2, "acl"), ("a", "a", "DET", 6, "det"),
        ("red", "red", "ADJ", 6, "amod"), ("frisbee", "frisbee", "NOUN", 3, "obj")]),
    "nike": ("Nike shoes on sale", [
        ("Nike", "Nike", "PROPN", 2, "compound"), ("shoes", "shoe", "NOUN", 0, "root"),
        ("on", "on", "ADP", 4, "case"), ("sale", "sale", "NOUN", 2, "nmod")]),
    "copula": ("the cat is black", [
        ("the", "the", "DET", 2, "det"), ("cat", "cat", "NOUN", 4, "nsubj"),
        ("is", "be", "AUX", 4, "cop"), ("black", "black", "ADJ", 0, "root")]),
    "horse": ("a man riding a brown horse", [
        ("a", "a", "DET", 2, "det"), ("man", "man", "NOUN", 0, "root"),
        ("riding", "ride", "VERB", 2, "acl"), ("a", "a", "DET", 6, "det"),
        ("brown", "brown", "ADJ", 6, "amod"), ("horse", "horse", "NOUN", 3, "obj")]),
    "children": ("two children are playing with a ball in the park", [
        ("two", "two", "NUM", 2, "nummod"), ("children", "child", "NOUN", 4, "nsubj"),
        ("are", "be", "AUX", 4, "aux"), ("playing", "play", "VERB", 0, "root"),
        ("with", "with", "ADP", 7, "case"), ("a", "a", "DET", 7, "det"),
        ("ball", "ball", "NOUN", 4, "obl"), ("in", "in", "ADP", 10, "case"),
        ("the", "the", "DET", 10, "det"), ("park", "park", "NOUN", 4, "obl")]),
    "beard": ("the man has a beard", [
        ("the", "the", "DET", 2, "det"), ("man", "man", "NOUN", 3, "nsubj"),
        ("has", "have", "VERB", 0, "root"), ("a", "a", "DET", 5, "det"),
        ("beard", "beard", "NOUN", 3, "obj")]),
    "running": ("a running person", [
        ("a", "a", "DET", 3, "det"), ("running", "run", "VERB", 3, "amod"),
        ("person", "person", "NOUN", 0, "root")]),
    "sleeping": ("a cat and a dog are sleeping", [
        ("a", "a", "DET", 2, "det"), ("cat", "cat", "NOUN", 7, "nsubj"),
        ("and", "and", "CCONJ", 5, "cc"), ("a", "a", "DET", 5, "det"),
        ("dog", "dog", "NOUN", 2, "conj"), ("are", "be", "AUX", 7, "aux"),
        ("sleeping", "sleep", "VERB", 0, "root")]),
    "darkgreen": ("a dark green car", [
        ("a", "a", "DET", 4, "det"), ("dark", "dark", "ADJ", 3, "advmod"),
        ("green", "green", "ADJ", 4, "amod"), ("car", "car", "NOUN", 0, "root")]),
    "sign": ("a man is holding a sign saying happy birthday", [
        ("a", "a", "DET", 2, "det"), ("man", "man", "NOUN", 4, "nsubj"),
        ("is", "be", "AUX", 4, "aux"), ("holding", "hold", "VERB", 0, "root"),
        ("a", "a", "DET", 6, "det"), ("sign", "sign", "NOUN", 4, "obj"),
        ("saying", "say", "VERB", 6, "acl"), ("happy", "happy", "ADJ", 9, "amod"),
        ("birthday", "birthday", "NOUN", 7, "obj")]),
    "blowing": ("a little girl is blowing out candles on a cake", [
        ("a", "a", "DET", 3, "det"), ("little", "little", "ADJ", 3, "amod"),
        ("girl", "girl", "NOUN", 5, "nsubj"), ("is", "be", "AUX", 5, "aux"),
        ("blowing", "blow", "VERB", 0, "root"), ("out", "out", "ADP", 5, "compound:prt"),
        ("candles", "candle", "NOUN", 5, "obj"), ("on", "on", "ADP", 10, "case"),
        ("a", "a", "DET", 10, "det"), ("cake", "cake", "NOUN", 7, "nmod")]),
    "seem": ("two dogs seem friendly", [
        ("two", "two", "NUM", 2, "nummod"), ("dogs", "dog", "NOUN", 3, "nsubj"),
        ("seem", "seem", "VERB", 0, "root"), ("friendly", "friendly", "ADJ", 3, "xcomp")]),
    "pup": ("a pup is chewing a bone", [
        ("a", "a", "DET", 2, "det"), ("pup", "pup", "NOUN", 4, "nsubj"),
        ("is", "be", "AUX", 4, "aux"), ("chewing", "chew", "VERB", 0, "root"),
        ("a", "a", "DET", 6, "det"), ("bone", "bone", "NOUN", 4, "obj")]),
}


def conllu(rows):
    return "".join(
        f"{i}\t{form}\t{lemma}\t{upos}\t_\t_\t{head}\t{rel}\t_\t_\n"
        for i, (form, lemma, upos, head, rel) in enumerate(rows, start=1))


def spot(text, conf):
    return {"text": text, "confidence": conf}


# (record id, sentence key or None, caption override, spots, alignment score)
RECORDS = [
    ("r01", "chasing", None, [], 0.41),
    ("r02", "cake", None, [spot("21", 0.99)], 0.50),
    ("r03", "looks", None, [], 0.30),
    ("r04", "eating", None, [spot("apple", 0.95)], None),
    ("r05", "redcar", None, [spot("RED CAR", 0.85)], None),
    ("r06", "birthday", None, [], 0.20),
    ("r07", "frisbee", None, [spot("frisb", 0.70)], None),
    ("r08", "nike", None, [spot("NIKE", 0.99)], 0.60),
    ("r09", "horse", None, [spot("horse", 0.79)], 0.35),
    ("r10", "children", None, [spot("PARK", 0.99)], None),
    ("r11", "beard", None, [], None),
    ("r12", "running", None, [], 0.90),
    ("r13", "sleeping", None, [], 0.10),
    ("r14", "darkgreen", None, [], None),
    ("r15", "sign", None, [spot("HAPPY BIRTHDAY", 0.95)], 0.55),
    ("r16", "blowing", None, [spot("Happ", 0.99), spot("candles!", 0.60)], None),
    ("r17", "seem", None, [], None),
    ("r18", "pup", None, [spot("chewing a bone", 0.81)], 0.45),
    ("r19", None, "", [], None),
    ("r20", None, "sunset over the sea", [], 0.80),
]

MALFORMED = [
    "this line is not json",
    json.dumps({"caption": "a record without an id"}),
]


def main():
    with open(HERE / "captions.conllu", "w") as f:
        for key, (text, rows) in SENTENCES.items():
            f.write(f"# sent_id = {key}\n# text = {text}\n{conllu(rows)}\n")
    lines = []
    for rid, key, caption, spots, score in RECORDS:
        rec = {"id": rid}
        if key is not None:
            text, rows = SENTENCES[key]
            rec["caption"] = text
            rec["conllu"] = conllu(rows)
        else:
            rec["caption"] = caption
        rec["spots"] = spots
        if score is not None:
            rec["alignment_score"] = score
        lines.append(json.dumps(rec))
    # Malformed lines sit mid-stream so the reader must skip and continue.
    lines.insert(7, MALFORMED[0])
    lines.insert(15, MALFORMED[1])
    (HERE / "corpus.jsonl").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
