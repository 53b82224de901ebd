#!/usr/bin/env python3
# Copyright 2026 The CounterCorrect Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes the synthetic fixture corpora under data/."""

import argparse
import itertools
import json
import pathlib
import random

POSTS = {
    "bill_gates": [
        "Bill Gates wants to use the vaccine to control the population.",
        "Bill Gates funded the vaccine so he can track everyone.",
    ],
    "microchip": [
        "The vaccine contains a microchip to track you.",
        "They inject a microchip with every vaccine dose.",
    ],
    "infertility": [
        "The vaccine causes infertility in young women.",
        "Getting the shot will hurt your pregnancy.",
    ],
    "dna_gene": [
        "The vaccine changes your DNA forever.",
        "The shot is gene therapy that rewrites your genes.",
    ],
}

HELDOUT_POSTS = {
    "bill_gates": ["Bill Gates made the vaccine to control us all."],
    "microchip": ["Every vaccine dose hides a microchip that tracks you."],
    "infertility": ["Doctors admit the vaccine causes infertility."],
    "dna_gene": ["This vaccine will rewrite your DNA."],
}

OPENERS = {
    "polite": ["Thank you for sharing your concern, but", "I understand the worry, but"],
    "neutral": ["Actually,", "For the record,"],
    "rude": ["What a stupid take,", "Stop spreading garbage,"],
}

CLAIMS = {
    True: ["this claim is false.", "that is false."],
    False: ["yes exactly, so true.", "you might be right."],
}

EVIDENCE = {
    "bill_gates": "Public records show the money went to vaccine research, not tracking.",
    "microchip": "The ingredient list has no chip, and the needle is too small for one.",
    "infertility": "Large studies found no change in fertility after vaccination.",
    "dna_gene": "The vaccine never enters the cell nucleus, so it cannot change DNA.",
}

MISINFO_EXTRA = [
    "The vaccine makes you magnetic and tracks you.",
    "Bill Gates put a microchip in the vaccine.",
    "The vaccine rewrites your genes and DNA.",
    "The shot causes infertility and ruins pregnancy.",
]

BENIGN_POSTS = [
    "I walked my dog in the park this morning.",
    "The bakery on the corner sells great bread.",
    "Our team won the football match last night.",
    "Lovely weather for a picnic today.",
    "I am reading a good book about birds.",
    "The library opens at nine on Monday.",
    "We planted tomatoes in the garden.",
    "My cat sleeps all afternoon.",
    "The concert downtown was wonderful.",
    "I made pancakes for breakfast.",
    "The train was on time for once.",
    "New paint makes the kitchen look bright.",
]

DISBELIEF_REPLIES = [
    "This is false.",
    "No way, that is not true.",
    "I do not believe this at all.",
    "That claim is fake.",
    "Nonsense, this is a lie.",
    "That is a myth, not true.",
    "Sorry, this is simply false.",
    "I doubt that, it is fake.",
]

AGREE_REPLIES = [
    "So true!",
    "Exactly right.",
    "Thanks for the info.",
    "Wow, I agree.",
    "Good point, well said.",
    "Yes, I think so too.",
    "Great post, thanks.",
    "Agreed, totally.",
]


def response_text(opener, claim, evidence):
    parts = [opener, claim] + ([evidence] if evidence else [])
    return " ".join(parts)


def pair(post_id, post, topic, response, politeness, evidence, refuting, origin="crowdsourced"):
    return {
        "post_id": post_id,
        "post_text": post,
        "topic": topic,
        "response_text": response,
        "politeness": politeness,
        "evidence": evidence,
        "refuting": refuting,
        "origin": origin,
        "post_origin": "synthetic_fixture",
    }


def desirable(politeness, evidence, refuting):
    return politeness != "rude" or evidence or refuting


def all_combinations():
    out = []
    for topic, posts in POSTS.items():
        for k, post in enumerate(posts):
            post_id = f"{topic}-{k + 1}"
            for (pol, openers), (ref, claims), has_ev in itertools.product(
                    OPENERS.items(), CLAIMS.items(), (True, False)):
                for opener, claim in itertools.product(openers, claims):
                    text = response_text(opener, claim, EVIDENCE[topic] if has_ev else "")
                    origin = "crowdsourced" if desirable(pol, has_ev, ref) else "in_the_wild"
                    out.append(pair(post_id, post, topic, text, pol, has_ev, ref, origin))
    return out


def table1_summary(rng):
    # Label tallies of the 754 annotated in-the-wild replies; the original
    # texts are not redistributable, so the texts here are placeholders.
    n = 754
    politeness = ["polite"] * 51 + ["neutral"] * 415 + ["rude"] * 288
    evidence = [True] * 181 + [False] * 573
    refuting = [True] * 588 + [False] * 166
    for column in (politeness, evidence, refuting):
        rng.shuffle(column)
    topics = list(POSTS)
    keyword = {"bill_gates": "Bill Gates", "microchip": "microchip", "infertility": "fertility",
               "dna_gene": "DNA"}
    records = []
    for i in range(n):
        post_index = i % 238
        topic = topics[post_index % 4]
        records.append({
            "post_id": f"wild-{post_index + 1:03d}",
            "post_text": f"Placeholder for withheld post {post_index + 1:03d} ({keyword[topic]} claim).",
            "topic": topic,
            "response_text": f"Placeholder for withheld reply {i + 1:03d}.",
            "politeness": politeness[i],
            "evidence": evidence[i],
            "refuting": refuting[i],
            "origin": "in_the_wild",
        })
    return records


def stats_fixture():
    post = "The vaccine contains a microchip to track you."
    return [
        pair("s-1", post, "microchip", "Thank you, but this claim is false.", "polite", False, True),
        pair("s-2", post, "microchip", "Actually, that is false. " + EVIDENCE["microchip"], "neutral", True, True),
        pair("s-3", post, "microchip", "What a stupid take, that is false.", "rude", False, True, "in_the_wild"),
        pair("s-4", post, "microchip", "What a stupid take, you might be right.", "rude", False, False,
             "in_the_wild"),
    ]


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)

    combos = all_combinations()
    write_jsonl(out / "classifier_pairs.jsonl", combos)

    # 50 warm-start pairs: every post gets six responses spread over the
    # politeness, refutation and evidence combinations, plus two extras.
    fixture = []
    by_post = {}
    for c in combos:
        by_post.setdefault(c["post_id"], []).append(c)
    for post_id in sorted(by_post):
        fixture.extend(rng.sample(by_post[post_id], 6))
    fixture.extend(rng.sample(combos, 2))
    write_jsonl(out / "fixture_pairs.jsonl", fixture)

    heldout = []
    for topic, posts in HELDOUT_POSTS.items():
        for k, post in enumerate(posts):
            text = response_text(OPENERS["polite"][0], CLAIMS[True][0], EVIDENCE[topic])
            heldout.append(pair(f"heldout-{topic}-{k + 1}", post, topic, text, "polite", True, True))
    write_jsonl(out / "heldout_pairs.jsonl", heldout)

    misinfo = [{"text": p, "label": 1} for posts in POSTS.values() for p in posts]
    misinfo += [{"text": p, "label": 1} for p in MISINFO_EXTRA]
    misinfo += [{"text": p, "label": 0} for p in BENIGN_POSTS]
    write_jsonl(out / "misinfo_examples.jsonl", misinfo)

    disbelief = [{"text": r, "label": 1} for r in DISBELIEF_REPLIES]
    disbelief += [{"text": r, "label": 0} for r in AGREE_REPLIES]
    write_jsonl(out / "disbelief_examples.jsonl", disbelief)

    threads = [
        {"post_id": "t-1", "post_text": POSTS["microchip"][0], "topic": "microchip",
         "replies": ["That claim is fake.", "So true!"]},
        {"post_id": "t-2", "post_text": POSTS["dna_gene"][0], "topic": "dna_gene", "replies": []},
        {"post_id": "t-3", "post_text": BENIGN_POSTS[0], "replies": ["No way, that is not true."]},
        {"post_id": "t-4", "post_text": BENIGN_POSTS[3], "replies": ["Wow, I agree."]},
    ]
    write_jsonl(out / "threads.jsonl", threads)

    write_jsonl(out / "annotation_summary.jsonl", table1_summary(rng))
    write_jsonl(out / "stats_fixture.jsonl", stats_fixture())


if __name__ == "__main__":
    main()
