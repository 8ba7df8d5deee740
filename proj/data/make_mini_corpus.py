"""Regenerates mini_corpus.jsonl: 10 users, 30 reviews, two disjoint topics."""
import json
import random

VOCAB = {
    "music": "guitar melody album vocals chorus rhythm lyrics drummer tempo ballad".split(),
    "fashion": "fabric sleeve waist hem cotton zipper fit collar stitching dress".split(),
}
ITEMS = {"music": [f"m{i:02d}" for i in range(1, 9)], "fashion": [f"f{i:02d}" for i in range(1, 9)]}

rng = random.Random(7)
users = [(f"u{i:02d}", "music" if i % 2 else "fashion") for i in range(1, 11)]
rows = []
for round_ in range(3):
    for user, topic in users:
        rows.append((user, topic))

taken = {}
with open("mini_corpus.jsonl", "w") as out:
    for user, topic in rows:
        pool = [i for i in ITEMS[topic] if i not in taken.setdefault(user, set())]
        item = rng.choice(pool)
        taken[user].add(item)
        words = rng.sample(VOCAB[topic], rng.randint(5, 8))
        rating = rng.randint(3, 5) if topic == "music" else rng.randint(1, 3)
        out.write(json.dumps({"reviewerID": user, "asin": item, "overall": rating,
                              "reviewText": " ".join(words), "topic": topic}) + "\n")
