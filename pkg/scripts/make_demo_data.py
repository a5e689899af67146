#!/usr/bin/env python3
"""Generate a small synthetic two-source dataset for demos and smoke runs.

Writes dcard.json, weibo.html, dict.txt, lexicon.tsv into --outdir
(default demo/data). Deterministic for a fixed --seed.
"""

import argparse
import json
import random
from pathlib import Path

TAGS = ["健身", "減肥", "瘦身"]

WORDS = [
    "健身", "減肥", "瘦身", "運動", "今天", "明天", "打卡", "喝水", "日記",
    "吃", "飯", "好", "累", "想", "去", "慢跑", "堅持", "開心", "健身房",
    "很", "都", "每天", "早餐", "晚餐", "訓練", "教練", "計畫", "體重",
    "公斤", "瘦", "會", "說", "覺得", "真的", "爛", "難", "加油",
]

SCHOOLS = ["台大", "政大", "清大", "成大"]
DEPARTMENTS = ["中文系", "外文系", "資工系", "心理系"]
SCREEN_NAMES = ["小瘦瘦", "卡路里剋星", "健身狂人", "早睡早起", "跑步機"]
URLS = ["https://t.cn/A6x9{}", "http://dwz.example/{}", "www.fit{}.example"]


def make_sentence(rng, length):
    return "".join(rng.choice(WORDS) for _ in range(length))


def make_dcard_records(rng, count):
    records = []
    for i in range(count):
        tags = rng.sample(TAGS, k=rng.choice([1, 1, 1, 2]))
        content = make_sentence(rng, rng.randint(4, 14))
        if rng.random() < 0.3:
            content += " " + rng.choice(URLS).format(i)
        record = {
            "id": f"d{i:03d}",
            "content": content,
            "tags": tags,
            "gender": rng.choice(["M", "F", "M", "F", ""]),
            "likeCount": rng.randint(0, 500),
            "commentCount": rng.randint(0, 60),
            "createdAt": f"2021-0{rng.randint(1, 9)}-"
                         f"{rng.randint(10, 28)}T{rng.randint(10, 23)}:00:00Z",
        }
        if rng.random() < 0.7:
            record["school"] = rng.choice(SCHOOLS)
            record["department"] = rng.choice(DEPARTMENTS)
        if rng.random() < 0.08:
            del record["content"]  # exercise the rejection path
        records.append(record)
    return records


def make_weibo_page(rng, count):
    blocks = []
    for i in range(count):
        tag = rng.choice(TAGS)
        body = make_sentence(rng, rng.randint(3, 9))
        text = f"#{tag}#{body}"
        if rng.random() < 0.3:
            text += " " + rng.choice(URLS).format(1000 + i)
        attrs = [
            f'data-id="w{i:03d}"',
            f'data-gender="{rng.choice(["m", "f", "f"])}"',
            f'data-followers="{rng.randint(10, 90000)}"',
            f'data-screen-name="{rng.choice(SCREEN_NAMES)}"',
            f'data-created-at="2021-0{rng.randint(1, 9)}-'
            f'{rng.randint(10, 28)}T{rng.randint(10, 23)}:30:00+08:00"',
        ]
        blocks.append(f'<div class="post" {" ".join(attrs)}>{text}</div>')
    return ("<html><body>\n" + "\n".join(blocks) + "\n</body></html>\n")


LEXICON = {
    "好": 1.0, "開心": 1.0, "加油": 0.5, "堅持": 0.25,
    "累": -0.5, "爛": -1.0, "難": -0.5,
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", type=Path, default=Path("demo/data"))
    parser.add_argument("--seed", type=int, default=13)
    parser.add_argument("--dcard-posts", type=int, default=60)
    parser.add_argument("--weibo-posts", type=int, default=30)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    args.outdir.mkdir(parents=True, exist_ok=True)

    records = make_dcard_records(rng, args.dcard_posts)
    (args.outdir / "dcard.json").write_text(
        json.dumps(records, ensure_ascii=False, indent=1), encoding="utf-8")
    (args.outdir / "weibo.html").write_text(
        make_weibo_page(rng, args.weibo_posts), encoding="utf-8")
    (args.outdir / "dict.txt").write_text(
        "\n".join(sorted(set(WORDS + TAGS))) + "\n", encoding="utf-8")
    (args.outdir / "lexicon.tsv").write_text(
        "\n".join(f"{token}\t{score}" for token, score in LEXICON.items()) + "\n",
        encoding="utf-8")
    print(f"wrote demo inputs to {args.outdir}")


if __name__ == "__main__":
    main()
