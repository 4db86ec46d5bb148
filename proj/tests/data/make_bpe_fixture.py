"""Regenerates bpe_code.json and bpe_expected.json.

Needs the `tokenizers` package. The vocabulary is trained on synthetic
Python-like text with a fixed seed; expected counts come from the same
library so the C++ counter is checked against an independent implementation.
"""
import json
import random
from pathlib import Path

from tokenizers import Tokenizer, models, pre_tokenizers, trainers

HERE = Path(__file__).parent

VERBS = ["load", "parse", "build", "render", "merge", "split", "scan", "check"]
NOUNS = ["config", "items", "record", "buffer", "token", "node", "path", "entry"]


def training_text(rng):
    out = []
    for _ in range(400):
        name = f"{rng.choice(VERBS)}_{rng.choice(NOUNS)}"
        arg = rng.choice(NOUNS)
        out.append(f"def {name}({arg}):")
        out.append(f'    """{rng.choice(VERBS).capitalize()} the {arg}."""')
        for _ in range(rng.randint(1, 5)):
            kind = rng.randint(0, 4)
            if kind == 0:
                out.append(f"    if {arg} is None:\n        return {rng.randint(0, 99)}")
            elif kind == 1:
                out.append(f"    for item in {arg}:\n        result.append(item)")
            elif kind == 2:
                out.append(f"    {rng.choice(NOUNS)} = {rng.choice(NOUNS)} + {rng.randint(1, 9)}")
            elif kind == 3:
                out.append(f"    logger.debug(\"{rng.choice(NOUNS)} %s\", {arg})")
            else:
                out.append("    # it's done, don't touch")
        out.append("    return result\n")
    return "\n".join(out)


CASES = [
    "",
    "a b c",
    "def f(x):\n    return x + 1\n",
    "    \n\n\t\tindent  \n",
    "it's they're we've I'm you'll he'd 'store'",
    "x=1;y=22;z=333\r\nprint(x,y,z)\n",
    "caf\u00e9 na\u00efve \u03bb = lambda: \u00b2 + 3\n",
    "class Reader(object):\n    def __repr__(self):\n        return self.name\n",
    "@@ .. @@\n-    if x:\n-        return 1\n+    if x:\n+        return 10\n",
    "<<<<<<< SEARCH\nfoo()\n=======\nbar()\n>>>>>>> REPLACE\n",
]


def kib_snippet(rng):
    text = training_text(rng)
    return text[:1024]


def main():
    rng = random.Random(20240611)
    tok = Tokenizer(models.BPE())
    tok.pre_tokenizer = pre_tokenizers.ByteLevel(add_prefix_space=False, use_regex=True)
    trainer = trainers.BpeTrainer(
        vocab_size=1200,
        initial_alphabet=pre_tokenizers.ByteLevel.alphabet(),
        show_progress=False,
    )
    tok.train_from_iterator([training_text(rng)], trainer=trainer)
    tok.save(str(HERE / "bpe_code.json"))

    cases = CASES + [kib_snippet(random.Random(7))]
    expected = []
    for text in cases:
        enc = tok.encode(text, add_special_tokens=False)
        expected.append({"text": text, "count": len(enc.ids), "tokens": enc.tokens})
    (HERE / "bpe_expected.json").write_text(json.dumps(expected, indent=1, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
