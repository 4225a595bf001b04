#!/usr/bin/env python3
# Copyright 2026 The hopebench Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates data/emoji_names.tsv from the Unicode character names.

Names are lowercased and reduced to ASCII letters and single spaces so that
cleaning a replaced emoji is a fixed point. A few very frequent faces get
shorter conversational names.

    python3 tools/gen_emoji_table.py > data/emoji_names.tsv
"""
import re
import sys
import unicodedata

RANGES = [
    (0x2600, 0x27BF),
    (0x2B50, 0x2B55),
    (0x1F300, 0x1F5FF),
    (0x1F600, 0x1F64F),
    (0x1F680, 0x1F6FF),
    (0x1F900, 0x1F9FF),
    (0x1FA70, 0x1FAFF),
]

OVERRIDES = {
    0x1F60A: "smiling face",
    0x263A: "smiling face",
    0x1F642: "slightly smiling face",
    0x1F600: "grinning face",
    0x1F601: "beaming face",
    0x1F602: "face with tears of joy",
    0x1F923: "rolling on the floor laughing",
    0x1F60D: "heart eyes",
    0x1F618: "face blowing a kiss",
    0x1F622: "crying face",
    0x1F62D: "loudly crying face",
    0x1F620: "angry face",
    0x1F621: "pouting face",
    0x1F61E: "sad face",
    0x1F614: "pensive face",
    0x2764: "red heart",
    0x1F44D: "thumbs up",
    0x1F44E: "thumbs down",
    0x1F64F: "folded hands",
    0x1F44F: "clapping hands",
    0x1F525: "fire",
    0x1F4AF: "hundred points",
}


def clean_name(name):
    name = re.sub(r"[^a-z]+", " ", name.lower())
    return " ".join(name.split())


# Skin-tone modifiers attach to the previous emoji; the matcher skips them.
SKIN_TONES = range(0x1F3FB, 0x1F400)


def main():
    out = sys.stdout
    for lo, hi in RANGES:
        for cp in range(lo, hi + 1):
            if cp in SKIN_TONES:
                continue
            name = OVERRIDES.get(cp) or unicodedata.name(chr(cp), "")
            name = clean_name(name)
            if name:
                out.write("%X\t%s\n" % (cp, name))
    # Two-code-point sequences keyed the same way as single ones.
    for flag, name in [("1F1EE 1F1F3", "flag india")]:
        out.write("%s\t%s\n" % (flag, name))


if __name__ == "__main__":
    main()
