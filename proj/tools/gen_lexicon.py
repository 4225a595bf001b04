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
"""Regenerates data/english_lexicon.txt.

The lexicon is the 20k most frequent English words (wordfreq) that are also
lowercase dictionary headwords (english-words web2/gcide), restricted to
words of three or more letters plus a short list of function words and
chat abbreviations. Short tokens are excluded because two-letter romanized
Kannada clitics ("ge", "nu", "aa") collide with frequency-list noise.

    pip install wordfreq english-words
    python3 tools/gen_lexicon.py > data/english_lexicon.txt
"""
import sys

import wordfreq
from english_words import get_english_words_set

SHORT = """a i am an as at be by do go he if in is it me my no of oh ok on or so to up
us we hi pls plz thx lol omg bro""".split()


def main():
    dictionary = get_english_words_set(["web2", "gcide"], lower=False)
    dictionary = {w for w in dictionary if w.islower()}
    words = set(SHORT)
    for w in wordfreq.top_n_list("en", 20000):
        if len(w) >= 3 and w.isascii() and w.isalpha() and w in dictionary:
            words.add(w)
    for w in sorted(words):
        sys.stdout.write(w + "\n")


if __name__ == "__main__":
    main()
