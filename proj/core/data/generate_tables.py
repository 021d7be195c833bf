#!/usr/bin/env python3
"""Regenerates the bundled lexical tables under core/src/generated/.

Requires the `wordfreq` and `nltk` packages. The output is committed, so this
only needs to run when the tables change.

  word_families.inc   Porter stem -> summed frequency (per million words) of
                      every surface form in the top-N English word list.
  mock_vocabulary.inc 5,000 common English content words used by the mock
                      text generator.
  tests/data/porter_vocabulary.tsv  word -> stem pairs used as an external
                      oracle for the C++ stemmer.
"""

import collections
import pathlib

from nltk.stem.porter import PorterStemmer
from wordfreq import top_n_list, word_frequency

ROOT = pathlib.Path(__file__).resolve().parents[2]
OUT = ROOT / "core" / "src" / "generated"
TOP_N = 30000
VOCAB_SIZE = 5000

# Same list as core/src/text/stopwords.cpp (kMaskStopwords).
STOPWORDS = set("""
a about above after again against all am an and any are aren't as at be because
been before being below between both but by can cannot could couldn't did didn't
do does doesn't doing don't down during each few for from further had hadn't has
hasn't have haven't having he he'd he'll he's her here here's hers herself him
himself his how how's i i'd i'll i'm i've if in into is isn't it it's its itself
let's me more most mustn't my myself no nor not of off on once only or other
ought our ours ourselves out over own same shan't she she'd she'll she's should
shouldn't so some such than that that's the their theirs them themselves then
there there's these they they'd they'll they're they've this those through to
too under until up very was wasn't we we'd we'll we're we've were weren't what
what's when when's where where's which while who who's whom why why's will with
won't would wouldn't you you'd you'll you're you've your yours yourself
yourselves also may might must shall us within without upon per via etc
""".split())

# Profanity and explicit terms kept out of the mock generator's vocabulary.
BLOCKED_PREFIXES = ("fuck", "shit", "bitch", "porn", "pussy", "cunt", "nigg",
                    "whore", "slut", "asshole", "bullshit", "motherf", "dildo")
BLOCKED = set("""
ass arse dick dicks cock cocks crap damn rape raped rapist sex sexy sexual
naked nude nudes boobs tits horny anal penis vagina nazi nazis hell gay
bastard butt piss pissed wtf lmao lol omg hoe hoes thot dumbass
""".split())


def allowed(word):
    return word not in BLOCKED and not word.startswith(BLOCKED_PREFIXES)


def main():
    stemmer = PorterStemmer(mode=PorterStemmer.MARTIN_EXTENSIONS)
    words = [w for w in top_n_list("en", TOP_N) if w.isascii() and w.isalpha()]

    families = collections.Counter()
    for w in words:
        families[stemmer.stem(w)] += word_frequency(w, "en") * 1e6
    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / "word_families.inc", "w") as f:
        f.write("// Generated by core/data/generate_tables.py; do not edit.\n")
        for stem in sorted(families):
            f.write('{"%s", %.4f},\n' % (stem, families[stem]))

    vocab = [w for w in words
             if len(w) >= 3 and w not in STOPWORDS and allowed(w)][:VOCAB_SIZE]
    assert len(vocab) == VOCAB_SIZE
    with open(OUT / "mock_vocabulary.inc", "w") as f:
        f.write("// Generated by core/data/generate_tables.py; do not edit.\n")
        for i in range(0, len(vocab), 8):
            f.write(" ".join('"%s",' % w for w in vocab[i:i + 8]) + "\n")

    oracle = sorted(set(words[:4000]))
    (ROOT / "tests" / "data").mkdir(parents=True, exist_ok=True)
    with open(ROOT / "tests" / "data" / "porter_vocabulary.tsv", "w") as f:
        for w in oracle:
            f.write("%s\t%s\n" % (w, stemmer.stem(w)))


if __name__ == "__main__":
    main()
