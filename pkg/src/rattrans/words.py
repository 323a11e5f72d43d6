"""Words, synchronization words, free-group reduction, delays and lag.

Plain words are tuples of letters.  A synchronization word is a tuple of
``(letter, color)`` pairs with ``color`` in ``{IN, OUT}``.  Free-group words
are tuples of ``(letter, exponent)`` pairs with exponent ``+1`` or ``-1``.
"""

import math
from dataclasses import dataclass

IN = "in"
OUT = "out"
END = "⊣"
INF = math.inf


class WordError(ValueError):
    """Raised on malformed words or letters outside the alphabet."""


@dataclass(frozen=True)
class Alphabet:
    letters: tuple
    endmarker: str = END

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        if not letters:
            raise WordError("alphabet must not be empty")
        if len(set(letters)) != len(letters):
            raise WordError("alphabet has duplicate letters")
        if self.endmarker in letters:
            raise WordError("endmarker %r used as a letter" % self.endmarker)

    def __iter__(self):
        return iter(self.letters)

    def __len__(self):
        return len(self.letters)

    def __contains__(self, x):
        return x in self.letters

    def with_end(self):
        """Letters of the endmarked alphabet, endmarker last."""
        return self.letters + (self.endmarker,)

    def sync_letters(self):
        """The colored alphabet, input copies first."""
        return tuple((a, IN) for a in self.letters) + tuple((a, OUT) for a in self.letters)


def word(s):
    """Turn a string of one-character letters (or any iterable) into a word."""
    if isinstance(s, str):
        return tuple(s)
    return tuple(s)


def sync(word_in_out):
    """Build a sync word from ``"i.a o.b"``-style text or an iterable of pairs."""
    if isinstance(word_in_out, str):
        return parse_sync_word(word_in_out)
    return tuple((a, c) for a, c in word_in_out)


def _check_letters(letters, alphabet):
    if alphabet is None:
        return
    for a in letters:
        if a not in alphabet:
            raise WordError("unknown letter %r" % (a,))


def reduce_free(raw, alphabet=None):
    """Irreducible form of a sequence of signed letters."""
    raw = tuple(raw)
    _check_letters([a for a, _ in raw], alphabet)
    stack = []
    for a, e in raw:
        if e not in (1, -1):
            raise WordError("exponent must be +1 or -1, got %r" % (e,))
        if stack and stack[-1][0] == a and stack[-1][1] == -e:
            stack.pop()
        else:
            stack.append((a, e))
    return tuple(stack)


def positive(w):
    """Embed a plain word into the free group."""
    return tuple((a, 1) for a in w)


def invert(u):
    return tuple((a, -e) for a, e in reversed(u))


def free_mul(*words):
    out = ()
    for w in words:
        out = reduce_free(out + tuple(w))
    return out


def delay(u, v):
    """del(u, v) = reduce(u^-1 v) for plain words u, v."""
    return reduce_free(invert(positive(u)) + positive(v))


def is_reduced(u):
    return all(not (u[i][0] == u[i + 1][0] and u[i][1] == -u[i + 1][1]) for i in range(len(u) - 1))


def project(w, color):
    return tuple(a for a, c in w if c == color)


def equivalent(w, w2):
    return project(w, IN) == project(w2, IN) and project(w, OUT) == project(w2, OUT)


def output_blocks(w):
    """Split a sync word into its input letters and the output blocks around them."""
    blocks = [[]]
    inputs = []
    for a, c in w:
        if c == IN:
            inputs.append(a)
            blocks.append([])
        else:
            blocks[-1].append(a)
    return inputs, [tuple(b) for b in blocks]


def lag(w, w2):
    """Largest delay at input boundaries; INF when the words are inequivalent."""
    if not equivalent(w, w2):
        return INF
    _, us = output_blocks(w)
    _, vs = output_blocks(w2)
    best = 0
    pu, pv = (), ()
    for bu, bv in zip(us, vs):
        pu += bu
        pv += bv
        best = max(best, len(delay(pu, pv)))
    return best


def parse_sync_word(text):
    """Parse whitespace-separated ``i.<letter>`` / ``o.<letter>`` tokens."""
    out = []
    for tok in text.split():
        if tok in ("eps", "ε"):
            continue
        head, sep, letter = tok.partition(".")
        if not sep or head not in ("i", "o") or not letter:
            raise WordError("bad sync token %r" % tok)
        out.append((letter, IN if head == "i" else OUT))
    return tuple(out)


def format_sync_word(w):
    if not w:
        return "eps"
    return " ".join(("i." if c == IN else "o.") + str(a) for a, c in w)


def parse_free_word(text):
    """Parse whitespace-separated ``a`` / ``a^-1`` tokens and reduce."""
    out = []
    for tok in text.split():
        if tok in ("eps", "ε"):
            continue
        if tok.endswith("^-1"):
            out.append((tok[:-3], -1))
        else:
            out.append((tok, 1))
    return reduce_free(out)


def format_free_word(u):
    if not u:
        return "eps"
    return " ".join(str(a) + ("" if e == 1 else "^-1") for a, e in u)


def format_word(w):
    if not w:
        return "eps"
    if all(len(str(a)) == 1 for a in w):
        return "".join(str(a) for a in w)
    return ",".join(str(a) for a in w)
