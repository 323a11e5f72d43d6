"""Resynchronizers, the k-delay resynchronizer D_k, and inclusion modulo them."""

from collections import deque
from dataclasses import dataclass
from itertools import product

from . import automata as fa
from .automata import ssorted
from .config import LIMITS, CapExceeded
from .transducer import (
    Transducer,
    is_real_time,
    shuffle_automaton,
    sink_name,
    sync_words_for_pair,
    underlying_automaton,
)
from .words import IN, OUT, INF, invert, lag, positive, project, reduce_free


class UnsupportedResynchronizer(ValueError):
    pass


@dataclass(frozen=True)
class Resynchronizer:
    """A transducer over the colored alphabet relating sync words of the same pair."""

    carrier: Transducer
    alphabet: tuple
    name: str = "S"


class UniversalResynchronizer:
    """Marker for the resynchronizer relating all equivalent sync words.

    It is not rational, so no operation accepts it.
    """

    name = "U"

    def __repr__(self):
        return "UNIVERSAL"


UNIVERSAL = UniversalResynchronizer()


def require_rational(s):
    if isinstance(s, UniversalResynchronizer):
        raise UnsupportedResynchronizer("universal resynchronizer unsupported")
    return s


def sync_alphabet(alphabet):
    return tuple((a, IN) for a in alphabet) + tuple((a, OUT) for a in alphabet)


def identity_resync(alphabet):
    sigma = sync_alphabet(alphabet)
    carrier = Transducer(sigma, {"eps"}, {"eps"}, {"eps": ()}, [("eps", (x,), (x,), "eps") for x in sigma], "I")
    return Resynchronizer(carrier, tuple(alphabet), "I")


def delay_state_name(u):
    if not u:
        return "eps"
    return ".".join(str(a) + ("" if e == 1 else "^-1") for a, e in u)


def delay_states(alphabet, k):
    """Reduced words of Sigma* or (Sigma^-1)* of length at most k."""
    out = [()]
    for n in range(1, k + 1):
        for w in product(alphabet, repeat=n):
            out.append(tuple((a, 1) for a in w))
            out.append(tuple((a, -1) for a in w))
    return out


def build_dk(alphabet, k, catch_up=True):
    """The k-delay resynchronizer.

    A state is the current delay u between the output read and the output
    written: u in Sigma* means u is owed, u in (Sigma^-1)* means u was written
    ahead.  Transitions copy input letters, read one output letter while
    writing any word, and write ahead from the empty delay.  With
    ``catch_up`` (the default) owed output may also be written without
    reading, from any state; without it a word like ``o.a i.a i.a`` cannot be
    resynchronized to ``i.a o.a i.a`` although their lag is 1.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    alphabet = tuple(alphabet)
    sigma = sync_alphabet(alphabet)
    qs = delay_states(alphabet, k)
    qset = set(qs)
    name = delay_state_name
    trans = set()
    words = {n: list(product(alphabet, repeat=n)) for n in range(2 * k + 2)}
    for u in qs:
        for x in alphabet:
            trans.add((name(u), ((x, IN),), ((x, IN),), name(u)))
            for n in range(2 * k + 2):
                for v in words[n]:
                    r = reduce_free(invert(positive(v)) + u + ((x, 1),))
                    if r in qset:
                        trans.add((name(u), ((x, OUT),), tuple((b, OUT) for b in v), name(r)))
        if u and not catch_up:
            continue
        for n in range(1, 2 * k + 1):
            for v in words[n]:
                r = reduce_free(invert(positive(v)) + u)
                if r in qset:
                    trans.add((name(u), (), tuple((b, OUT) for b in v), name(r)))
    final = {name(u): tuple((a, OUT) for a, _ in u) for u in qs if all(e == 1 for _, e in u)}
    carrier = Transducer(sigma, {name(u) for u in qs}, {"eps"}, final, trans, "D%d" % k)
    return Resynchronizer(carrier, alphabet, "D%d" % k)


def _read_word(moves, start, word):
    cur = {start}
    for x in word:
        cur = set().union(*(moves.get((q, x), ()) for q in cur)) if cur else set()
    return cur


def apply(s, lang):
    """Automaton for S(L): pairs of carrier state and state of L."""
    s = require_rational(s)
    c = s.carrier
    lang = fa.letterize(lang)
    moves = {}
    for p, lab, q in lang.transitions:
        moves.setdefault((p, lab[0]), set()).add(q)
    sink = sink_name(set())
    start = {(i, j) for i in c.initial for j in lang.initial}
    seen = set(start)
    todo = deque(ssorted(start))
    trans = []
    while todo:
        ci, lj = todo.popleft()
        for x, y, cn in c.successors[ci]:
            for ln in ssorted(_read_word(moves, lj, x)):
                nxt = (cn, ln)
                trans.append(((ci, lj), y, nxt))
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
        if ci in c.final and lj in lang.final:
            trans.append(((ci, lj), c.final[ci], sink))
    return fa.Nfa(c.alphabet, seen | {sink}, start, {sink}, trans)


def image_of_word(s, w):
    return apply(s, fa.word_nfa(s.carrier.alphabet, w))


def check_axioms(s, max_len):
    """Bounded check: every w is in S({w}) and every image is equivalent to w."""
    sigma = s.carrier.alphabet
    for w in fa.words_upto(sigma, max_len):
        img = image_of_word(s, w)
        if not fa.accepts(img, w):
            return False
        shuffle = shuffle_automaton(project(w, IN), project(w, OUT))
        shuffle = fa.Nfa(sigma, shuffle.states, shuffle.initial, shuffle.final, shuffle.transitions)
        if not fa.includes(img, shuffle):
            return False
    return True


def s_inclusion_counterexample(t1, t2, s):
    """A sync word of t1 outside S(L(t2)), or None when t1 is S-included in t2."""
    return fa.inclusion_counterexample(underlying_automaton(t1), apply(s, underlying_automaton(t2)))


def s_included(t1, t2, s):
    return s_inclusion_counterexample(t1, t2, s) is None


def s_equivalent(t1, t2, s):
    return s_included(t1, t2, s) and s_included(t2, t1, s)


def _dk(t1, k):
    if k > LIMITS.decision_k_cap:
        raise CapExceeded("k = %d exceeds the decision cap %d" % (k, LIMITS.decision_k_cap))
    return build_dk(t1.alphabet, k)


def k_inclusion_counterexample(t1, t2, k):
    return s_inclusion_counterexample(t1, t2, _dk(t1, k))


def k_included(t1, t2, k):
    return k_inclusion_counterexample(t1, t2, k) is None


def k_equivalent(t1, t2, k):
    s = _dk(t1, k)
    return s_included(t1, t2, s) and s_included(t2, t1, s)


def pair_counterexample(t1, t2, s, u, v):
    """A sync word of t1 with projections (u, v) and no S-preimage in L(t2)."""
    a1 = underlying_automaton(t1)
    sh = shuffle_automaton(u, v)
    sh = fa.Nfa(a1.alphabet, sh.states, sh.initial, sh.final, sh.transitions)
    return fa.inclusion_counterexample(fa.intersect(a1, sh), apply(s, underlying_automaton(t2)))


def min_lag(t, w):
    """Smallest lag between w and a sync word of t with the same projections."""
    others = sync_words_for_pair(t, project(w, IN), project(w, OUT))
    return min((lag(w, w2) for w2 in others), default=INF)


def inclusion_bound_k(t1, t2, m):
    """4 M |Q1| ((|Delta2| |Q2|)^m 2^(|Q2| |Delta2|) + 1), as an exact integer."""
    if not (is_real_time(t1) and is_real_time(t2)):
        raise ValueError("inclusion_bound_k needs real-time transducers")
    big_m = max(t1.max_output, t2.max_output)
    q1, q2, d2 = len(t1.states), len(t2.states), len(t2.transitions)
    return 4 * big_m * q1 * ((d2 * q2) ** m * 2 ** (q2 * d2) + 1)
