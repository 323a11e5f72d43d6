"""Finite automata with word labels, and the Boolean algorithms on them.

Transitions are triples ``(source, label, target)`` where ``label`` is a
tuple of letters (the empty tuple is an epsilon move).  States may be any
hashable value; whenever an ordering matters they are sorted by ``repr`` so
results do not depend on hash seeds.
"""

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .config import LIMITS

log = logging.getLogger(__name__)


def skey(x):
    return repr(x)


def ssorted(xs):
    return sorted(xs, key=skey)


class AutomatonError(ValueError):
    pass


@dataclass(frozen=True)
class Nfa:
    alphabet: tuple
    states: frozenset
    initial: frozenset
    final: frozenset
    transitions: frozenset

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        for name in ("states", "initial", "final"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        object.__setattr__(
            self, "transitions", frozenset((p, tuple(lab), q) for p, lab, q in self.transitions)
        )
        if not (self.initial <= self.states and self.final <= self.states):
            raise AutomatonError("initial/final states must be declared")
        letters = set(self.alphabet)
        for p, lab, q in self.transitions:
            if p not in self.states or q not in self.states:
                raise AutomatonError("transition %r uses an undeclared state" % ((p, lab, q),))
            for x in lab:
                if x not in letters:
                    raise AutomatonError("label letter %r not in alphabet" % (x,))

    @cached_property
    def successors(self):
        out = {q: [] for q in self.states}
        for p, lab, q in ssorted(self.transitions):
            out[p].append((lab, q))
        return out

    @cached_property
    def is_letterized(self):
        return all(len(lab) == 1 for _, lab, _ in self.transitions)

    def __len__(self):
        return len(self.states)


@dataclass(frozen=True)
class Dfa:
    """Complete deterministic automaton; states are 0..n-1, initial state 0."""

    alphabet: tuple
    n: int
    delta: dict
    final: frozenset

    @property
    def states(self):
        return range(self.n)

    @property
    def initial(self):
        return 0

    def step(self, q, x):
        return self.delta[q, x]

    def run(self, w, q=0):
        for x in w:
            q = self.delta[q, x]
        return q

    def accepts(self, w):
        return self.run(w) in self.final

    def to_nfa(self):
        trans = [(q, (x,), self.delta[q, x]) for q in range(self.n) for x in self.alphabet]
        return Nfa(self.alphabet, range(self.n), {0}, self.final, trans)


def empty_nfa(alphabet):
    return Nfa(alphabet, set(), set(), set(), set())


def word_nfa(alphabet, w):
    """Automaton accepting exactly the word ``w``."""
    n = len(w)
    return Nfa(alphabet, range(n + 1), {0}, {n}, [(i, (w[i],), i + 1) for i in range(n)])


def universal_nfa(alphabet):
    return Nfa(alphabet, {0}, {0}, {0}, [(0, (x,), 0) for x in alphabet])


def accepts(a, w):
    """Membership by direct search over (state, position); handles any labels."""
    w = tuple(w)
    seen = set()
    todo = deque((q, 0) for q in a.initial)
    while todo:
        q, i = todo.popleft()
        if (q, i) in seen:
            continue
        seen.add((q, i))
        if i == len(w) and q in a.final:
            return True
        for lab, r in a.successors[q]:
            if w[i:i + len(lab)] == lab:
                todo.append((r, i + len(lab)))
    return False


def eps_closure(a, states):
    seen = set(states)
    todo = list(states)
    while todo:
        q = todo.pop()
        for lab, r in a.successors[q]:
            if not lab and r not in seen:
                seen.add(r)
                todo.append(r)
    return frozenset(seen)


def letterize(a):
    """Language-equivalent automaton whose labels are single letters."""
    if a.is_letterized:
        return a
    states = set(a.states)
    split = []
    for p, lab, q in a.transitions:
        if len(lab) <= 1:
            split.append((p, lab, q))
            continue
        chain = [p] + [("~", p, lab, q, i) for i in range(1, len(lab))] + [q]
        states.update(chain[1:-1])
        for i, x in enumerate(lab):
            split.append((chain[i], (x,), chain[i + 1]))
    b = Nfa(a.alphabet, states, a.initial, a.final, split)
    trans = set()
    final = set()
    for p in b.states:
        cl = eps_closure(b, [p])
        if cl & b.final:
            final.add(p)
        for q in cl:
            for lab, r in b.successors[q]:
                if lab:
                    trans.add((p, lab, r))
    return Nfa(a.alphabet, b.states, b.initial, final, trans)


def _letter_moves(a):
    """letter -> {state: sorted successors} for a letterized automaton."""
    moves = {}
    for p, lab, q in a.transitions:
        moves.setdefault((p, lab[0]), set()).add(q)
    return moves


def _post(moves, subset, x):
    out = set()
    for p in subset:
        out.update(moves.get((p, x), ()))
    return frozenset(out)


def determinize(a):
    """Subset construction; the result is complete (the empty subset is a sink)."""
    a = letterize(a)
    moves = _letter_moves(a)
    start = frozenset(a.initial)
    index = {start: 0}
    order = [start]
    delta = {}
    i = 0
    while i < len(order):
        s = order[i]
        for x in a.alphabet:
            t = _post(moves, s, x)
            if t not in index:
                index[t] = len(order)
                order.append(t)
                if len(order) == LIMITS.determinize_warn:
                    log.warning("subset construction passed %d states", len(order))
            delta[i, x] = index[t]
        i += 1
    final = frozenset(j for j, s in enumerate(order) if s & a.final)
    return Dfa(a.alphabet, len(order), delta, final)


def complement(d):
    return Dfa(d.alphabet, d.n, d.delta, frozenset(range(d.n)) - d.final)


def intersect(a, b):
    a, b = letterize(a), letterize(b)
    ma, mb = _letter_moves(a), _letter_moves(b)
    start = {(p, q) for p in a.initial for q in b.initial}
    seen = set(start)
    todo = deque(ssorted(start))
    trans = []
    while todo:
        p, q = todo.popleft()
        for x in a.alphabet:
            for p2 in ma.get((p, x), ()):
                for q2 in mb.get((q, x), ()):
                    trans.append(((p, q), (x,), (p2, q2)))
                    if (p2, q2) not in seen:
                        seen.add((p2, q2))
                        todo.append((p2, q2))
    final = {(p, q) for p, q in seen if p in a.final and q in b.final}
    return Nfa(a.alphabet, seen, start, final, trans)


def union(a, b):
    def tag(i, aut):
        return (
            {(i, q) for q in aut.states},
            {(i, q) for q in aut.initial},
            {(i, q) for q in aut.final},
            {((i, p), lab, (i, q)) for p, lab, q in aut.transitions},
        )

    sa, ia, fa, ta = tag(0, a)
    sb, ib, fb, tb = tag(1, b)
    alphabet = tuple(a.alphabet) + tuple(x for x in b.alphabet if x not in a.alphabet)
    return Nfa(alphabet, sa | sb, ia | ib, fa | fb, ta | tb)


def reachable(a, start=None):
    start = a.initial if start is None else start
    seen = set(start)
    todo = list(start)
    while todo:
        q = todo.pop()
        for _, r in a.successors[q]:
            if r not in seen:
                seen.add(r)
                todo.append(r)
    return seen


def coreachable(a):
    pred = {q: [] for q in a.states}
    for p, _, q in a.transitions:
        pred[q].append(p)
    seen = set(a.final)
    todo = list(a.final)
    while todo:
        q = todo.pop()
        for p in pred[q]:
            if p not in seen:
                seen.add(p)
                todo.append(p)
    return seen


def trim(a):
    keep = reachable(a) & coreachable(a)
    trans = [(p, lab, q) for p, lab, q in a.transitions if p in keep and q in keep]
    return Nfa(a.alphabet, keep, a.initial & keep, a.final & keep, trans)


def is_empty(a):
    return not (reachable(a) & a.final)


def shortest_accepted(a):
    """Shortest accepted word, ties broken by alphabet order; None if empty."""
    a = letterize(a)
    moves = _letter_moves(a)
    start = frozenset(a.initial)
    parent = {start: None}
    todo = deque([start])
    while todo:
        s = todo.popleft()
        if s & a.final:
            w = []
            while parent[s] is not None:
                s, x = parent[s]
                w.append(x)
            return tuple(reversed(w))
        for x in a.alphabet:
            t = _post(moves, s, x)
            if t and t not in parent:
                parent[t] = (s, x)
                todo.append(t)
    return None


def inclusion_counterexample(a, b):
    """Shortest word in L(a) minus L(b), or None when L(a) is included in L(b).

    Runs the product of a with the complement of det(b), building both subset
    constructions on the fly.
    """
    a, b = letterize(a), letterize(b)
    alphabet = tuple(a.alphabet) + tuple(x for x in b.alphabet if x not in a.alphabet)
    ma, mb = _letter_moves(a), _letter_moves(b)
    start = (frozenset(a.initial), frozenset(b.initial))
    parent = {start: None}
    todo = deque([start])
    while todo:
        node = todo.popleft()
        sa, sb = node
        if sa & a.final and not sb & b.final:
            w = []
            while parent[node] is not None:
                node, x = parent[node]
                w.append(x)
            return tuple(reversed(w))
        for x in alphabet:
            ta = _post(ma, sa, x)
            if not ta:
                continue
            nxt = (ta, _post(mb, sb, x))
            if nxt not in parent:
                parent[nxt] = (node, x)
                todo.append(nxt)
    return None


def includes(a, b):
    return inclusion_counterexample(a, b) is None


def equivalent_languages(a, b):
    return includes(a, b) and includes(b, a)


def count_accepting_runs(a, w):
    """Number of accepting runs of a letterized automaton on ``w``."""
    if not a.is_letterized:
        raise AutomatonError("count_accepting_runs needs a letterized automaton")
    counts = {q: 1 for q in a.initial}
    for x in w:
        nxt = {}
        for p, lab, q in a.transitions:
            if lab[0] == x and p in counts:
                nxt[q] = nxt.get(q, 0) + counts[p]
        counts = nxt
    return sum(c for q, c in counts.items() if q in a.final)


def is_unambiguous(a):
    """No word has two accepting runs (letterized, trimmed square check)."""
    a = trim(letterize(a))
    sq = intersect(a, a)
    live = reachable(sq) & coreachable(sq)
    return all(p == q for p, q in live)


def words_upto(alphabet, n):
    """All words of length at most n, shortest first, in alphabet order."""
    layer = [()]
    for _ in range(n + 1):
        yield from layer
        layer = [w + (x,) for w in layer for x in alphabet]


def language_upto(a, n):
    return {w for w in words_upto(a.alphabet, n) if accepts(a, w)}
