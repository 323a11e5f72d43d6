"""Nondeterministic finite transducers and their synchronization languages."""

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType

from . import automata as fa
from .automata import ssorted
from .words import IN, OUT


class TransducerError(ValueError):
    pass


@dataclass(frozen=True)
class Transducer:
    """(Q, I, F, Delta, f): ``final`` maps each final state to its output word."""

    alphabet: tuple
    states: frozenset
    initial: frozenset
    final: dict
    transitions: frozenset
    name: str = field(default="T", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(
            self, "final", MappingProxyType({q: tuple(v) for q, v in dict(self.final).items()})
        )
        object.__setattr__(
            self,
            "transitions",
            frozenset((p, tuple(x), tuple(y), q) for p, x, y, q in self.transitions),
        )
        if not self.initial <= self.states:
            raise TransducerError("initial states must be declared")
        if not set(self.final) <= self.states:
            raise TransducerError("final states must be declared")
        letters = set(self.alphabet)
        for q, out in self.final.items():
            if not set(out) <= letters:
                raise TransducerError("final output of %r leaves the alphabet" % (q,))
        for p, x, y, q in self.transitions:
            if p not in self.states or q not in self.states:
                raise TransducerError("transition %r uses an undeclared state" % ((p, x, y, q),))
            if not (set(x) <= letters and set(y) <= letters):
                raise TransducerError("transition %r leaves the alphabet" % ((p, x, y, q),))

    def __hash__(self):
        return hash((self.alphabet, self.states, self.initial, self.transitions))

    def __eq__(self, other):
        if not isinstance(other, Transducer):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.states == other.states
            and self.initial == other.initial
            and dict(self.final) == dict(other.final)
            and self.transitions == other.transitions
        )

    @cached_property
    def successors(self):
        out = {q: [] for q in self.states}
        for p, x, y, q in ssorted(self.transitions):
            out[p].append((x, y, q))
        return out

    @property
    def max_output(self):
        """Largest output length over transitions and final outputs."""
        lengths = [len(y) for _, _, y, _ in self.transitions] + [len(v) for v in self.final.values()]
        return max(lengths, default=0)

    def renamed(self, name):
        return Transducer(self.alphabet, self.states, self.initial, self.final, self.transitions, name)


def sink_name(states, base="q⊣"):
    name = base
    while name in states:
        name += "'"
    return name


def underlying_automaton(t):
    """Automaton over the colored alphabet whose language is the sync language of t."""
    sink = sink_name(t.states)
    sigma = tuple((a, IN) for a in t.alphabet) + tuple((a, OUT) for a in t.alphabet)
    trans = [
        (p, tuple((a, IN) for a in x) + tuple((b, OUT) for b in y), q)
        for p, x, y, q in t.transitions
    ]
    trans += [(q, tuple((b, OUT) for b in out), sink) for q, out in t.final.items()]
    return fa.Nfa(sigma, t.states | {sink}, t.initial, {sink}, trans)


def base_alphabet(sync_alphabet):
    seen = []
    for a, _ in sync_alphabet:
        if a not in seen:
            seen.append(a)
    return tuple(seen)


def from_sync_language(a, alphabet=None, name="T"):
    """Transducer whose relation is the set of projections of L(a)."""
    a = fa.letterize(a)
    alphabet = base_alphabet(a.alphabet) if alphabet is None else tuple(alphabet)
    trans = []
    for p, lab, q in a.transitions:
        (x, c), = lab
        trans.append((p, (x,), (), q) if c == IN else (p, (), (x,), q))
    return Transducer(alphabet, a.states, a.initial, {q: () for q in a.final}, trans, name)


def trim(t):
    g = fa.Nfa((), t.states, t.initial, t.final.keys(), [(p, (), q) for p, _, _, q in t.transitions])
    keep = fa.reachable(g) & fa.coreachable(g)
    return Transducer(
        t.alphabet,
        keep,
        t.initial & keep,
        {q: v for q, v in t.final.items() if q in keep},
        [(p, x, y, q) for p, x, y, q in t.transitions if p in keep and q in keep],
        t.name,
    )


def domain_automaton(t):
    t = trim(t)
    return fa.Nfa(t.alphabet, t.states, t.initial, t.final.keys(), [(p, x, q) for p, x, _, q in t.transitions])


def is_real_time(t):
    return all(len(x) == 1 for _, x, _, _ in t.transitions)


def is_sequential(t):
    if len(t.initial) > 1 or not is_real_time(t):
        return False
    seen = set()
    for p, x, _, _ in t.transitions:
        if (p, x) in seen:
            return False
        seen.add((p, x))
    return True


def sequential_output(t, u):
    """Output of a sequential transducer on ``u`` (None outside the domain)."""
    if not t.initial:
        return None
    (q,) = t.initial
    step = {(p, x[0]): (y, r) for p, x, y, r in t.transitions}
    out = ()
    for a in u:
        if (q, a) not in step:
            return None
        y, q = step[q, a]
        out += y
    if q not in t.final:
        return None
    return out + t.final[q]


def union(t1, t2, name="T"):
    def tag(i, q):
        return (i, q)

    trans = [(tag(0, p), x, y, tag(0, q)) for p, x, y, q in t1.transitions]
    trans += [(tag(1, p), x, y, tag(1, q)) for p, x, y, q in t2.transitions]
    final = {tag(0, q): v for q, v in t1.final.items()}
    final.update({tag(1, q): v for q, v in t2.final.items()})
    alphabet = tuple(t1.alphabet) + tuple(a for a in t2.alphabet if a not in t1.alphabet)
    return Transducer(
        alphabet,
        {tag(0, q) for q in t1.states} | {tag(1, q) for q in t2.states},
        {tag(0, q) for q in t1.initial} | {tag(1, q) for q in t2.initial},
        final,
        trans,
        name,
    )


def _eps_graph_cycles(t):
    """Does a cycle of empty-input transitions emit output?"""
    moves = {}
    for p, x, y, q in t.transitions:
        if not x:
            moves.setdefault(p, []).append((q, bool(y)))
    # a productive cycle exists iff some productive edge p->q has q reaching p
    for p, x, y, q in t.transitions:
        if x or not y:
            continue
        seen = {q}
        todo = [q]
        while todo:
            s = todo.pop()
            if s == p:
                return True
            for r, _ in moves.get(s, ()):
                if r not in seen:
                    seen.add(r)
                    todo.append(r)
    return False


def to_real_time(t):
    """Equivalent transducer whose transitions each read exactly one letter."""
    t = trim(t)
    if _eps_graph_cycles(t):
        raise TransducerError("not real-time convertible: an empty-input cycle produces output")
    states = set(t.states)
    split = []
    for p, x, y, q in t.transitions:
        if len(x) <= 1:
            split.append((p, x, y, q))
            continue
        chain = [p] + [("~", p, x, y, q, i) for i in range(1, len(x))] + [q]
        states.update(chain[1:-1])
        for i, a in enumerate(x):
            split.append((chain[i], (a,), y if i == 0 else (), chain[i + 1]))
    eps = {}
    letters = {}
    for p, x, y, q in split:
        (letters if x else eps).setdefault(p, []).append((x, y, q))

    def closure(p):
        seen = {(p, ())}
        todo = [(p, ())]
        while todo:
            s, out = todo.pop()
            for _, y, r in eps.get(s, ()):
                if (r, out + y) not in seen:
                    seen.add((r, out + y))
                    todo.append((r, out + y))
        return seen

    trans = set()
    finals = {}
    ends = {}
    for p in states:
        for s, out in closure(p):
            for x, y, r in letters.get(s, ()):
                trans.add((p, x, out + y, r))
            if s in t.final:
                ends.setdefault(p, set()).add(out + t.final[s])
    # one extra final copy per distinct end output, entered like the original state
    new_states = set(states)
    initial = set()
    for p, outs in ends.items():
        for v in outs:
            copy = ("end", p, v)
            new_states.add(copy)
            finals[copy] = v
    for p, x, y, r in list(trans):
        for v in ends.get(r, ()):
            trans.add((p, x, y, ("end", r, v)))
    for p in t.initial:
        initial.add(p)
        for v in ends.get(p, ()):
            initial.add(("end", p, v))
    return trim(Transducer(t.alphabet, new_states, initial, finals, trans, t.name))


def enumerate_outputs(t, u, max_out_len):
    """{v : (u, v) in R_T and |v| <= max_out_len}."""
    u = tuple(u)
    results = set()
    start = [(q, 0, ()) for q in t.initial]
    seen = set(start)
    todo = deque(start)
    while todo:
        q, i, out = todo.popleft()
        if i == len(u) and q in t.final:
            v = out + t.final[q]
            if len(v) <= max_out_len:
                results.add(v)
        for x, y, r in t.successors[q]:
            if u[i:i + len(x)] != x or len(out) + len(y) > max_out_len:
                continue
            node = (r, i + len(x), out + y)
            if node not in seen:
                seen.add(node)
                todo.append(node)
    return results


def shuffle_automaton(u, v):
    """All sync words with input projection u and output projection v."""
    u, v = tuple(u), tuple(v)
    letters = tuple(dict.fromkeys([(a, IN) for a in u] + [(b, OUT) for b in v]))
    trans = []
    for i in range(len(u) + 1):
        for j in range(len(v) + 1):
            if i < len(u):
                trans.append(((i, j), ((u[i], IN),), (i + 1, j)))
            if j < len(v):
                trans.append(((i, j), ((v[j], OUT),), (i, j + 1)))
    states = {(i, j) for i in range(len(u) + 1) for j in range(len(v) + 1)}
    return fa.Nfa(letters, states, {(0, 0)}, {(len(u), len(v))}, trans)


def _pair_product(t, u, v):
    a = underlying_automaton(t)
    s = shuffle_automaton(u, v)
    s = fa.Nfa(a.alphabet, s.states, s.initial, s.final, s.transitions)
    return fa.trim(fa.intersect(a, s))


def evaluate_pair(t, u, v):
    return not fa.is_empty(_pair_product(t, u, v))


def sync_words_for_pair(t, u, v):
    """Every sync word of t whose projections are (u, v)."""
    prod = _pair_product(t, u, v)
    memo = {}

    def words_from(q):
        if q not in memo:
            ws = {()} if q in prod.final else set()
            for lab, r in prod.successors[q]:
                ws |= {lab + w for w in words_from(r)}
            memo[q] = ws
        return memo[q]

    out = set()
    for q in prod.initial:
        out |= words_from(q)
    return out


def default_out_bound(t1, t2, n):
    m = max(t1.max_output, t2.max_output, 1)
    return (n + 1) * m


def relation_upto(t, n, max_out_len):
    return {u: enumerate_outputs(t, u, max_out_len) for u in fa.words_upto(t.alphabet, n)}


def relation_equal_bounded(t1, t2, n, max_out_len=None):
    """Compare R(u) for every u with |u| <= n (outputs capped at max_out_len).

    The default cap (n+1) times the largest transition or final output is
    exact for real-time transducers.
    """
    if max_out_len is None:
        max_out_len = default_out_bound(t1, t2, n)
    alphabet = tuple(t1.alphabet) + tuple(a for a in t2.alphabet if a not in t1.alphabet)
    for u in fa.words_upto(alphabet, n):
        if enumerate_outputs(t1, u, max_out_len) != enumerate_outputs(t2, u, max_out_len):
            return False
    return True
