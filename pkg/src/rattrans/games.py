"""Safety games and sequential uniformizer synthesis modulo a resynchronizer."""

from collections import deque
from dataclasses import dataclass, field

from . import automata as fa
from .config import LIMITS, CapExceeded
from .resync import apply, require_rational
from .transducer import Transducer, domain_automaton, is_sequential, underlying_automaton
from .words import IN, OUT

INPUT = "in"
OUTPUT = "out"


class NotUniformizable(ValueError):
    pass


@dataclass
class SafetyGame:
    """Two-player game; Output must avoid ``bad`` forever.

    ``edges[v]`` is an ordered list of ``(annotation, target)`` pairs.  A vertex
    without edges is a dead end: it loses for its owner.
    """

    owner: dict = field(default_factory=dict)
    edges: dict = field(default_factory=dict)
    initial: object = None
    bad: set = field(default_factory=set)

    def add_vertex(self, v, who):
        if v not in self.owner:
            self.owner[v] = who
            self.edges[v] = []
            if len(self.owner) > LIMITS.game_vertex_cap:
                raise CapExceeded("game exceeds %d vertices" % LIMITS.game_vertex_cap)

    def vertices(self):
        return list(self.owner)


def solve_safety(g):
    """Winning region of Output and a positional strategy on it.

    Computes the attractor of Input to the bad set (plus Output dead ends)
    with predecessor counters; the strategy picks the first edge that stays
    in the winning region.
    """
    preds = {v: [] for v in g.owner}
    remaining = {}
    for v, es in g.edges.items():
        remaining[v] = len(es)
        for _, w in es:
            preds[w].append(v)
    attr = set()
    todo = deque()
    for v in g.owner:
        if v in g.bad or (g.owner[v] == OUTPUT and not g.edges[v]):
            attr.add(v)
            todo.append(v)
    while todo:
        w = todo.popleft()
        for v in preds[w]:
            if v in attr:
                continue
            if g.owner[v] == INPUT:
                attr.add(v)
                todo.append(v)
            else:
                remaining[v] -= 1
                if remaining[v] == 0:
                    attr.add(v)
                    todo.append(v)
    win = set(g.owner) - attr
    strategy = {}
    for v in g.owner:
        if v in win and g.owner[v] == OUTPUT:
            strategy[v] = next(i for i, (_, w) in enumerate(g.edges[v]) if w in win)
    return win, strategy


def _bursts(dfa, start, letters, max_len, live):
    """Shortest (then alphabet-least) output word reaching each live state."""
    found = {start: ()}
    layer = [start]
    for _ in range(max_len):
        nxt = []
        for q in layer:
            for x in letters:
                r = dfa.step(q, x)
                if r not in found:
                    found[r] = found[q] + (x,)
                    nxt.append(r)
        layer = nxt
    return [(w, q) for q, w in sorted(found.items(), key=lambda kv: (len(kv[1]), kv[0])) if q in live]


def _dfa_live(dfa):
    return fa.coreachable(dfa.to_nfa())


def build_uniformization_game(t, s, max_burst=None):
    """Game whose Output winning strategies are sequential S-uniformizers of t.

    Vertices: ("I", b, d) Input-owned, ("O", b, d, a) and ("E", b, d)
    Output-owned, plus the winning sink "WIN".  ``b`` tracks the determinized
    S-image of the sync language, ``d`` the determinized domain.  Output
    bursts are shortest words to each reachable state of the image DFA; bursts
    into states with no accepting continuation are dropped since Input can
    then always finish a domain word and win.
    """
    s = require_rational(s)
    sigma = tuple(t.alphabet)
    outs = tuple((a, OUT) for a in sigma)
    big_b = fa.determinize(apply(s, underlying_automaton(t)))
    big_d = fa.determinize(domain_automaton(t))
    live_b, live_d = _dfa_live(big_b), _dfa_live(big_d)
    if max_burst is None:
        max_burst = max(big_b.n - 1, 0)
    g = SafetyGame()
    g.initial = ("I", 0, 0)
    g.add_vertex(g.initial, INPUT)
    g.add_vertex("WIN", INPUT)
    g.edges["WIN"].append(((), "WIN"))
    todo = deque([g.initial])
    seen = {g.initial, "WIN"}

    def push(v, who, ann, src):
        g.add_vertex(v, who)
        g.edges[src].append((ann, v))
        if v not in seen:
            seen.add(v)
            todo.append(v)

    while todo:
        v = todo.popleft()
        kind = v[0]
        if kind == "I":
            _, b, d = v
            if d not in live_d:
                g.edges[v].append(((), v))
                continue
            for a in sigma:
                if big_d.step(d, a) in live_d:
                    push(("O", b, d, a), OUTPUT, a, v)
            if d in big_d.final:
                push(("E", b, d), OUTPUT, "end", v)
        elif kind == "O":
            _, b, d, a = v
            b1 = big_b.step(b, (a, IN))
            d1 = big_d.step(d, a)
            for w, b2 in _bursts(big_b, b1, outs, max_burst, live_b):
                push(("I", b2, d1), INPUT, tuple(x for x, _ in w), v)
        else:
            _, b, d = v
            wins = [w for w, b2 in _bursts(big_b, b, outs, max_burst, live_b) if b2 in big_b.final]
            if wins:
                g.edges[v].append((tuple(x for x, _ in wins[0]), "WIN"))
            else:
                g.bad.add(v)
    return g


def extract_sequential_uniformizer(g, strategy, alphabet, win=None, name="U"):
    """Sequential transducer following the strategy from the initial vertex."""
    if win is None:
        win, _ = solve_safety(g)
    if g.initial not in win:
        raise NotUniformizable("not uniformizable at this resynchronizer")
    names = {}

    def nm(v):
        if v not in names:
            names[v] = "u%d" % len(names)
        return names[v]

    trans, final = [], {}
    todo = deque([g.initial])
    nm(g.initial)
    while todo:
        v = todo.popleft()
        for label, w in g.edges[v]:
            if w[0] == "O":
                out, nxt = g.edges[w][strategy[w]]
                if nxt not in names:
                    todo.append(nxt)
                trans.append((nm(v), (label,), out, nm(nxt)))
            elif w[0] == "E":
                out, _ = g.edges[w][strategy[w]]
                final[nm(v)] = out
    return Transducer(alphabet, set(names.values()), {nm(g.initial)}, final, trans, name)


def verify_uniformizer(u, t, s):
    """L(u) is inside S(L(t)) and u has the same domain as t."""
    s = require_rational(s)
    if not fa.includes(underlying_automaton(u), apply(s, underlying_automaton(t))):
        return False
    return fa.equivalent_languages(domain_automaton(u), domain_automaton(t))


def seq_s_uniformizable(t, s, max_burst=None):
    """A verified sequential S-uniformizer of t, or None if the game is lost."""
    g = build_uniformization_game(t, s, max_burst)
    win, strategy = solve_safety(g)
    if g.initial not in win:
        return None
    u = extract_sequential_uniformizer(g, strategy, t.alphabet, win)
    if not (is_sequential(u) and verify_uniformizer(u, t, s)):
        raise RuntimeError("synthesized uniformizer failed its self-check")
    return u


def game_to_dot(g, name="game"):
    ids = {v: "v%d" % i for i, v in enumerate(g.owner)}
    lines = ["digraph %s {" % name, "  rankdir=LR;"]
    for v, i in ids.items():
        shape = "box" if g.owner[v] == OUTPUT else "ellipse"
        color = ' color="red"' if v in g.bad else ""
        lines.append('  %s [shape=%s label="%s"%s];' % (i, shape, str(v).replace('"', "'"), color))
    for v, es in g.edges.items():
        for ann, w in es:
            lines.append('  %s -> %s [label="%s"];' % (ids[v], ids[w], str(ann).replace('"', "'")))
    lines.append("}")
    return "\n".join(lines) + "\n"
