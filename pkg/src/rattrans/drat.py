"""Deterministic endmarked transducers and their uniformization game.

A transformation is a tuple indexed by the sorted input states of the
transducer; entry ``None`` means undefined.  A transformation sequence is a
tuple of transformations.  Profiles are frozensets of ``(p, tag, q)`` with
``tag`` in ``{"eps", "+"}``.
"""

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import factorial

from . import automata as fa
from .automata import ssorted
from .config import LIMITS, CapExceeded
from .games import INPUT, OUTPUT, SafetyGame, solve_safety
from .transducer import Transducer, is_sequential, sequential_output
from .words import END

EPS = "eps"
PLUS = "+"


@dataclass(frozen=True, eq=False)
class DetTransducer:
    alphabet: tuple
    istates: frozenset
    ostates: frozenset
    initial: object
    final: frozenset
    delta: dict
    name: str = field(default="T")

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        for n in ("istates", "ostates", "final"):
            object.__setattr__(self, n, frozenset(getattr(self, n)))
        object.__setattr__(self, "delta", dict(self.delta))
        if END in self.alphabet:
            raise ValueError("the endmarker cannot be a letter")
        if self.istates & self.ostates:
            raise ValueError("input and output states overlap")
        if self.initial not in self.states:
            raise ValueError("initial state %r is not declared" % (self.initial,))
        if not self.final <= self.states:
            raise ValueError("final states must be declared")
        for q in self.states:
            for a in self.letters:
                if (q, a) not in self.delta:
                    raise ValueError("delta is not total: missing (%r, %r)" % (q, a))
                if self.delta[q, a] not in self.states:
                    raise ValueError("delta(%r, %r) is undeclared" % (q, a))
        if len(self.delta) != len(self.states) * len(self.letters):
            raise ValueError("delta mentions unknown states or letters")

    def __eq__(self, other):
        if not isinstance(other, DetTransducer):
            return NotImplemented
        return (self.alphabet, self.istates, self.ostates, self.initial, self.final, self.delta) == (
            other.alphabet, other.istates, other.ostates, other.initial, other.final, other.delta,
        )

    def __hash__(self):
        return hash((self.alphabet, self.istates, self.ostates, self.initial, self.final))

    @cached_property
    def states(self):
        return self.istates | self.ostates

    @cached_property
    def letters(self):
        return self.alphabet + (END,)

    @cached_property
    def in_order(self):
        return tuple(ssorted(self.istates))

    @cached_property
    def in_index(self):
        return {q: i for i, q in enumerate(self.in_order)}

    @cached_property
    def state_order(self):
        return tuple(ssorted(self.states))


def delta_star(t, q, u, v):
    """Run input letters from input states and output letters from output states."""
    u, v = tuple(u), tuple(v)
    i = j = 0
    while True:
        if q in t.istates:
            if i == len(u):
                break
            q = t.delta[q, u[i]]
            i += 1
        else:
            if j == len(v):
                break
            q = t.delta[q, v[j]]
            j += 1
    return q, u[i:], v[j:]


def accepts(t, u, v):
    u, v = tuple(u), tuple(v)
    if END in u or END in v:
        return False
    q, ru, rv = delta_star(t, t.initial, u + (END,), v + (END,))
    return not ru and not rv and q in t.final


def endmarked(t):
    """Equivalent transducer that rejects endmarkers anywhere but at the end.

    States are ``(q, input_ended, output_ended)`` plus a rejecting sink.
    """
    sink = "⊥"
    start = (t.initial, 0, 0)
    seen = {start}
    todo = deque([start])
    delta = {}
    while todo:
        s = todo.popleft()
        q, i, o = s
        reads_input = q in t.istates
        done = i if reads_input else o
        for a in t.letters:
            if done:
                nxt = sink
            else:
                flag = 1 if a == END else 0
                nxt = (t.delta[q, a], flag, o) if reads_input else (t.delta[q, a], i, flag)
            delta[s, a] = nxt
            if nxt != sink and nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    for a in t.letters:
        delta[sink, a] = sink
    istates = {s for s in seen if s[0] in t.istates} | {sink}
    ostates = {s for s in seen if s[0] in t.ostates}
    final = {s for s in seen if s[0] in t.final and s[1] == 1 and s[2] == 1}
    return DetTransducer(t.alphabet, istates, ostates, start, final, delta, t.name)


def domain_dfa(t):
    """DFA over the endmarked alphabet for {u⊣ : (u, v) accepted for some v}."""
    t = endmarked(t)
    trans = []
    for (q, a), r in t.delta.items():
        if q in t.istates:
            trans.append((q, (a,), r))
        else:
            trans.append((q, (), r))
    return fa.determinize(fa.Nfa(t.letters, t.states, {t.initial}, t.final, trans))


# transformations and sequences

def tau_of_letter(t, a):
    return tuple(t.delta[q, a] for q in t.in_order)


def is_maximal(t, tau):
    return any(x in t.ostates for x in tau if x is not None)


def compose_tau(t, tau1, tau2):
    if is_maximal(t, tau1):
        raise ValueError("left factor of a transformation product must not be maximal")
    return tuple(None if x is None else tau2[t.in_index[x]] for x in tau1)


def compose(t, rho1, rho2):
    """Concatenate, then merge every non-maximal transformation into its successor.

    On the common cases (either side empty, maximal tail, single
    transformation on the right) this is exactly the usual product.  Merging
    until no gap is left keeps the result reduced and the product
    associative; a non-maximal tail composed with a maximal head can itself
    be non-maximal, and then it has to absorb the next transformation too.
    """
    out = list(rho1)
    for tau in rho2:
        if out and not is_maximal(t, out[-1]):
            out[-1] = compose_tau(t, out[-1], tau)
        else:
            out.append(tau)
    return tuple(out)


def rho_of_word(t, u):
    rho = ()
    for a in u:
        rho = compose(t, rho, (tau_of_letter(t, a),))
    return rho


def is_reduced(t, rho):
    return all(is_maximal(t, tau) for tau in rho[:-1])


def tau_consistent(t, tau, x):
    for q, target in zip(t.in_order, tau):
        p, rest, _ = delta_star(t, q, x, ())
        if target is not None and (rest or p != target):
            return False
        if not rest and p in t.istates and target is None:
            return False
    return True


def is_consistent(t, rho, u):
    """Can u be split into pieces, the i-th consistent with the i-th transformation?"""
    u = tuple(u)
    ends = {0}
    for tau in rho:
        nxt = set()
        for i in ends:
            for j in range(i, len(u) + 1):
                if tau_consistent(t, tau, u[i:j]):
                    nxt.add(j)
        ends = nxt
        if not ends:
            return False
    return len(u) in ends


def reduce_seq(t, rho):
    """Single transformation obtained by dropping intermediate output states."""
    if not rho:
        raise ValueError("cannot reduce the empty sequence")
    out = None
    for k, tau in enumerate(rho):
        if k < len(rho) - 1:
            tau = tuple(None if x in t.ostates else x for x in tau)
        out = tau if out is None else compose_tau(t, out, tau)
    return out


# output languages

def _lout_nfa(t, p, rho, finals):
    """Walks of output letters through rho; node (i, s) is 'inside copy i at s'."""
    n = len(rho)
    start = (0, p)
    seen = {start}
    todo = [start]
    trans = []
    while todo:
        i, s = todo.pop()
        if i == n:
            continue
        if s in t.ostates:
            succ = [((a,), (i, t.delta[s, a])) for a in t.letters]
        else:
            r = rho[i][t.in_index[s]]
            succ = [] if r is None else [((), (i + 1, r))]
        for lab, node in succ:
            trans.append(((i, s), lab, node))
            if node not in seen:
                seen.add(node)
                todo.append(node)
    return fa.Nfa(t.letters, seen, {start}, {(n, q) for q in finals if (n, q) in seen}, trans)


def lout_automaton(t, p, rho, q):
    return _lout_nfa(t, p, tuple(rho), [q])


def profile(t, rho):
    rho = tuple(rho)
    out = set()
    n = len(rho)
    for p in t.state_order:
        a = _lout_nfa(t, p, rho, t.states)
        reach = fa.reachable(a)
        eps = fa.eps_closure(a, a.initial)
        for i, q in reach:
            if i == n:
                out.add((p, EPS if (n, q) in eps else PLUS, q))
    return frozenset(out)


def identity_profile(t):
    return frozenset((q, EPS, q) for q in t.states)


def profile_mul(p1, p2):
    best = {}
    for a, t1, b in p1:
        for b2, t2, c in p2:
            if b == b2:
                tag = EPS if t1 == EPS and t2 == EPS else PLUS
                if best.get((a, c)) != EPS:
                    best[a, c] = tag
    return frozenset((a, tag, c) for (a, c), tag in best.items())


def is_idempotent(prof):
    return profile_mul(prof, prof) == prof


def profile_of_word(t, u):
    return profile(t, rho_of_word(t, u))


def profile_properties_hold(prof):
    """Checks the structural constraints satisfied by every profile."""
    eps = {}
    pairs = set()
    for p, tag, q in prof:
        if (p, q) in pairs:
            return False
        pairs.add((p, q))
        if tag == EPS:
            if p in eps and eps[p] != q:
                return False
            eps[p] = q
    if is_idempotent(prof):
        for q1, q2 in eps.items():
            if q2 in eps and eps[q2] != q2:
                return False
    return True


def shortest_traversal(t, p, rho, q):
    return fa.shortest_accepted(lout_automaton(t, p, rho, q))


def traversals(t, p, rho):
    """Shortest traversing word from p through rho to every reachable q.

    The walk graph is deterministic, so a breadth-first search expanding
    letters in alphabet order yields the alphabet-least shortest words.
    """
    a = _lout_nfa(t, p, tuple(rho), ())
    n = len(rho)

    def settle(node, word, found, layer):
        while True:
            if node in found:
                return
            found[node] = word
            nxt = [r for lab, r in a.successors[node] if not lab]
            if nxt:
                node = nxt[0]
                continue
            layer.append(node)
            return

    found = {}
    layer = []
    settle((0, p), (), found, layer)
    while layer:
        nxt_layer = []
        for node in layer:
            for lab, r in sorted(a.successors[node], key=lambda e: t.letters.index(e[0][0]) if e[0] else -1):
                if lab:
                    settle(r, found[node] + lab, found, nxt_layer)
        layer = nxt_layer
    return {q: w for (i, q), w in found.items() if i == n}


# saturation and bounds

def find_saturation_witness(t, rho, profiles):
    """First split rho = rho1 rho2 rho3 meeting the saturation conditions.

    rho1 is non-empty, rho2 has length at least 2 with idempotent profile
    absorbed by the profile of rho1, and the products of ``profiles`` over
    the two blocks satisfy the same absorption and idempotence.  Returns
    ``(len(rho1), len(rho1) + len(rho2))`` or None.
    """
    rho = tuple(rho)
    if len(profiles) != len(rho):
        raise ValueError("need one profile per transformation")
    n = len(rho)

    def prod(ps):
        out = ps[0]
        for x in ps[1:]:
            out = profile_mul(out, x)
        return out

    for i in range(1, n):
        p1 = profile(t, rho[:i])
        hat1 = prod(profiles[:i])
        for j in range(i + 2, n + 1):
            p2 = profile(t, rho[i:j])
            if not is_idempotent(p2) or profile_mul(p1, p2) != p1:
                continue
            hat2 = prod(profiles[i:j])
            if profile_mul(hat1, hat2) == hat1 and profile_mul(hat2, hat2) == hat2:
                return i, j
    return None


def word_profiles(t, cap=None):
    """All profiles of input words over the endmarked alphabet."""
    cap = LIMITS.monoid_cap if cap is None else cap
    letters = {a: profile(t, (tau_of_letter(t, a),)) for a in t.letters}
    start = identity_profile(t)
    seen = {start}
    todo = deque([start])
    while todo:
        p = todo.popleft()
        for a in t.letters:
            r = profile_mul(p, letters[a])
            if r not in seen:
                seen.add(r)
                if len(seen) > cap:
                    raise CapExceeded("more than %d profiles" % cap)
                todo.append(r)
    return seen


def ramsey3_bound(c):
    """3 * c!, an upper bound on the c-color Ramsey number for triangles."""
    return 3 * factorial(c)


def ramsey_K(t):
    """Length beyond which every sequence has a saturation witness.

    Colors are pairs of word profiles, so c = (number of word profiles)^2.
    """
    return ramsey3_bound(len(word_profiles(t)) ** 2)


# the game

def closing_word(t, p):
    """Shortest output completing the run from p to a final state, if any."""
    found = {p: ()}
    todo = deque([p])
    while todo:
        s = todo.popleft()
        if s in t.final:
            return found[s]
        if s in t.istates:
            continue
        for a in t.letters:
            r = t.delta[s, a]
            if r not in found:
                found[r] = found[s] + (a,)
                todo.append(r)
    return None


@dataclass
class DratGame:
    game: SafetyGame
    transducer: DetTransducer
    dom: fa.Dfa
    K: int
    max_annotation: int


def build_drat_game(t, K):
    """Lazy reachable game with moves In, Out0, Out1, Out2, Out3.

    Input vertices are ("I", p, rho, d), Output vertices ("O", p, rho, d, a).
    Input vertices whose domain state accepts are terminal; they are bad
    unless rho is empty and some output word completes the run from p.
    """
    if K < 0:
        raise ValueError("K must be non-negative")
    t = endmarked(t)
    dom = domain_dfa(t)
    live = fa.coreachable(dom.to_nfa())
    bound = 2 * K + 1
    cache = {}

    def trav(p, rho):
        key = (p, rho)
        if key not in cache:
            cache[key] = sorted(traversals(t, p, rho).items(), key=lambda kv: (len(kv[1]), repr(kv[0])))
        return cache[key]

    g = SafetyGame()
    g.initial = ("I", t.initial, (), 0)
    g.add_vertex(g.initial, INPUT)
    todo = deque([g.initial])
    seen = {g.initial}
    longest = 0

    def push(src, ann, v, who):
        nonlocal longest
        longest = max(longest, len(ann))
        g.add_vertex(v, who)
        g.edges[src].append((ann, v))
        if v not in seen:
            seen.add(v)
            todo.append(v)

    while todo:
        v = todo.popleft()
        if v[0] == "I":
            _, p, rho, d = v
            if d in dom.final:
                close = closing_word(t, p)
                if rho or close is None:
                    g.bad.add(v)
                else:
                    longest = max(longest, len(close))
                    g.edges[v].append(((), v))
                continue
            moves = [a for a in t.letters if dom.step(d, a) in live]
            if not moves:
                g.edges[v].append(((), v))
            for a in moves:
                push(v, (a,), ("O", p, rho, d, a), OUTPUT)
            continue
        _, p, rho, d, a = v
        tau = tau_of_letter(t, a)
        d1 = dom.step(d, a)
        if not rho:
            for q, w in trav(p, (tau,)):
                push(v, w, ("I", q, (), d1), INPUT)
        grown = compose(t, rho, (tau,))
        if len(grown) <= bound:
            push(v, (), ("I", p, grown, d1), INPUT)
        for i in range(1, len(rho) + 1):
            for q, w in trav(p, rho[:i]):
                push(v, w, ("O", q, rho[i:], d, a), OUTPUT)
        for i in range(len(rho)):
            for j in range(i + 2, len(rho) + 1):
                shrunk = rho[:i] + (reduce_seq(t, rho[i:j]),) + rho[j:]
                push(v, (), ("O", p, shrunk, d, a), OUTPUT)
    return DratGame(g, t, dom, K, longest)


def _follow(game, strategy, v):
    """Output moves chosen from Output vertex v until an Input vertex."""
    out = ()
    while game.owner[v] == OUTPUT:
        ann, v = game.edges[v][strategy[v]]
        out += ann
    return out, v


def extract_drat_uniformizer(dg, win, strategy, name="U"):
    """Sequential transducer over the plain alphabet; endmarker output is dropped."""
    g, t = dg.game, dg.transducer
    if g.initial not in win:
        raise ValueError("initial vertex is losing")
    names = {g.initial: "u0"}
    todo = deque([g.initial])
    trans, final = [], {}

    def strip(w):
        return tuple(x for x in w if x != END)

    while todo:
        v = todo.popleft()
        for lab, w in g.edges[v]:
            if w == v:
                continue
            (a,) = lab
            out, nxt = _follow(g, strategy, w)
            if a == END:
                _, p, _, _ = nxt
                final[names[v]] = strip(out + closing_word(t, p))
                continue
            if nxt not in names:
                names[nxt] = "u%d" % len(names)
                todo.append(nxt)
            trans.append((names[v], (a,), strip(out), names[nxt]))
    return Transducer(t.alphabet, set(names.values()), {"u0"}, final, trans, name)


def domain_words(t, max_len):
    dom = domain_dfa(t)
    for u in fa.words_upto(t.alphabet, max_len):
        if dom.accepts(u + (END,)):
            yield u


def check_uniformizer(t, u, max_len):
    """Simulation check: u is sequential and (w, u(w)) is accepted for every w in dom."""
    if not is_sequential(u):
        return False
    dom = domain_dfa(t)
    for w in fa.words_upto(t.alphabet, max_len):
        out = sequential_output(u, w)
        in_dom = dom.accepts(w + (END,))
        if in_dom != (out is not None):
            return False
        if in_dom and not accepts(t, w, out):
            return False
    return True


def drat_uniformize(t, K, check_len=6):
    """A sequential uniformizer found by the game at bound K, or None.

    A returned transducer is always correct.  None only means that no
    strategy exists with lookahead sequences of length at most 2K+1; it is a
    definitive answer once K reaches the saturation bound ``ramsey_K``.
    """
    dg = build_drat_game(t, K)
    win, strategy = solve_safety(dg.game)
    if dg.game.initial not in win:
        return None
    u = extract_drat_uniformizer(dg, win, strategy)
    if not check_uniformizer(t, u, check_len):
        raise RuntimeError("synthesized uniformizer failed its self-check")
    return u


def delay_bound(t, K):
    """(2K+1) M with M the longest output annotation in the reachable game."""
    return (2 * K + 1) * build_drat_game(t, K).max_annotation


def pending_output(t, u, out_prefix, full_output):
    """Output letters T still has to read to consume input u, beyond out_prefix.

    Runs T on the full pair and records how many output letters had been
    read when the last letter of u was read.
    """
    u = tuple(u)
    q, i, j = t.initial, 0, 0
    v = tuple(full_output) + (END,)
    need = 0 if not u else None
    while need is None:
        if q in t.istates:
            q = t.delta[q, u[i]]
            i += 1
            if i == len(u):
                need = j
        else:
            if j == len(v):
                return None
            q = t.delta[q, v[j]]
            j += 1
    return max(0, need - len(out_prefix))


def game_invariant_holds(t, K, max_len):
    """Replays the winning strategy on every input up to max_len.

    At each Input vertex (p, rho, d) reached after input u and output v it
    checks that d is the domain state of u and that u = x w with
    delta_star(q0, x, v) = (p, eps, eps) and w consistent with rho.
    """
    dg = build_drat_game(t, K)
    g, te = dg.game, dg.transducer
    win, strategy = solve_safety(g)
    if g.initial not in win:
        return True
    for w in fa.words_upto(t.alphabet, max_len):
        v, out = g.initial, ()
        for k, a in enumerate(w + (END,)):
            nxt = [x for lab, x in g.edges[v] if lab == (a,)]
            if not nxt:
                break
            ann, v = _follow(g, strategy, nxt[0])
            out += ann
            if v[0] != "I":
                return False
            _, p, rho, d = v
            u = (w + (END,))[: k + 1]
            if dg.dom.run(u) != d:
                return False
            ok = False
            for cut in range(len(u) + 1):
                x, rest = u[:cut], u[cut:]
                if delta_star(te, te.initial, x, out) == (p, (), ()) and is_consistent(te, rho, rest):
                    ok = True
                    break
            if not ok:
                return False
            if d in dg.dom.final:
                break
    return True
