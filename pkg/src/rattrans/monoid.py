"""Transition monoids of real-time transducers and the pumping functions."""

from collections import deque
from dataclasses import dataclass
from math import factorial

from .automata import ssorted
from .config import LIMITS, CapExceeded
from .transducer import is_real_time
from .words import delay


def _require_real_time(t):
    if not is_real_time(t):
        raise ValueError("transition monoids need a real-time transducer")


def identity(t):
    return frozenset((q, q) for q in t.states)


def letter_relation(t, a):
    return frozenset((p, q) for p, x, _, q in t.transitions if x == (a,))


def monoid_mul(m1, m2):
    after = {}
    for q, r in m2:
        after.setdefault(q, []).append(r)
    return frozenset((p, r) for p, q in m1 for r in after.get(q, ()))


def sigma(t, w):
    """Pairs (p, q) such that some run reads w from p to q."""
    _require_real_time(t)
    m = identity(t)
    for a in w:
        m = monoid_mul(m, letter_relation(t, a))
    return m


def is_idempotent(m):
    return monoid_mul(m, m) == m


def generate_monoid(t, cap=None):
    """Every element of the monoid mapped to a shortest word reaching it."""
    _require_real_time(t)
    cap = LIMITS.monoid_cap if cap is None else cap
    gens = [(a, letter_relation(t, a)) for a in t.alphabet]
    start = identity(t)
    found = {start: ()}
    todo = deque([start])
    while todo:
        m = todo.popleft()
        for a, g in gens:
            r = monoid_mul(m, g)
            if r not in found:
                found[r] = found[m] + (a,)
                if len(found) > cap:
                    raise CapExceeded("monoid has more than %d elements" % cap)
                todo.append(r)
    return found


def idempotents(t, cap=None):
    return [m for m in generate_monoid(t, cap) if is_idempotent(m)]


def is_s_form(m):
    return any(p != q and (p, p) in m and (q, q) in m for p, q in m)


def z_form_witness(m, q1, q2):
    """Some q with (q1, q), (q, q), (q, q2) in m, or None."""
    if not is_idempotent(m) or (q1, q2) not in m:
        raise ValueError("z_form_witness needs an idempotent containing (q1, q2)")
    for q in ssorted({r for _, r in m}):
        if (q1, q) in m and (q, q) in m and (q, q2) in m:
            return q
    return None


def find_idempotent_triple(t, blocks):
    """First (i1, i2, i3, i4), 1-based, with three equal idempotent block products."""
    blocks = [tuple(b) for b in blocks]
    n = len(blocks)
    # sig[i][j] = sigma of blocks i..j-1 (0-based, half open)
    sig = {}
    for i in range(n):
        m = identity(t)
        for j in range(i, n):
            m = monoid_mul(m, sigma(t, blocks[j]))
            sig[i, j + 1] = m
    for i1 in range(n):
        for i2 in range(i1 + 1, n):
            e = sig[i1, i2]
            if not is_idempotent(e):
                continue
            for i3 in range(i2 + 1, n):
                if sig[i2, i3] != e:
                    continue
                for i4 in range(i3 + 1, n + 1):
                    if sig[i3, i4] == e:
                        return i1 + 1, i2 + 1, i3 + 1, i4 + 1
    return None


@dataclass(frozen=True)
class PumpDecomposition:
    word: tuple
    quadruples: tuple
    pieces: tuple
    cut: int

    @property
    def n(self):
        return len(self.quadruples)

    def y(self, i):
        return self.quadruples[i - 1][2]

    def z(self, i):
        return self.quadruples[i - 1][3]


def decompose_for_pumping(t, v):
    """All factorizations v = wxyz with x, y non-empty and sigma(x) = sigma(y) idempotent.

    Quadruples are ordered by |wx|, then |y|, then |x|.  Piece i is the
    factor of v between consecutive positions |w x|; the cut index is the
    first quadruple whose z is empty (n + 1 when there is none).  Indices
    of pieces and quadruples are 1-based, as in ``y(i)``.
    """
    _require_real_time(t)
    v = tuple(v)
    size = len(v)
    sig = {}
    for i in range(size):
        m = identity(t)
        for j in range(i, size):
            m = monoid_mul(m, letter_relation(t, v[j]))
            sig[i, j + 1] = m
    quads = []
    for i in range(size):
        for j in range(i + 1, size):
            e = sig[i, j]
            if not is_idempotent(e):
                continue
            for k in range(j + 1, size + 1):
                if sig[j, k] == e:
                    quads.append((v[:i], v[i:j], v[j:k], v[k:]))
    quads.sort(key=lambda q: (len(q[0]) + len(q[1]), len(q[2]), len(q[1])))
    cuts = [len(w) + len(x) for w, x, _, _ in quads]
    bounds = [0] + cuts + [size]
    pieces = tuple(v[bounds[i]:bounds[i + 1]] for i in range(len(quads) + 1))
    cut = next((d + 1 for d, q in enumerate(quads) if not q[3]), len(quads) + 1)
    return PumpDecomposition(v, tuple(quads), pieces, cut)


def phi(t, v, k):
    """v_1 y_1^(12k) ... v_n y_n^(12k) v_(n+1)."""
    dec = decompose_for_pumping(t, v)
    out = ()
    for i in range(1, dec.n + 1):
        out += dec.pieces[i - 1] + dec.y(i) * (12 * k)
    return out + dec.pieces[dec.n]


def phi_prime(t, v, k):
    """y_l^(12k-1) v_(l+1) y_(l+1)^(12k) ... v_(n+1), empty when l = n + 1."""
    if k < 1:
        raise ValueError("phi_prime needs k >= 1")
    dec = decompose_for_pumping(t, v)
    l = dec.cut
    if l == dec.n + 1:
        return ()
    out = dec.y(l) * (12 * k - 1)
    for i in range(l + 1, dec.n + 1):
        out += dec.pieces[i - 1] + dec.y(i) * (12 * k)
    return out + dec.pieces[dec.n]


def rho_pump(t, v, k):
    out = ()
    for j in range(1, len(v) + 1):
        out += (v[j - 1],) + phi_prime(t, v[:j], k)
    return out


def _runs(t, v, end, limit=2):
    """Up to ``limit`` output sequences of runs from an initial state to ``end``."""
    _require_real_time(t)
    v = tuple(v)
    found = []

    def go(q, i, outs):
        if len(found) >= limit:
            return
        if i == len(v):
            if q == end:
                found.append(outs)
            return
        for x, y, r in t.successors[q]:
            if x == (v[i],):
                go(r, i + 1, outs + (y,))

    for q in ssorted(t.initial):
        go(q, 0, ())
    return found


def _unique_run(t, v, end):
    runs = _runs(t, v, end)
    if not runs:
        raise ValueError("no run")
    if len(runs) > 1:
        raise ValueError("run not unique")
    return runs[0]


def run_delay(t, v, p, q):
    """Delay between the outputs of the unique runs on v ending in p and in q."""
    a, b = _unique_run(t, v, p), _unique_run(t, v, q)
    return delay(sum(a, ()), sum(b, ()))


def run_lag(t, v, p, q):
    """Largest delay length over all prefixes of the two runs."""
    a, b = _unique_run(t, v, p), _unique_run(t, v, q)
    best = 0
    for j in range(len(a) + 1):
        best = max(best, len(delay(sum(a[:j], ()), sum(b[:j], ()))))
    return best


def ramsey4_bound(c):
    """(3c)! / (3!)^c, a coarse bound for monochromatic 4-cliques with c colors."""
    if c == 1:
        return 4
    return factorial(3 * c) // factorial(3) ** c


def nt_bound(t, cap=None):
    """2 |Q| * 2 C m with C the 4-clique Ramsey bound over the monoid size."""
    try:
        c = len(generate_monoid(t, cap))
    except CapExceeded as e:
        raise CapExceeded("bound not computable at configured cap") from e
    m = max(t.max_output, 1)
    return 2 * len(t.states) * 2 * ramsey4_bound(c) * m
