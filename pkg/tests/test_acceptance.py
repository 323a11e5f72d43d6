"""The ten acceptance criteria, each with its runtime budget.

Every test records one PASS/FAIL line, printed at the end of the run.
"""

import random
import time
from contextlib import contextmanager

import pytest

from rattrans import automata as fa
from rattrans import drat, monoid
from rattrans.formats import load_builtin
from rattrans.games import seq_s_uniformizable, solve_safety, verify_uniformizer
from rattrans.resync import (
    build_dk,
    identity_resync,
    image_of_word,
    inclusion_bound_k,
    k_equivalent,
    min_lag,
    pair_counterexample,
)
from rattrans.transducer import Transducer, enumerate_outputs, relation_equal_bounded, sequential_output
from rattrans.words import IN, OUT, delay, equivalent, lag, project

from conftest import ACCEPTANCE, random_det, random_transducer, union_of_unambiguous
from test_delay_lemmas import rand_word, stable_instance
from test_games import brute_winning_region, random_game
from test_words import lag_by_recursion, random_equivalent_pair


@contextmanager
def criterion(n, title, budget):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < budget, "took %.1fs, budget %ds" % (elapsed, budget)
    except BaseException as e:
        elapsed = time.perf_counter() - start
        line = "criterion %2d FAIL %-28s %6.2fs  %s" % (n, title, elapsed, str(e).splitlines()[0] if str(e) else type(e).__name__)
        ACCEPTANCE[n] = line
        print(line)
        raise
    line = "criterion %2d PASS %-28s %6.2fs" % (n, title, elapsed)
    ACCEPTANCE[n] = line
    print(line)


def test_c01_fig1_equivalence():
    with criterion(1, "fig1 equivalence", 10):
        t1, t2 = load_builtin("fig1_t1"), load_builtin("fig1_t2")
        assert relation_equal_bounded(t1, t2, 8)
        for k in range(5):
            assert not k_equivalent(t1, t2, k)
            u = ("a",) * (2 * k + 2)
            w = pair_counterexample(t1, t2, build_dk(("a",), k), u, u)
            assert w is not None, "no counterexample at k=%d" % k
            assert min_lag(t2, w) == 2 * k + 2


@pytest.mark.xfail(
    strict=True,
    reason="U accepts B with output eps, but B alone has no run in the figure's T",
)
def test_c02_fig1_uniformization():
    with criterion(2, "fig1 uniformization", 30):
        t, u = load_builtin("fig1_t"), load_builtin("fig1_u")
        for k in range(3):
            assert seq_s_uniformizable(t, build_dk(t.alphabet, k)) is None
        for n in range(7):
            for alpha in "AB":
                x = ("a",) * n + (alpha,)
                out = sequential_output(u, x)
                assert out == ("a",) * n, x
                assert out in enumerate_outputs(t, x, 2 * n + 2), "U(%s) not in R_T" % "".join(x)


def test_c02_fig1_uniformization_where_defined():
    # the part of criterion 2 that the figure supports: every n >= 1, and n = 0 with A
    t, u = load_builtin("fig1_t"), load_builtin("fig1_u")
    for n in range(7):
        for alpha in "AB":
            if (n, alpha) == (0, "B"):
                assert () not in enumerate_outputs(t, (alpha,), 4)
                continue
            x = ("a",) * n + (alpha,)
            assert sequential_output(u, x) == ("a",) * n
            assert ("a",) * n in enumerate_outputs(t, x, 2 * n + 2)


def random_interleaving(rng, w):
    ins, outs = list(project(w, IN)), list(project(w, OUT))
    colors = [IN] * len(ins) + [OUT] * len(outs)
    rng.shuffle(colors)
    return tuple((ins.pop(0), IN) if c == IN else (outs.pop(0), OUT) for c in colors)


def test_c03_dk_correctness():
    with criterion(3, "D_k correctness", 20):
        c = build_dk(("a",), 1, catch_up=False).carrier
        assert len(c.states) == 3
        non_copy = [tr for tr in c.transitions if not (tr[1] == tr[2] and tr[1][0][1] == IN)]
        assert len(non_copy) == 9
        rng = random.Random(71)
        letters = [(x, col) for x in "ab" for col in (IN, OUT)]
        dk = {k: build_dk(("a", "b"), k) for k in range(3)}
        images = {}
        for _ in range(200):
            w = tuple(rng.choice(letters) for _ in range(rng.randint(0, 6)))
            if rng.random() < 0.85:
                w2 = random_interleaving(rng, w)
            else:
                w2 = tuple(rng.choice(letters) for _ in range(rng.randint(0, 6)))
            for k in range(3):
                if (k, w) not in images:
                    images[k, w] = fa.determinize(image_of_word(dk[k], w))
                assert images[k, w].accepts(w2) == (equivalent(w, w2) and lag(w, w2) <= k)


def prefix_output(u, x):
    (q,) = u.initial
    step = {(p, a[0]): (y, r) for p, a, y, r in u.transitions}
    out = ()
    for a in x:
        y, q = step[q, a]
        out += y
    return out


def test_c04_drat_synthesis():
    with criterion(4, "DRat synthesis", 60):
        t = load_builtin("fig2_r1")
        u = drat.drat_uniformize(t, 1)
        assert u is not None
        bound = drat.delay_bound(t, 1)
        assert bound == 3 * drat.build_drat_game(t, 1).max_annotation
        for x in drat.domain_words(t, 6):
            full = sequential_output(u, x)
            assert drat.accepts(t, x, full)
            for j in range(len(x) + 1):
                pending = drat.pending_output(t, x[:j], prefix_output(u, x[:j]), full)
                assert pending is not None and pending <= bound


def random_sequence(rng, t, max_len=4):
    n = rng.randint(0, max_len)
    seq = []
    for i in range(n):
        while True:
            tau = tuple(rng.choice(sorted(t.states) + [None]) for _ in t.in_order)
            if drat.is_maximal(t, tau) or i == n - 1:
                break
        seq.append(tau)
    return tuple(seq)


def test_c05_profile_algebra():
    with criterion(5, "profile algebra", 30):
        rng = random.Random(72)
        for _ in range(100):
            t = random_det(rng, max_states=4)
            a, b = random_sequence(rng, t, 2), random_sequence(rng, t, 2)
            ab = drat.compose(t, a, b)
            assert drat.profile(t, ab) == drat.profile_mul(drat.profile(t, a), drat.profile(t, b))
            for prof in (drat.profile(t, a), drat.profile(t, ab)):
                assert drat.profile_properties_hold(prof)
            rho = random_sequence(rng, t, 4)
            if rho:
                full = drat.profile(t, rho)
                red = drat.profile(t, (drat.reduce_seq(t, rho),))
                assert {x for x in full if x[1] == drat.EPS} == {x for x in red if x[1] == drat.EPS}
                assert {(p, q) for p, tag, q in red if tag == drat.PLUS} <= {(p, q) for p, _, q in full}


def test_c06_lin_lout_soundness():
    with criterion(6, "Lin-Lout soundness", 30):
        rng = random.Random(73)
        checked = 0
        while checked < 100:
            t = random_det(rng, max_states=4)
            u = tuple(rng.choice(t.letters) for _ in range(rng.randint(0, 4)))
            rho = drat.rho_of_word(t, u)
            if rho and rng.random() < 0.5:
                i = rng.randrange(len(rho))
                rho = rho[:i] + (tuple(None if x in t.ostates else x for x in rho[i]),) + rho[i + 1:]
            assert drat.is_consistent(t, rho, u)
            p = rng.choice(t.state_order)
            q = rng.choice(t.state_order)
            words = sorted(fa.language_upto(drat.lout_automaton(t, p, rho, q), 4))
            if not words:
                continue
            v = rng.choice(words)
            assert drat.delta_star(t, p, u, v) == (q, (), ())
            checked += 1


def test_c07_monoid_invariants():
    with criterion(7, "monoid and pumping", 60):
        rng = random.Random(74)
        samples = [union_of_unambiguous(rng) for _ in range(10)]
        for t in samples:
            for m in monoid.generate_monoid(t):
                assert not monoid.is_s_form(m)
                if monoid.is_idempotent(m):
                    for q1, q2 in m:
                        assert monoid.z_form_witness(m, q1, q2) is not None
        for i in range(100):
            t = samples[i % len(samples)]
            v = tuple(rng.choice(t.alphabet) for _ in range(rng.randint(0, 6)))
            s = monoid.sigma(t, v)
            assert monoid.sigma(t, monoid.phi(t, v, 1)) == s
            assert monoid.sigma(t, monoid.rho_pump(t, v, 1)) == s


def test_c08_delay_lemmas():
    with criterion(8, "delay lemmas", 30):
        rng = random.Random(75)
        for _ in range(500):
            u1, u2, u3, v1, v2, v3 = (rand_word(rng) for _ in range(6))
            assert len(delay(u1 + u2 + u3, v1 + v2 + v3)) <= len(delay(u1 + u2, v1 + v2)) + len(u3) + len(v3)
        done = 0
        while done < 500:
            v1, w1, v2, w2 = (rand_word(rng, hi=3) for _ in range(4))
            if delay(v1, w1) == delay(v1 + v2, w1 + w2):
                continue
            ds = [delay(v1 + v2 * i, w1 + w2 * i) for i in range(6)]
            assert len(set(ds)) == 6
            done += 1
        done = 0
        while done < 500:
            x1, x2, x3, y1, y2, y3 = stable_instance(rng) if done % 2 else (rand_word(rng, hi=3) for _ in range(6))
            n = rng.randint(1, 3)
            if len(delay(x1, y1)) > n or len(delay(x1 + x2 * (3 * n), y1 + y2 * (3 * n))) > n:
                continue
            assert delay(x1 + x2 * (3 * n) + x3, y1 + y2 * (3 * n) + y3) == delay(x1 + x3, y1 + y3)
            done += 1
        for _ in range(500):
            w1, w2 = random_equivalent_pair(rng)
            assert lag(w1, w2) == lag_by_recursion(w1, w2)


def test_c09_game_solver_oracle():
    with criterion(9, "game solver oracle", 30):
        rng = random.Random(76)
        for _ in range(50):
            g = random_game(rng, 20)
            win, _ = solve_safety(g)
            assert win == brute_winning_region(g)
        synthesized = 0
        for _ in range(30):
            t = random_transducer(rng, n_states=2, n_trans=4, max_out=1)
            for s in (identity_resync(t.alphabet), build_dk(t.alphabet, 1)):
                u = seq_s_uniformizable(t, s)
                if u is not None:
                    synthesized += 1
                    assert verify_uniformizer(u, t, s)
        assert synthesized > 0


def test_c10_bound_formulas():
    with criterion(10, "bound formulas", 1):
        one = Transducer(("a",), {"s"}, {"s"}, {"s": ()}, [("s", ("a",), ("a",), "s")])
        assert inclusion_bound_k(one, one, 1) == 12
        assert monoid.nt_bound(one) == 16
        assert monoid.ramsey4_bound(2) == 720 // 36
        assert drat.ramsey3_bound(1) == 3
