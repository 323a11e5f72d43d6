import random

import pytest

from rattrans.formats import load_builtin
from rattrans.transducer import Transducer


@pytest.fixture
def t1():
    return load_builtin("fig1_t1")


@pytest.fixture
def t2():
    return load_builtin("fig1_t2")


def random_transducer(rng, alphabet=("a", "b"), n_states=3, n_trans=5, max_out=2, real_time=True, name="R"):
    states = ["q%d" % i for i in range(n_states)]
    trans = set()
    for _ in range(n_trans):
        p, q = rng.choice(states), rng.choice(states)
        x = (rng.choice(alphabet),) if real_time else tuple(rng.choice(alphabet) for _ in range(rng.randint(0, 2)))
        y = tuple(rng.choice(alphabet) for _ in range(rng.randint(0, max_out)))
        trans.add((p, x, y, q))
    final = {q: tuple(rng.choice(alphabet) for _ in range(rng.randint(0, 1))) for q in rng.sample(states, rng.randint(1, 2))}
    return Transducer(alphabet, states, {states[0]}, final, trans, name)


@pytest.fixture
def rng():
    return random.Random(20240611)


def random_det(rng, alphabet=("a", "b"), max_states=4):
    from rattrans.drat import DetTransducer
    from rattrans.words import END

    n = rng.randint(2, max_states)
    states = ["s%d" % i for i in range(n)]
    k = rng.randint(1, n - 1)
    istates, ostates = states[:k], states[k:]
    delta = {(q, a): rng.choice(states) for q in states for a in alphabet + (END,)}
    final = set(rng.sample(states, rng.randint(1, 2)))
    return DetTransducer(alphabet, istates, ostates, rng.choice(states), final, delta, "R")


def random_unambiguous(rng, alphabet=("a", "b"), tries=200, name="U"):
    """A trim real-time transducer whose input automaton is unambiguous."""
    from rattrans import automata as fa
    from rattrans.transducer import domain_automaton, trim

    for _ in range(tries):
        t = trim(random_transducer(rng, alphabet, n_states=3, n_trans=rng.randint(3, 6), name=name))
        if t.states and fa.is_unambiguous(fa.letterize(domain_automaton(t))):
            return t
    raise RuntimeError("no unambiguous sample found")


def union_of_unambiguous(rng, parts=2):
    from rattrans.transducer import union

    t = random_unambiguous(rng)
    for _ in range(parts - 1):
        t = union(t, random_unambiguous(rng))
    return t


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
