import random
from itertools import product

import pytest

from rattrans import automata as fa
from rattrans.config import CapExceeded
from rattrans.monoid import (
    decompose_for_pumping,
    find_idempotent_triple,
    generate_monoid,
    identity,
    idempotents,
    is_idempotent,
    is_s_form,
    monoid_mul,
    nt_bound,
    phi,
    phi_prime,
    rho_pump,
    run_delay,
    run_lag,
    sigma,
    z_form_witness,
)
from rattrans.transducer import Transducer
from rattrans.words import positive

from conftest import union_of_unambiguous


def is_subword(small, big):
    it = iter(big)
    return all(x in it for x in small)


def two_counters():
    """Unambiguous: state p doubles its input, state q erases it."""
    return Transducer(
        ("a",), {"p", "q"}, {"p", "q"}, {"p": (), "q": ()},
        [("p", ("a",), ("a", "a"), "p"), ("q", ("a",), (), "q")],
    )


def identity_transducer():
    return Transducer(("a",), {"s"}, {"s"}, {"s": ()}, [("s", ("a",), ("a",), "s")])


def test_sigma_examples(t1):
    assert sigma(t1, ()) == identity(t1)
    assert sigma(t1, "a") == {("p", "p"), ("p", "q"), ("q", "q")}


def test_sigma_is_a_morphism(t1):
    for u, v in product(fa.words_upto(("a", "b"), 2), repeat=2):
        t = Transducer(("a", "b"), t1.states, t1.initial, t1.final,
                       list(t1.transitions) + [("q", ("b",), (), "p")])
        assert sigma(t, u + v) == monoid_mul(sigma(t, u), sigma(t, v))


def test_sigma_needs_real_time():
    t = Transducer(("a",), {"s"}, {"s"}, {"s": ()}, [("s", (), ("a",), "s")])
    with pytest.raises(ValueError):
        sigma(t, "a")


def test_s_form_examples(t1):
    assert not is_s_form(identity(t1))
    assert is_s_form(frozenset({(1, 1), (1, 2), (2, 2)}))
    assert is_s_form(sigma(t1, "a"))


def test_z_form_witness():
    m = frozenset({(1, 1), (1, 2), (2, 2)})
    assert z_form_witness(m, 1, 2) in (1, 2)
    with pytest.raises(ValueError):
        z_form_witness(m, 2, 1)


def test_union_of_unambiguous_structure():
    rng = random.Random(41)
    for _ in range(20):
        t = union_of_unambiguous(rng)
        for m in generate_monoid(t):
            assert not is_s_form(m)
        for m in idempotents(t):
            for q1, q2 in m:
                assert z_form_witness(m, q1, q2) is not None
            for (q1, q2), (a, b), (c, q3) in product(m, m, m):
                if a == q2 and c == b:
                    assert q2 == b


def test_find_idempotent_triple():
    t = identity_transducer()
    assert find_idempotent_triple(t, ["a", "a", "a"]) == (1, 2, 3, 4)
    assert find_idempotent_triple(t, ["a"]) is None
    rng = random.Random(42)
    for _ in range(30):
        t = union_of_unambiguous(rng)
        blocks = [tuple(rng.choice("ab") for _ in range(rng.randint(1, 2))) for _ in range(6)]
        found = find_idempotent_triple(t, blocks)
        if found:
            i1, i2, i3, i4 = found
            cat = lambda i, j: sum((blocks[x - 1] for x in range(i, j)), ())
            e = sigma(t, cat(i1, i2))
            assert is_idempotent(e) and sigma(t, cat(i2, i3)) == e == sigma(t, cat(i3, i4))


def test_decomposition_self_check():
    rng = random.Random(43)
    for _ in range(30):
        t = union_of_unambiguous(rng)
        v = tuple(rng.choice("ab") for _ in range(rng.randint(0, 6)))
        dec = decompose_for_pumping(t, v)
        assert sum(dec.pieces, ()) == v
        keys = []
        for w, x, y, z in dec.quadruples:
            assert w + x + y + z == v and x and y
            e = sigma(t, x)
            assert e == sigma(t, y) and is_idempotent(e)
            keys.append((len(w + x), len(y), len(x)))
        assert keys == sorted(keys)


def test_no_idempotent_factor_pair():
    t2 = Transducer(("a", "b"), {"s", "t"}, {"s"}, {"t": ()}, [("s", ("a",), (), "t"), ("t", ("b",), (), "s")])
    assert decompose_for_pumping(t2, "ab").n == 0
    assert phi(t2, "ab", 1) == tuple("ab")
    assert rho_pump(t2, "ab", 1) == tuple("ab")


def test_prefix_coherence():
    rng = random.Random(44)
    for _ in range(40):
        t = union_of_unambiguous(rng)
        v = tuple(rng.choice("ab") for _ in range(rng.randint(1, 5)))
        a = rng.choice("ab")
        d1, d2 = decompose_for_pumping(t, v), decompose_for_pumping(t, v + (a,))
        l = d2.cut
        for i in range(1, min(l, d1.n + 1)):
            assert d1.y(i) == d2.y(i)
            assert d1.pieces[i - 1] == d2.pieces[i - 1]


def test_pumping_preserves_sigma():
    rng = random.Random(45)
    for _ in range(60):
        t = union_of_unambiguous(rng)
        v = tuple(rng.choice("ab") for _ in range(rng.randint(0, 5)))
        s = sigma(t, v)
        assert sigma(t, phi(t, v, 1)) == s
        assert sigma(t, rho_pump(t, v, 1)) == s
        assert is_subword(v, phi(t, v, 1)) and is_subword(v, rho_pump(t, v, 1))
        dec = decompose_for_pumping(t, v)
        if dec.cut <= dec.n:
            assert sigma(t, phi_prime(t, v, 1)) == sigma(t, dec.y(dec.cut))
        else:
            assert phi_prime(t, v, 1) == ()


def test_phi_prime_needs_positive_k(t1):
    with pytest.raises(ValueError):
        phi_prime(t1, "a", 0)


def test_run_delay_and_lag():
    t = two_counters()
    assert run_delay(t, "aa", "p", "p") == ()
    assert run_lag(t, "aa", "p", "p") == 0
    for n in range(5):
        v = ("a",) * n
        assert run_delay(t, v, "q", "p") == positive(("a",) * (2 * n))
        assert run_lag(t, v, "p", "q") == 2 * n


def test_run_errors(t1):
    with pytest.raises(ValueError, match="run not unique"):
        run_delay(t1, "aaa", "q", "q")
    with pytest.raises(ValueError, match="no run"):
        run_delay(t1, "", "q", "q")


def test_nt_bound():
    assert nt_bound(identity_transducer()) == 16
    t = two_counters()
    base = nt_bound(t)
    assert base >= 2 * len(t.states)
    longer = Transducer(t.alphabet, t.states, t.initial, t.final,
                        [("p", ("a",), ("a",) * 4, "p"), ("q", ("a",), (), "q")])
    assert nt_bound(longer) == 2 * base


def test_monoid_cap(t1):
    with pytest.raises(CapExceeded):
        generate_monoid(t1, cap=1)
    with pytest.raises(CapExceeded):
        nt_bound(t1, cap=1)
