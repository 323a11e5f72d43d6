import random

import pytest

from rattrans.drat import DetTransducer
from rattrans.formats import FormatError, load_builtin, parse, to_text
from rattrans.resync import build_dk
from rattrans.transducer import Transducer

from conftest import random_det, random_transducer

BUILTINS = ["fig1_t1", "fig1_t2", "fig1_t", "fig1_u", "fig2_r1", "echo_last"]


def test_fig1_t1_file(t1):
    assert isinstance(t1, Transducer)
    assert t1.states == {"p", "q"}
    assert t1.initial == {"p"}
    assert dict(t1.final) == {"q": ()}
    assert t1.transitions == {
        ("p", ("a",), ("a", "a"), "p"),
        ("p", ("a",), (), "q"),
        ("q", ("a",), (), "q"),
    }


@pytest.mark.parametrize("name", BUILTINS)
def test_round_trip_shipped(name):
    x = load_builtin(name)
    text = to_text(x)
    assert parse(text) == x
    assert to_text(parse(text)) == text


def test_round_trip_random():
    rng = random.Random(61)
    for _ in range(30):
        t = random_transducer(rng, real_time=rng.random() < 0.5)
        assert parse(to_text(t)) == t
        d = random_det(rng)
        assert parse(to_text(d)) == d


def test_round_trip_resynchronizer():
    c = build_dk(("a", "b"), 1).carrier
    back = parse(to_text(c))
    assert back.transitions == c.transitions and back.alphabet == c.alphabet


def test_undeclared_state_reports_line():
    text = "transducer T\nalphabet a\nstates p\ninitial p\ntrans p a a r\n"
    with pytest.raises(FormatError) as err:
        parse(text)
    assert err.value.lineno == 5


@pytest.mark.parametrize(
    "text,line",
    [
        ("transducer T\nalphabet a,⊣\n", 2),
        ("transducer T\nstates p\n", 2),
        ("transducer T\nalphabet a\nstates p\ntrans p b eps p\n", 4),
        ("drat R\nalphabet a\nistate p\ninitial p\ndelta p a p\ndelta p a p\n", 6),
        ("drat R\nalphabet a\nistate p\ninitial p\nfinal p a\n", 5),
        ("hello\n", 1),
    ],
)
def test_errors(text, line):
    with pytest.raises(FormatError) as err:
        parse(text)
    assert err.value.lineno == line


def test_incomplete_drat_is_rejected():
    with pytest.raises(FormatError):
        parse("drat R\nalphabet a\nistate p\ninitial p\ndelta p a p\n")


def test_drat_end_keyword():
    r = load_builtin("fig2_r1")
    assert isinstance(r, DetTransducer)
    assert r.delta["D", "⊣"] == "E"
