"""Command-line front end.

Exit status: 0 when a verdict was computed (whatever it is), 1 on usage or
input errors, 2 when a configured size limit was exceeded.
"""

import argparse
import json
import sys
import time

from . import automata as fa
from . import drat, monoid, resync
from .config import LIMITS, CapExceeded
from .dot import nfa_to_dot, transducer_to_dot
from .formats import FormatError, load, to_text, word_from_text, word_to_text
from .games import seq_s_uniformizable
from .transducer import (
    Transducer,
    default_out_bound,
    enumerate_outputs,
    is_real_time,
    is_sequential,
    underlying_automaton,
)
from .words import (
    IN,
    INF,
    WordError,
    format_free_word,
    format_sync_word,
    free_mul,
    invert,
    lag,
    parse_free_word,
    parse_sync_word,
)

NO_UP_TO_CAVEAT = (
    "no strategy exists with lookahead bound K; this is definitive only when "
    "K is at least the saturation bound"
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load_transducer(path):
    x = load(path)
    if not isinstance(x, Transducer):
        raise UsageError("%s: expected a transducer file" % path)
    return x


def _load_drat(path):
    x = load(path)
    if not isinstance(x, drat.DetTransducer):
        raise UsageError("%s: expected a drat file" % path)
    return x


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _need_k(args):
    if args.k is None:
        raise UsageError("--k is required")
    if args.k < 0:
        raise UsageError("--k must be non-negative")
    return args.k


def cmd_del(args):
    u, v = parse_free_word(args.u), parse_free_word(args.v)
    d = free_mul(invert(u), v)
    return {"verdict": "true", "delay": format_free_word(d), "length": len(d)}


def cmd_lag(args):
    w1, w2 = parse_sync_word(args.w1), parse_sync_word(args.w2)
    value = lag(w1, w2)
    return {"verdict": "true", "lag": "inf" if value == INF else value}


def cmd_dk_build(args):
    k = _need_k(args)
    alphabet = tuple(x for x in args.alphabet.split(",") if x)
    if not alphabet:
        raise UsageError("--alphabet needs at least one letter")
    s = resync.build_dk(alphabet, k, catch_up=not args.literal)
    c = s.carrier
    if args.dot:
        _write(args.dot, transducer_to_dot(c, "D%d" % k))
    if args.out:
        _write(args.out, to_text(s))
    return {
        "verdict": "true",
        "states": len(c.states),
        "transitions": len(c.transitions),
        "non_copy_transitions": sum(1 for _, x, y, _ in c.transitions if not (x == y and x and x[0][1] == IN)),
    }


def _inclusion(t1, t2, k):
    w = resync.k_inclusion_counterexample(t1, t2, k)
    return None if w is None else format_sync_word(w)


def cmd_include(args):
    k = _need_k(args)
    t1, t2 = _load_transducer(args.t1), _load_transducer(args.t2)
    w = _inclusion(t1, t2, k)
    rep = {"verdict": "true" if w is None else "false", "k": k}
    if w is not None:
        rep["witness"] = w
    return rep


def cmd_equiv(args):
    k = _need_k(args)
    t1, t2 = _load_transducer(args.t1), _load_transducer(args.t2)
    rep = {"k": k}
    for direction, a, b in (("left-in-right", t1, t2), ("right-in-left", t2, t1)):
        w = _inclusion(a, b, k)
        if w is not None:
            rep.update(verdict="false", witness=w, direction=direction)
            return rep
    rep["verdict"] = "true"
    return rep


def cmd_uniformize(args):
    t = _load_transducer(args.t)
    if args.k is None:
        s = resync.identity_resync(t.alphabet)
    else:
        s = resync.build_dk(t.alphabet, _need_k(args))
    u = seq_s_uniformizable(t, s)
    rep = {"resynchronizer": s.name}
    if u is None:
        rep["verdict"] = "false"
        return rep
    rep["verdict"] = "yes"
    rep["states"] = len(u.states)
    if args.out:
        _write(args.out, to_text(u))
        rep["uniformizer"] = args.out
    else:
        rep["uniformizer_text"] = to_text(u)
    if args.dot:
        _write(args.dot, transducer_to_dot(u, "U"))
    return rep


def cmd_drat_uniformize(args):
    if args.K is None or args.K < 0:
        raise UsageError("--K must be given and non-negative")
    t = _load_drat(args.t)
    u = drat.drat_uniformize(t, args.K, check_len=args.max_len)
    rep = {"K": args.K}
    if u is None:
        rep["verdict"] = "no-up-to-K"
        rep["caveat"] = NO_UP_TO_CAVEAT
        return rep
    rep["verdict"] = "yes"
    rep["states"] = len(u.states)
    rep["delay_bound"] = drat.delay_bound(t, args.K)
    if args.out:
        _write(args.out, to_text(u))
        rep["uniformizer"] = args.out
    else:
        rep["uniformizer_text"] = to_text(u)
    if args.dot:
        _write(args.dot, transducer_to_dot(u, "U"))
    return rep


def cmd_monoid(args):
    t = _load_transducer(args.t)
    if not is_real_time(t):
        raise UsageError("monoid needs a real-time transducer")
    elems = monoid.generate_monoid(t, args.cap)
    idem = [m for m in elems if monoid.is_idempotent(m)]
    rep = {
        "verdict": "true",
        "size": len(elems),
        "idempotents": sorted(word_to_text(elems[m]) for m in idem),
        "s_form": any(monoid.is_s_form(m) for m in elems),
        "nt_bound": str(monoid.nt_bound(t, args.cap)),
    }
    if args.word is not None:
        v = word_from_text(args.word, t.alphabet, 0)
        k = 1 if args.k is None else args.k
        rep["phi"] = word_to_text(monoid.phi(t, v, k))
        rep["rho"] = word_to_text(monoid.rho_pump(t, v, k))
    return rep


def cmd_check(args):
    x = load(args.t)
    if isinstance(x, drat.DetTransducer):
        return {
            "verdict": "true",
            "kind": "drat",
            "states": len(x.states),
            "profiles": len(drat.word_profiles(x, args.cap)),
            "ramsey_K_digits": len(str(drat.ramsey_K(x))),
        }
    a = underlying_automaton(x)
    rep = {
        "verdict": "true",
        "kind": "transducer",
        "states": len(x.states),
        "transitions": len(x.transitions),
        "real_time": is_real_time(x),
        "sequential": is_sequential(x),
        "unambiguous": fa.is_unambiguous(fa.letterize(a)),
        "empty": fa.is_empty(a),
    }
    if args.dot:
        _write(args.dot, nfa_to_dot(a, "sync"))
    return rep


def cmd_enumerate(args):
    x = load(args.t)
    n = args.max_len
    pairs = []
    if isinstance(x, drat.DetTransducer):
        for u in fa.words_upto(x.alphabet, n):
            for v in fa.words_upto(x.alphabet, n):
                if drat.accepts(x, u, v):
                    pairs.append([word_to_text(u), word_to_text(v)])
    else:
        bound = default_out_bound(x, x, n)
        for u in fa.words_upto(x.alphabet, n):
            for v in sorted(enumerate_outputs(x, u, bound), key=lambda w: (len(w), w)):
                pairs.append([word_to_text(u), word_to_text(v)])
    return {"verdict": "true", "count": len(pairs), "pairs": pairs}


def build_parser():
    p = _Parser(prog="rattrans", description="Decide and synthesize over rational transductions.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--cap", type=int, default=None, help="monoid and profile generation cap")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, *positional, **flags):
        sp = sub.add_parser(name)
        for arg in positional:
            sp.add_argument(arg)
        if flags.get("k"):
            sp.add_argument("--k", type=int, default=None)
        if flags.get("K"):
            sp.add_argument("--K", type=int, default=None)
        if flags.get("dot"):
            sp.add_argument("--dot", default=None, help="write a DOT graph to this path")
        if flags.get("out"):
            sp.add_argument("--out", default=None, help="write the result in text format")
        if flags.get("max_len"):
            sp.add_argument("--max-len", dest="max_len", type=int, default=flags["max_len"])
        sp.set_defaults(run=fn)
        return sp

    add("del", cmd_del, "u", "v")
    add("lag", cmd_lag, "w1", "w2")
    dk = add("dk-build", cmd_dk_build, k=True, dot=True, out=True)
    dk.add_argument("--alphabet", required=True)
    dk.add_argument("--literal", action="store_true", help="write ahead only from the empty delay")
    add("include", cmd_include, "t1", "t2", k=True)
    add("equiv", cmd_equiv, "t1", "t2", k=True)
    add("uniformize", cmd_uniformize, "t", k=True, dot=True, out=True)
    add("drat-uniformize", cmd_drat_uniformize, "t", K=True, dot=True, out=True, max_len=6)
    mo = add("monoid", cmd_monoid, "t", k=True)
    mo.add_argument("--word", default=None)
    add("check", cmd_check, "t", dot=True)
    add("enumerate", cmd_enumerate, "t", max_len=3)
    return p


def render(report, fmt):
    if fmt == "json":
        return json.dumps(report, sort_keys=True, ensure_ascii=False, indent=2)
    lines = []
    for key in sorted(report, key=lambda k: (k != "verdict", k)):
        val = report[key]
        if key == "pairs":
            lines.append("pairs:")
            lines += ["  %s -> %s" % tuple(pv) for pv in val]
        elif isinstance(val, str) and "\n" in val:
            lines.append("%s:" % key)
            lines += ["  " + row for row in val.rstrip("\n").split("\n")]
        elif isinstance(val, list):
            lines.append("%s: %s" % (key, " ".join(val) if val else "-"))
        else:
            lines.append("%s: %s" % (key, str(val).lower() if isinstance(val, bool) else val))
    return "\n".join(lines)


def main(argv=None):
    parser = build_parser()
    fmt = "text"
    saved_cap = LIMITS.monoid_cap
    try:
        args = parser.parse_args(argv)
        fmt = args.format
        if not getattr(args, "run", None):
            raise UsageError("missing subcommand")
        if args.cap is not None:
            LIMITS.monoid_cap = args.cap
        start = time.perf_counter()
        report = {"command": args.command}
        report.update(args.run(args))
        if args.timing:
            report["seconds"] = round(time.perf_counter() - start, 3)
        code = 0
    except UsageError as e:
        report, code = {"verdict": "error", "error": str(e)}, 1
    except (FormatError, WordError, OSError, ValueError) as e:
        report, code = {"verdict": "error", "error": str(e)}, 1
    except CapExceeded as e:
        report, code = {"verdict": "error", "error": str(e)}, 2
    except RuntimeError as e:
        report, code = {"verdict": "error", "error": str(e)}, 1
    finally:
        LIMITS.monoid_cap = saved_cap
    print(render(report, fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
