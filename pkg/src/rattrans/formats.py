"""Line-based text format for transducers, resynchronizers and DRat transducers.

    transducer T1            drat R1
    alphabet a               alphabet a,b,#
    states p q               istate A B
    initial p                ostate F
    final q eps              initial A
    trans p a aa p           final B
                             delta A a F
                             delta A end B

Words are written as ``eps``, as a concatenation of one-character letters, or
as comma-separated letters.  Letters ``i.x`` / ``o.x`` denote the input and
output copies of ``x`` (the colored alphabet of resynchronizers).  Lines whose
first token starts with ``;`` are comments.
"""

from .words import END, IN, OUT


class FormatError(ValueError):
    def __init__(self, lineno, msg):
        super().__init__("line %d: %s" % (lineno, msg))
        self.lineno = lineno


def letter_from_text(tok):
    if len(tok) > 2 and tok[1] == "." and tok[0] in "io":
        return (tok[2:], IN if tok[0] == "i" else OUT)
    return tok


def letter_to_text(x):
    if isinstance(x, tuple):
        a, c = x
        return ("i." if c == IN else "o.") + str(a)
    return str(x)


def word_from_text(tok, alphabet, lineno):
    if tok == "eps":
        return ()
    texts = {letter_to_text(x): x for x in alphabet}
    if tok in texts:
        return (texts[tok],)
    pieces = tok.split(",") if "," in tok else list(tok)
    out = []
    for p in pieces:
        if p not in texts:
            raise FormatError(lineno, "unknown letter %r in word %r" % (p, tok))
        out.append(texts[p])
    return tuple(out)


def word_to_text(w):
    if not w:
        return "eps"
    parts = [letter_to_text(x) for x in w]
    if all(len(p) == 1 for p in parts):
        return "".join(parts)
    return ",".join(parts)


def _parse_alphabet(toks, lineno):
    if len(toks) != 1:
        raise FormatError(lineno, "alphabet takes one comma-separated list")
    letters = tuple(letter_from_text(t) for t in toks[0].split(",") if t)
    if not letters:
        raise FormatError(lineno, "empty alphabet")
    if len(set(letters)) != len(letters):
        raise FormatError(lineno, "duplicate letters")
    for x in letters:
        if x == END or x == "end" or x == "eps":
            raise FormatError(lineno, "reserved symbol %r in alphabet" % (x,))
    return letters


def parse(text):
    """Parse a transducer or DRat file; errors carry the line number."""
    from .drat import DetTransducer
    from .transducer import Transducer

    kind = name = None
    alphabet = None
    states, istates, ostates, initial = [], [], [], []
    final = {}
    trans, delta = [], {}

    def need(lineno, *qs):
        known = set(states) | set(istates) | set(ostates)
        for q in qs:
            if q not in known:
                raise FormatError(lineno, "undeclared state %r" % q)

    for lineno, line in enumerate(text.splitlines(), 1):
        toks = line.split()
        if not toks or toks[0].startswith(";"):
            continue
        head, rest = toks[0], toks[1:]
        if kind is None:
            if head not in ("transducer", "drat") or len(rest) > 1:
                raise FormatError(lineno, "expected 'transducer <name>' or 'drat <name>'")
            kind, name = head, (rest[0] if rest else "T")
            continue
        if head == "alphabet":
            alphabet = _parse_alphabet(rest, lineno)
            continue
        if alphabet is None:
            raise FormatError(lineno, "alphabet must come before %r" % head)
        if head == "states" and kind == "transducer":
            states += rest
        elif head == "istate" and kind == "drat":
            istates += rest
        elif head == "ostate" and kind == "drat":
            ostates += rest
        elif head == "initial":
            need(lineno, *rest)
            initial += rest
        elif head == "final":
            if not rest or len(rest) > 2:
                raise FormatError(lineno, "final <state> [word]")
            need(lineno, rest[0])
            if kind == "drat" and len(rest) > 1:
                raise FormatError(lineno, "drat final states take no output")
            final[rest[0]] = word_from_text(rest[1], alphabet, lineno) if len(rest) > 1 else ()
        elif head == "trans" and kind == "transducer":
            if len(rest) != 4:
                raise FormatError(lineno, "trans <src> <in> <out> <dst>")
            need(lineno, rest[0], rest[3])
            trans.append(
                (rest[0], word_from_text(rest[1], alphabet, lineno), word_from_text(rest[2], alphabet, lineno), rest[3])
            )
        elif head == "delta" and kind == "drat":
            if len(rest) != 3:
                raise FormatError(lineno, "delta <src> <letter|end> <dst>")
            need(lineno, rest[0], rest[2])
            if rest[1] == "end":
                a = END
            else:
                w = word_from_text(rest[1], alphabet, lineno)
                if len(w) != 1:
                    raise FormatError(lineno, "delta reads exactly one letter")
                a = w[0]
            if (rest[0], a) in delta:
                raise FormatError(lineno, "duplicate delta for %r" % ((rest[0], a),))
            delta[rest[0], a] = rest[2]
        else:
            raise FormatError(lineno, "unknown directive %r" % head)
    if kind is None:
        raise FormatError(1, "empty file")
    if alphabet is None:
        raise FormatError(1, "missing alphabet")
    if kind == "transducer":
        return Transducer(alphabet, states, initial, final, trans, name)
    if len(initial) != 1:
        raise FormatError(1, "drat needs exactly one initial state")
    try:
        return DetTransducer(alphabet, istates, ostates, initial[0], set(final), delta, name)
    except ValueError as e:
        raise FormatError(1, str(e)) from e


def _state_names(states):
    """Printable token for every state; string states keep their name."""
    names = {}
    used = set()
    for q in sorted(states, key=repr):
        if isinstance(q, str) and q and not any(c.isspace() for c in q):
            names[q] = q
            used.add(q)
    i = 0
    for q in sorted(states, key=repr):
        if q in names:
            continue
        while "s%d" % i in used:
            i += 1
        names[q] = "s%d" % i
        used.add(names[q])
    return names


def to_text(x):
    """Print a Transducer, Resynchronizer or DetTransducer."""
    from .drat import DetTransducer
    from .resync import Resynchronizer

    if isinstance(x, Resynchronizer):
        x = x.carrier
    alpha = ",".join(letter_to_text(a) for a in x.alphabet)
    if isinstance(x, DetTransducer):
        names = _state_names(x.istates | x.ostates)
        lines = ["drat %s" % x.name, "alphabet %s" % alpha]
        lines.append("istate " + " ".join(sorted(names[q] for q in x.istates)))
        lines.append("ostate " + " ".join(sorted(names[q] for q in x.ostates)))
        lines.append("initial %s" % names[x.initial])
        for q in sorted(names[q] for q in x.final):
            lines.append("final %s" % q)
        rows = []
        for (q, a), r in x.delta.items():
            rows.append((names[q], "end" if a == END else letter_to_text(a), names[r]))
        lines += ["delta %s %s %s" % row for row in sorted(rows)]
        return "\n".join(lines) + "\n"
    names = _state_names(x.states)
    lines = ["transducer %s" % x.name, "alphabet %s" % alpha]
    if x.states:
        lines.append("states " + " ".join(sorted(names.values())))
    if x.initial:
        lines.append("initial " + " ".join(sorted(names[q] for q in x.initial)))
    for q, out in sorted((names[q], out) for q, out in x.final.items()):
        lines.append("final %s %s" % (q, word_to_text(out)))
    rows = sorted((names[p], word_to_text(a), word_to_text(b), names[q]) for p, a, b, q in x.transitions)
    lines += ["trans %s %s %s %s" % row for row in rows]
    return "\n".join(lines) + "\n"


def load(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def load_builtin(name):
    """Shipped example transducers: fig1_t1, fig1_t2, fig1_t, fig1_u, fig2_r1."""
    from importlib.resources import files

    for ext in (".tr", ".dtr"):
        res = files("rattrans.data") / (name + ext)
        if res.is_file():
            return parse(res.read_text(encoding="utf-8"))
    raise FileNotFoundError(name)
