"""Graphviz DOT export."""

from .automata import ssorted
from .formats import letter_to_text, word_to_text


def _esc(x):
    return str(x).replace("\\", "\\\\").replace('"', '\\"')


def _ids(states):
    return {q: "n%d" % i for i, q in enumerate(ssorted(states))}


def nfa_to_dot(a, name="A"):
    ids = _ids(a.states)
    lines = ["digraph %s {" % name, "  rankdir=LR;"]
    for q, i in ids.items():
        shape = "doublecircle" if q in a.final else "circle"
        lines.append('  %s [shape=%s label="%s"];' % (i, shape, _esc(q)))
    for q in ssorted(a.initial):
        lines.append('  start_%s [shape=point]; start_%s -> %s;' % (ids[q], ids[q], ids[q]))
    for p, lab, q in ssorted(a.transitions):
        text = " ".join(letter_to_text(x) for x in lab) or "eps"
        lines.append('  %s -> %s [label="%s"];' % (ids[p], ids[q], _esc(text)))
    lines.append("}")
    return "\n".join(lines) + "\n"


def transducer_to_dot(t, name=None):
    name = name or "T"
    ids = _ids(t.states)
    lines = ["digraph %s {" % _esc(name).replace(" ", "_"), "  rankdir=LR;"]
    for q, i in ids.items():
        if q in t.final:
            label = "%s / %s" % (q, word_to_text(t.final[q]))
            lines.append('  %s [shape=doublecircle label="%s"];' % (i, _esc(label)))
        else:
            lines.append('  %s [shape=circle label="%s"];' % (i, _esc(q)))
    for q in ssorted(t.initial):
        lines.append('  start_%s [shape=point]; start_%s -> %s;' % (ids[q], ids[q], ids[q]))
    for p, x, y, q in ssorted(t.transitions):
        label = "%s | %s" % (word_to_text(x), word_to_text(y))
        lines.append('  %s -> %s [label="%s"];' % (ids[p], ids[q], _esc(label)))
    lines.append("}")
    return "\n".join(lines) + "\n"
