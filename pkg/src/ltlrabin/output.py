"""Text renderings: HOA v1, ltl2dstar v2 explicit, Graphviz dot, stats."""

from __future__ import annotations

from .dra import Dra
from .errors import UnsupportedCombination
from .labels import hoa_label, text_label
from .tgdra import Tgdra
from .vwaa import Vwaa, members

FORMATS = ("hoa", "dstar", "dot", "stats")


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _ap_line(alphabet) -> str:
    return " ".join([f"AP: {len(alphabet.props)}"] + [_quote(p) for p in alphabet.props])


def _group(n_letters, key):
    """Letters grouped by ``key(letter)``, groups in order of first letter."""
    groups: dict = {}
    for a in range(n_letters):
        groups.setdefault(key(a), []).append(a)
    return groups


# --------------------------------------------------------------------------
# HOA


def dra_to_hoa(d: Dra, name: str = "") -> str:
    k = len(d.pairs)
    np_ = len(d.alphabet.props)
    lines = ["HOA: v1"]
    if name:
        lines.append(f"name: {_quote(name)}")
    lines += [f"States: {d.n_states}", f"Start: {d.initial}", _ap_line(d.alphabet)]
    if k:
        cond = " | ".join(f"(Fin({2 * i})&Inf({2 * i + 1}))" for i in range(k))
    else:
        cond = "f"
    lines += [
        f"acc-name: Rabin {k}",
        f"Acceptance: {2 * k} {cond}",
        "properties: trans-labels explicit-labels state-acc deterministic complete",
        "--BODY--",
    ]
    for s in range(d.n_states):
        marks = []
        for i, (kk, ll) in enumerate(d.pairs):
            if kk >> s & 1:
                marks.append(2 * i)
            if ll >> s & 1:
                marks.append(2 * i + 1)
        acc = " {" + " ".join(map(str, marks)) + "}" if marks else ""
        lines.append(f"State: {s}{acc}")
        groups = _group(d.n_letters, lambda a: d.trans[s][a])
        for t in sorted(groups):
            lines.append(f"[{hoa_label(np_, groups[t])}] {t}")
    lines.append("--END--")
    return "\n".join(lines) + "\n"


def _tgdra_marks(t: Tgdra):
    """Mark numbering: each pair gets one Fin mark followed by its Inf marks."""
    base = []
    n = 0
    for p in t.pairs:
        base.append(n)
        n += 1 + len(p.ls)
    return base, n


def tgdra_to_hoa(t: Tgdra, name: str = "") -> str:
    base, total = _tgdra_marks(t)
    np_ = len(t.alphabet.props)
    lines = ["HOA: v1"]
    if name:
        lines.append(f"name: {_quote(name)}")
    lines += [f"States: {t.n_states}", f"Start: {t.initial}", _ap_line(t.alphabet)]
    if t.pairs:
        terms = []
        for b, p in zip(base, t.pairs):
            parts = [f"Fin({b})"] + [f"Inf({b + 1 + j})" for j in range(len(p.ls))]
            terms.append("(" + "&".join(parts) + ")")
        lines.append("acc-name: generalized-Rabin " + " ".join([str(len(t.pairs))] + [str(len(p.ls)) for p in t.pairs]))
        lines.append(f"Acceptance: {total} " + " | ".join(terms))
    else:
        lines += ["acc-name: none", "Acceptance: 0 f"]
    lines += ["properties: trans-labels explicit-labels trans-acc deterministic complete", "--BODY--"]
    for s in range(t.n_states):
        lines.append(f"State: {s}")

        def key(a, s=s):
            e = s * t.n_letters + a
            marks = []
            for b, p in zip(base, t.pairs):
                if p.k >> e & 1:
                    marks.append(b)
                marks += [b + 1 + j for j, l in enumerate(p.ls) if l >> e & 1]
            return (t.trans[s][a], tuple(marks))

        groups = _group(t.n_letters, key)
        for tgt, marks in sorted(groups):
            acc = " {" + " ".join(map(str, marks)) + "}" if marks else ""
            lines.append(f"[{hoa_label(np_, groups[(tgt, marks)])}] {tgt}{acc}")
    lines.append("--END--")
    return "\n".join(lines) + "\n"


def vwaa_to_hoa(v: Vwaa, name: str = "") -> str:
    """Alternating co-Buchi automaton; the empty configuration becomes an accepting sink."""
    np_ = len(v.alphabet.props)
    uses_empty = 0 in v.initial or any(0 in targets for row in v.delta for targets in row)
    sink = v.n
    n_states = v.n + (1 if uses_empty else 0)

    def conj(c):
        return "&".join(map(str, members(c))) if c else str(sink)

    lines = ["HOA: v1"]
    if name:
        lines.append(f"name: {_quote(name)}")
    lines.append(f"States: {n_states}")
    for c in sorted(v.initial):
        lines.append(f"Start: {conj(c)}")
    lines += [
        _ap_line(v.alphabet),
        "acc-name: co-Buchi",
        "Acceptance: 1 Fin(0)",
        "properties: trans-labels explicit-labels state-acc univ-branch",
        "--BODY--",
    ]
    for s, f in enumerate(v.states):
        acc = " {0}" if s in v.cobuchi else ""
        lines.append(f"State: {s} {_quote(str(f))}{acc}")
        by_target: dict[int, list[int]] = {}
        for a, targets in enumerate(v.delta[s]):
            for c in targets:
                by_target.setdefault(c, []).append(a)
        for c in sorted(by_target):
            lines.append(f"[{hoa_label(np_, by_target[c])}] {conj(c)}")
    if uses_empty:
        lines += [f'State: {sink} "tt"', f"[t] {sink}"]
    lines.append("--END--")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# ltl2dstar


def dra_to_dstar(d: Dra, comment: str = "") -> str:
    lines = ["DRA v2 explicit"]
    if comment:
        lines.append(f"Comment: {_quote(comment)}")
    lines += [
        f"States: {d.n_states}",
        f"Acceptance-Pairs: {len(d.pairs)}",
        f"Start: {d.initial}",
        _ap_line(d.alphabet),
        "---",
    ]
    for s in range(d.n_states):
        lines.append(f"State: {s}")
        sig = []
        for i, (k, l) in enumerate(d.pairs):
            if l >> s & 1:
                sig.append(f"+{i}")
            if k >> s & 1:
                sig.append(f"-{i}")
        lines.append(" ".join(["Acc-Sig:"] + sig))
        for a in range(d.n_letters):
            lines.append(str(d.trans[s][a]))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# dot


def _dot_edges(n_letters, alphabet, src, row, extra=None):
    groups = _group(n_letters, lambda a: (row[a], extra(a) if extra else ""))
    out = []
    for (tgt, tag) in sorted(groups):
        label = text_label(alphabet, groups[(tgt, tag)])
        if tag:
            label += "\n" + tag
        out.append(f'  {src} -> {tgt} [label={_quote(label)}];')
    return out


def dra_to_dot(d: Dra, name: str = "") -> str:
    lines = ["digraph dra {", "  rankdir=LR;", f"  label={_quote(name)};", '  init [shape=point];']
    for s in range(d.n_states):
        sig = []
        for i, (k, l) in enumerate(d.pairs):
            if l >> s & 1:
                sig.append(f"+{i}")
            if k >> s & 1:
                sig.append(f"-{i}")
        label = f"{s}" + ("\n" + " ".join(sig) if sig else "")
        lines.append(f"  {s} [shape=circle, label={_quote(label)}];")
    lines.append(f"  init -> {d.initial};")
    for s in range(d.n_states):
        lines += _dot_edges(d.n_letters, d.alphabet, s, d.trans[s])
    lines.append("}")
    return "\n".join(lines) + "\n"


def tgdra_to_dot(t: Tgdra, name: str = "") -> str:
    lines = ["digraph tgdra {", "  rankdir=LR;", f"  label={_quote(name)};", '  init [shape=point];']
    for s in range(t.n_states):
        lines.append(f"  {s} [shape=circle];")
    lines.append(f"  init -> {t.initial};")
    for s in range(t.n_states):

        def tag(a, s=s):
            e = s * t.n_letters + a
            parts = []
            for i, p in enumerate(t.pairs):
                if p.k >> e & 1:
                    parts.append(f"K{i}")
                parts += [f"L{i}.{j}" for j, l in enumerate(p.ls) if l >> e & 1]
            return " ".join(parts)

        lines += _dot_edges(t.n_letters, t.alphabet, s, t.trans[s], tag)
    lines.append("}")
    return "\n".join(lines) + "\n"


def vwaa_to_dot(v: Vwaa, name: str = "") -> str:
    """One node per state; branching transitions fan out from a small point."""
    lines = ["digraph vwaa {", "  rankdir=LR;", f"  label={_quote(name)};"]
    for s, f in enumerate(v.states):
        shape = "doublecircle" if s in v.cobuchi else "circle"
        lines.append(f"  s{s} [shape={shape}, label={_quote(str(f))}];")
    hub = 0

    def fan(src_id, c, label):
        nonlocal hub
        attrs = [f"label={_quote(label)}"] if label else []
        tgts = list(members(c))
        if len(tgts) == 1:
            return [f"  {src_id} -> s{tgts[0]} [{', '.join(attrs)}];"]
        # empty or branching target: draw a hub and fan out from it
        h = f"h{hub}"
        hub += 1
        out = [f"  {h} [shape=point];", f"  {src_id} -> {h} [{', '.join(attrs + ['arrowhead=none'])}];"]
        out += [f"  {h} -> s{t};" for t in tgts]
        return out

    for c in sorted(v.initial):
        lines.append(f"  i{hub} [shape=point, style=invis];")
        src = f"i{hub}"
        hub += 1
        lines += fan(src, c, "")
    for s in range(v.n):
        by_target: dict[int, list[int]] = {}
        for a, targets in enumerate(v.delta[s]):
            for c in targets:
                by_target.setdefault(c, []).append(a)
        for c in sorted(by_target):
            lines += fan(f"s{s}", c, text_label(v.alphabet, by_target[c]))
    lines.append("}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------


def format_output(result, fmt: str, timing: bool = True) -> str:
    """Render the last stage of a pipeline result."""
    if fmt not in FORMATS:
        raise UnsupportedCombination(f"unknown format {fmt!r}")
    if fmt == "stats":
        return result.stats_line(timing) + "\n"
    stage = result.stage
    name = result.text
    if fmt == "dstar":
        if stage != "dra":
            raise UnsupportedCombination(f"the dstar format needs a Rabin automaton, not a {stage}")
        return dra_to_dstar(result.dra, name)
    table = {
        ("hoa", "dra"): lambda: dra_to_hoa(result.dra, name),
        ("hoa", "tgdra"): lambda: tgdra_to_hoa(result.tgdra, name),
        ("hoa", "vwaa"): lambda: vwaa_to_hoa(result.vwaa, name),
        ("dot", "dra"): lambda: dra_to_dot(result.dra, name),
        ("dot", "tgdra"): lambda: tgdra_to_dot(result.tgdra, name),
        ("dot", "vwaa"): lambda: vwaa_to_dot(result.vwaa, name),
    }
    return table[(fmt, stage)]()


__all__ = [
    "FORMATS", "format_output", "dra_to_hoa", "tgdra_to_hoa", "vwaa_to_hoa",
    "dra_to_dstar", "dra_to_dot", "tgdra_to_dot", "vwaa_to_dot",
]
