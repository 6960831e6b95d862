"""End-to-end translation: text -> formula -> VWAA -> TGDRA -> DRA."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .dra import Dra, degeneralize, simplify_dra
from .ltl import Formula, atoms, parse, simplify_formula, to_positive_normal_form
from .tgdra import DEFAULT_CAP, Tgdra, build_tgdra, simplify_tgdra
from .vwaa import Structure, Vwaa, check_structure, normalize_accepting_set, simplify_vwaa, translate_ltl_to_vwaa
from .words import Alphabet

STAGES = ("vwaa", "tgdra", "dra")


@dataclass(frozen=True)
class Options:
    stage: str = "dra"
    simplify_formula: bool = True
    simplify_vwaa: bool = True
    simplify_acceptance: bool = True
    simplify_states: bool = True
    cap_states: int = DEFAULT_CAP

    def __post_init__(self):
        if self.stage not in STAGES:
            raise ValueError(f"unknown stage {self.stage!r}")


@dataclass
class PipelineResult:
    text: str
    formula: Formula
    pnf: Formula
    simplified: Formula
    alphabet: Alphabet
    vwaa: Vwaa
    structure: Structure
    tgdra_raw: Tgdra | None = None
    tgdra: Tgdra | None = None
    dra_raw: Dra | None = None
    dra: Dra | None = None
    times: dict = field(default_factory=dict)

    @property
    def stage(self) -> str:
        if self.dra is not None:
            return "dra"
        return "tgdra" if self.tgdra is not None else "vwaa"

    @property
    def total_ms(self) -> float:
        return sum(self.times.values())

    def stats(self) -> dict:
        return {
            "vwaa": self.vwaa.n,
            "tgdra": None if self.tgdra is None else self.tgdra.n_states,
            "tgdra_pairs": None if self.tgdra is None else len(self.tgdra.pairs),
            "dra": None if self.dra is None else self.dra.n_states,
            "dra_pairs": None if self.dra is None else len(self.dra.pairs),
        }

    def stats_line(self, timing: bool = True) -> str:
        dra = "-" if self.dra is None else self.dra.size()
        tg = "-" if self.tgdra is None else str(self.tgdra.n_states)
        line = f"{self.text}\tdra={dra}\ttgdra={tg}\tvwaa={self.vwaa.n}"
        if timing:
            line += f"\ttime_ms={self.total_ms:.1f}"
        return line


class _Clock:
    def __init__(self, times):
        self.times = times
        self.t = time.perf_counter()

    def lap(self, name):
        now = time.perf_counter()
        self.times[name] = (now - self.t) * 1000.0
        self.t = now


def run_pipeline(text: str | Formula, options: Options | None = None) -> PipelineResult:
    """Translate one formula up to ``options.stage``.

    Raises the errors of the individual stages: syntax errors, negations
    that cannot be pushed inwards, unsupported fragments and resource caps.
    """
    opts = options or Options()
    times: dict = {}
    clock = _Clock(times)
    if isinstance(text, Formula):
        formula, text = text, str(text)
    else:
        formula = parse(text)
    alphabet = Alphabet.of(atoms(formula))
    pnf = to_positive_normal_form(formula)
    simplified = simplify_formula(pnf) if opts.simplify_formula else pnf
    clock.lap("formula")
    v = translate_ltl_to_vwaa(simplified, alphabet)
    if check_structure(v) is Structure.MMAA:
        v = normalize_accepting_set(v)
    if opts.simplify_vwaa:
        v = simplify_vwaa(v)
    structure = check_structure(v)
    clock.lap("vwaa")
    res = PipelineResult(text, formula, pnf, simplified, alphabet, v, structure, times=times)
    if opts.stage == "vwaa":
        return res
    res.tgdra_raw = build_tgdra(v, cap=opts.cap_states)
    res.tgdra = simplify_tgdra(
        res.tgdra_raw, acceptance=opts.simplify_acceptance, states=opts.simplify_states
    )
    clock.lap("tgdra")
    if opts.stage == "tgdra":
        return res
    res.dra_raw = degeneralize(res.tgdra, cap=opts.cap_states)
    res.dra = simplify_dra(
        res.dra_raw, acceptance=opts.simplify_acceptance, states=opts.simplify_states
    )
    clock.lap("dra")
    return res


__all__ = ["Options", "PipelineResult", "run_pipeline", "STAGES"]
