"""Ground truth on lasso words: enumeration and cross-stage agreement checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterator

import numpy as np

from . import dra as dra_mod
from . import kernels
from . import tgdra as tgdra_mod
from .errors import ResourceCapExceeded
from .ltl import Formula, FragmentClass, classify_fragment, evaluate_batch, to_string
from .vwaa import mmaa_to_ltl
from .words import Alphabet, LassoWord

DEFAULT_LASSO_CAP = 50_000_000

Checker = Callable[[np.ndarray, np.ndarray], np.ndarray]


def lasso_count(n_letters: int, max_prefix: int, max_period: int) -> int:
    pre = sum(n_letters**p for p in range(max_prefix + 1))
    per = sum(n_letters**q for q in range(1, max_period + 1))
    return pre * per


def _words(n_letters: int, length: int) -> np.ndarray:
    if length == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(product(range(n_letters), repeat=length)), dtype=np.int64)


def lasso_batches(
    alphabet: Alphabet,
    max_prefix: int,
    max_period: int,
    cap: int = DEFAULT_LASSO_CAP,
    chunk: int = 1 << 16,
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """``(pre, per)`` batches sharing one shape, ordered by prefix then period length.

    Within a shape lassos are ordered by prefix, then period; a shape is
    split into batches of at most about ``chunk`` lassos.
    """
    if max_period < 1:
        raise ValueError("max_period must be at least 1")
    n = alphabet.size
    total = lasso_count(n, max_prefix, max_period)
    if total > cap:
        raise ResourceCapExceeded(f"{total} lassos exceed the cap of {cap}")
    for p in range(max_prefix + 1):
        prefixes = _words(n, p)
        for q in range(1, max_period + 1):
            periods = _words(n, q)
            step = max(1, chunk // len(periods))
            for i in range(0, len(prefixes), step):
                block = prefixes[i : i + step]
                pre = np.repeat(block, len(periods), axis=0)
                per = np.tile(periods, (len(block), 1))
                yield pre, per


def enumerate_lassos(
    alphabet: Alphabet, max_prefix: int, max_period: int, cap: int = DEFAULT_LASSO_CAP
) -> list[LassoWord]:
    out = []
    for pre, per in lasso_batches(alphabet, max_prefix, max_period, cap):
        for u, v in zip(pre.tolist(), per.tolist()):
            out.append(LassoWord(alphabet, tuple(u), tuple(v)))
    return out


# --------------------------------------------------------------------------
# checkers


def formula_checker(f: Formula, alphabet: Alphabet) -> Checker:
    return lambda pre, per: evaluate_batch(f, alphabet, pre, per)


def tgdra_checker(t) -> Checker:
    trans, init, fin, inf, owner = tgdra_mod.kernel_arrays(t)
    return lambda pre, per: kernels.accept(trans, init, pre, per, fin, inf, owner, True)


def dra_checker(d) -> Checker:
    trans, init, fin, inf, owner = dra_mod.kernel_arrays(d)
    return lambda pre, per: kernels.accept(trans, init, pre, per, fin, inf, owner, False)


@dataclass(frozen=True)
class Mismatch:
    word: LassoWord
    stage: str
    expected: bool
    got: bool


@dataclass
class EquivalenceReport:
    formula: str
    checked: int = 0
    stages: tuple[str, ...] = ()
    mismatches: list[Mismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def lines(self) -> list[str]:
        return [
            f"{self.formula}\t{m.stage}\t{m.word.show()}\texpected={int(m.expected)}\tgot={int(m.got)}"
            for m in self.mismatches
        ]

    def summary(self) -> str:
        return (
            f"{self.formula}\tlassos={self.checked}\tstages={','.join(self.stages)}"
            f"\tmismatches={len(self.mismatches)}"
        )


def compare(
    name: str,
    alphabet: Alphabet,
    expected: Checker,
    stages: dict[str, Checker],
    max_prefix: int,
    max_period: int,
    limit: int = 100,
) -> EquivalenceReport:
    """Run every stage checker against ``expected`` on all small lassos.

    At most ``limit`` mismatches per stage are recorded.
    """
    report = EquivalenceReport(name, stages=tuple(stages))
    per_stage = {s: 0 for s in stages}
    for pre, per in lasso_batches(alphabet, max_prefix, max_period):
        want = expected(pre, per)
        report.checked += len(want)
        for stage, fn in stages.items():
            got = fn(pre, per)
            for i in np.flatnonzero(got != want):
                if per_stage[stage] >= limit:
                    break
                per_stage[stage] += 1
                w = LassoWord(alphabet, tuple(pre[i].tolist()), tuple(per[i].tolist()))
                report.mismatches.append(Mismatch(w, stage, bool(want[i]), bool(got[i])))
    return report


def cross_check(f: Formula | str, max_prefix: int = 2, max_period: int = 3, options=None) -> EquivalenceReport:
    """Compare the formula semantics with every construction stage."""
    from .pipeline import run_pipeline

    res = run_pipeline(f, options)
    return check_result(res, max_prefix, max_period)


def check_result(res, max_prefix: int, max_period: int) -> EquivalenceReport:
    stages: dict[str, Checker] = {}
    if classify_fragment(res.simplified) is FragmentClass.STRICT_FG:
        stages["mmaa_ltl"] = formula_checker(mmaa_to_ltl(res.vwaa), res.alphabet)
    if res.tgdra is not None:
        stages["tgdra_raw"] = tgdra_checker(res.tgdra_raw)
        stages["tgdra"] = tgdra_checker(res.tgdra)
    if res.dra is not None:
        stages["dra_raw"] = dra_checker(res.dra_raw)
        stages["dra"] = dra_checker(res.dra)
    return compare(
        to_string(res.formula),
        res.alphabet,
        formula_checker(res.formula, res.alphabet),
        stages,
        max_prefix,
        max_period,
    )


__all__ = [
    "lasso_count", "lasso_batches", "enumerate_lassos", "formula_checker", "tgdra_checker",
    "dra_checker", "Mismatch", "EquivalenceReport", "compare", "cross_check", "check_result",
]
