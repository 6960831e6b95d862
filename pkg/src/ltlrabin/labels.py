"""Compact propositional labels for sets of letters."""

from __future__ import annotations

from typing import Iterable

from .words import Alphabet


def cover(n_props: int, letters: Iterable[int]) -> list[tuple[int, int]]:
    """A small list of cubes ``(care_mask, values)`` covering exactly ``letters``.

    Prime implicants by Quine-McCluskey merging, then a greedy cover.
    """
    on = sorted(set(letters))
    full = (1 << n_props) - 1
    if not on:
        return []
    if len(on) == 1 << n_props:
        return [(0, 0)]
    cubes = {(full, a) for a in on}
    primes = set()
    while cubes:
        merged = set()
        used = set()
        by_mask: dict[int, list[int]] = {}
        for mask, val in cubes:
            by_mask.setdefault(mask, []).append(val)
        for mask, vals in by_mask.items():
            vs = set(vals)
            for v in vals:
                bit = 1
                while bit <= mask:
                    if mask & bit and not v & bit and (v | bit) in vs:
                        merged.add((mask & ~bit, v))
                        used.add((mask, v))
                        used.add((mask, v | bit))
                    bit <<= 1
        primes |= cubes - used
        cubes = merged
    remaining = set(on)
    chosen = []
    ordered = sorted(primes, key=lambda c: (bin(c[0]).count("1"), c))
    while remaining:
        best = max(ordered, key=lambda c: len(_covered(c, remaining)))
        chosen.append(best)
        remaining -= _covered(best, remaining)
    return sorted(chosen, key=lambda c: (-bin(c[0]).count("1"),) + c)


def _covered(cube, letters):
    mask, val = cube
    return {a for a in letters if a & mask == val}


def text_label(alphabet: Alphabet, letters: Iterable[int]) -> str:
    """Label in the concrete LTL syntax, e.g. ``a & !b | c``."""
    cubes = cover(len(alphabet.props), letters)
    if not cubes:
        return "ff"
    if cubes == [(0, 0)]:
        return "tt"
    terms = []
    for mask, val in cubes:
        lits = [
            (p if val >> i & 1 else "!" + p)
            for i, p in enumerate(alphabet.props)
            if mask >> i & 1
        ]
        terms.append(" & ".join(lits))
    return " | ".join(terms)


def hoa_label(n_props: int, letters: Iterable[int]) -> str:
    """Label in HOA syntax over AP indices, e.g. ``0&!1 | 2``."""
    cubes = cover(n_props, letters)
    if not cubes:
        return "f"
    if cubes == [(0, 0)]:
        return "t"
    terms = []
    for mask, val in cubes:
        lits = [(str(i) if val >> i & 1 else f"!{i}") for i in range(n_props) if mask >> i & 1]
        terms.append("&".join(lits))
    return " | ".join(terms)
