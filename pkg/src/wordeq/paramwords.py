"""Parametric words: constants, integer-parameter powers, unfixed parts.

A parametric word denotes a family of concrete words.  ``Power("ab", "i")``
stands for (ab)^i with i ranging over the nonnegative integers, and
``Unfixed("y")`` stands for an arbitrary word substituted consistently at
every occurrence of the same part id.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .errors import UnfixedPartPresent


@dataclass(frozen=True)
class Const:
    word: str

    def __post_init__(self) -> None:
        assert self.word != "", "empty constant blocks are dropped on construction"


@dataclass(frozen=True)
class Power:
    """base repeated param times; the parameter ranges over 0, 1, 2, ..."""

    base: str
    param: str

    def __post_init__(self) -> None:
        assert self.base != "", "a power needs a nonempty base"


@dataclass(frozen=True)
class Unfixed:
    part: str


Block = Union[Const, Power, Unfixed]


@dataclass(frozen=True)
class ParamWord:
    blocks: tuple[Block, ...]


def param_word(blocks: list[Block] | tuple[Block, ...]) -> ParamWord:
    """Normalize: merge adjacent constants, drop empty pieces."""
    merged: list[Block] = []
    for b in blocks:
        if isinstance(b, Const) and merged and isinstance(merged[-1], Const):
            merged[-1] = Const(merged[-1].word + b.word)
        else:
            merged.append(b)
    return ParamWord(tuple(merged))


def params_of(w: ParamWord) -> list[str]:
    """Parameter ids in first-occurrence order."""
    out: list[str] = []
    for b in w.blocks:
        if isinstance(b, Power) and b.param not in out:
            out.append(b.param)
    return out


def parts_of(w: ParamWord) -> list[str]:
    """Unfixed part ids in first-occurrence order."""
    out: list[str] = []
    for b in w.blocks:
        if isinstance(b, Unfixed) and b.part not in out:
            out.append(b.part)
    return out


def has_unfixed(w: ParamWord) -> bool:
    return any(isinstance(b, Unfixed) for b in w.blocks)


def instantiate(
    w: ParamWord,
    params: Mapping[str, int],
    parts: Mapping[str, str] | None = None,
) -> str:
    """Concrete word for given parameter values and unfixed-part words."""
    parts = parts or {}
    pieces: list[str] = []
    for b in w.blocks:
        if isinstance(b, Const):
            pieces.append(b.word)
        elif isinstance(b, Power):
            n = params[b.param]
            assert n >= 0, "parameters range over nonnegative integers"
            pieces.append(b.base * n)
        else:
            if b.part not in parts:
                raise UnfixedPartPresent(f"no word supplied for unfixed part {b.part!r}")
            pieces.append(parts[b.part])
    return "".join(pieces)
