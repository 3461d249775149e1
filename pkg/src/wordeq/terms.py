"""Core syntax: string terms, length terms, regular expressions, formulas.

Words are plain Python strings; every character is one letter of the
problem alphabet.  All node types are immutable and hashable, and the
smart constructors below keep terms in a canonical shape (flattened
concatenations, merged adjacent literals, no empty pieces) so that
structural equality is meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

# ---------------------------------------------------------------------------
# string terms


@dataclass(frozen=True)
class Lit:
    """A constant word."""

    word: str


@dataclass(frozen=True)
class Var:
    """A string variable."""

    name: str


@dataclass(frozen=True)
class Concat:
    """Concatenation of two or more string terms."""

    parts: tuple["StrTerm", ...]

    def __post_init__(self) -> None:
        assert len(self.parts) >= 2, "Concat needs at least two parts"


StrTerm = Union[Lit, Var, Concat]


def concat(*parts: StrTerm) -> StrTerm:
    """Concatenation with flattening, literal merging and unit removal."""
    flat: list[StrTerm] = []
    for p in parts:
        if isinstance(p, Concat):
            flat.extend(p.parts)
        else:
            flat.append(p)
    merged: list[StrTerm] = []
    for p in flat:
        if isinstance(p, Lit):
            if p.word == "":
                continue
            if merged and isinstance(merged[-1], Lit):
                merged[-1] = Lit(merged[-1].word + p.word)
                continue
        merged.append(p)
    if not merged:
        return Lit("")
    if len(merged) == 1:
        return merged[0]
    return Concat(tuple(merged))


# ---------------------------------------------------------------------------
# length terms


@dataclass(frozen=True)
class IntConst:
    value: int


@dataclass(frozen=True)
class IntVar:
    name: str


@dataclass(frozen=True)
class Len:
    """Length of a string term."""

    term: StrTerm


@dataclass(frozen=True)
class Sum:
    """Linear combination: sum of coefficient-scaled length terms.

    Items never nest another Sum and never carry coefficient zero.
    """

    items: tuple[tuple[int, "LenTerm"], ...]


LenTerm = Union[IntConst, IntVar, Len, Sum]


def sum_of(*items: tuple[int, LenTerm]) -> LenTerm:
    """Build a Sum: flatten nested sums, merge repeated terms, drop zeros."""
    merged: dict[LenTerm, int] = {}

    def put(coeff: int, term: LenTerm) -> None:
        if isinstance(term, Sum):
            for c, t in term.items:
                put(coeff * c, t)
        else:
            merged[term] = merged.get(term, 0) + coeff

    for coeff, term in items:
        put(coeff, term)
    flat = [(c, t) for t, c in merged.items() if c != 0]
    if not flat:
        return IntConst(0)
    if len(flat) == 1 and flat[0][0] == 1:
        return flat[0][1]
    return Sum(tuple(flat))


def scale(term: LenTerm, factor: int) -> LenTerm:
    """factor * term as a canonical length term."""
    return sum_of((factor, term))


# ---------------------------------------------------------------------------
# regular expressions (constant languages only: no variables inside)


@dataclass(frozen=True)
class ReLit:
    """The singleton language of one nonempty constant word."""

    word: str

    def __post_init__(self) -> None:
        assert self.word != "", "use ReEpsilon for the empty word"


@dataclass(frozen=True)
class ReEpsilon:
    """The language containing only the empty word."""


@dataclass(frozen=True)
class ReConcat:
    parts: tuple["Regex", ...]

    def __post_init__(self) -> None:
        assert len(self.parts) >= 2


@dataclass(frozen=True)
class ReUnion:
    parts: tuple["Regex", ...]

    def __post_init__(self) -> None:
        assert len(self.parts) >= 2


@dataclass(frozen=True)
class ReStar:
    inner: "Regex"


Regex = Union[ReLit, ReEpsilon, ReConcat, ReUnion, ReStar]


def re_lit(word: str) -> Regex:
    return ReEpsilon() if word == "" else ReLit(word)


def re_seq(*parts: Regex) -> Regex:
    """Regex concatenation with flattening, epsilon removal, literal merging."""
    flat: list[Regex] = []
    for p in parts:
        if isinstance(p, ReConcat):
            flat.extend(p.parts)
        elif isinstance(p, ReEpsilon):
            continue
        else:
            flat.append(p)
    merged: list[Regex] = []
    for p in flat:
        if isinstance(p, ReLit) and merged and isinstance(merged[-1], ReLit):
            merged[-1] = ReLit(merged[-1].word + p.word)
        else:
            merged.append(p)
    if not merged:
        return ReEpsilon()
    if len(merged) == 1:
        return merged[0]
    return ReConcat(tuple(merged))


def re_alt(*parts: Regex) -> Regex:
    """Regex union with flattening and duplicate removal (order kept)."""
    flat: list[Regex] = []
    for p in parts:
        if isinstance(p, ReUnion):
            flat.extend(p.parts)
        else:
            flat.append(p)
    seen: list[Regex] = []
    for p in flat:
        if p not in seen:
            seen.append(p)
    assert seen, "union needs at least one branch"
    if len(seen) == 1:
        return seen[0]
    return ReUnion(tuple(seen))


def re_star(inner: Regex) -> Regex:
    if isinstance(inner, (ReStar, ReEpsilon)):
        return inner if isinstance(inner, ReStar) else ReEpsilon()
    return ReStar(inner)


def regex_letters(r: Regex) -> set[str]:
    """All letters mentioned by the expression."""
    if isinstance(r, ReLit):
        return set(r.word)
    if isinstance(r, ReEpsilon):
        return set()
    if isinstance(r, (ReConcat, ReUnion)):
        out: set[str] = set()
        for p in r.parts:
            out |= regex_letters(p)
        return out
    return regex_letters(r.inner)


# ---------------------------------------------------------------------------
# atoms and formulas


@dataclass(frozen=True)
class WordEq:
    lhs: StrTerm
    rhs: StrTerm


@dataclass(frozen=True)
class LenLeq:
    """term <= bound over the integers."""

    term: LenTerm
    bound: int


@dataclass(frozen=True)
class InRe:
    term: StrTerm
    regex: Regex


Atom = Union[WordEq, LenLeq, InRe]


@dataclass(frozen=True)
class And:
    parts: tuple["Formula", ...]

    def __post_init__(self) -> None:
        assert len(self.parts) >= 2


@dataclass(frozen=True)
class Or:
    parts: tuple["Formula", ...]

    def __post_init__(self) -> None:
        assert len(self.parts) >= 2


@dataclass(frozen=True)
class Not:
    inner: "Formula"


Formula = Union[Atom, And, Or, Not]


def conj(*parts: Formula) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        if isinstance(p, And):
            flat.extend(p.parts)
        else:
            flat.append(p)
    assert flat
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*parts: Formula) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        if isinstance(p, Or):
            flat.extend(p.parts)
        else:
            flat.append(p)
    assert flat
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


# ---------------------------------------------------------------------------
# variable collection


def str_term_vars(t: StrTerm) -> set[str]:
    if isinstance(t, Lit):
        return set()
    if isinstance(t, Var):
        return {t.name}
    out: set[str] = set()
    for p in t.parts:
        out |= str_term_vars(p)
    return out


def len_term_vars(t: LenTerm) -> tuple[set[str], set[str]]:
    """(string variables, integer variables) mentioned by a length term."""
    if isinstance(t, IntConst):
        return set(), set()
    if isinstance(t, IntVar):
        return set(), {t.name}
    if isinstance(t, Len):
        return str_term_vars(t.term), set()
    svars: set[str] = set()
    ivars: set[str] = set()
    for _, term in t.items:
        s, i = len_term_vars(term)
        svars |= s
        ivars |= i
    return svars, ivars


def free_vars(phi: Formula) -> tuple[set[str], set[str]]:
    """(string variables, integer variables) occurring in the formula."""
    if isinstance(phi, WordEq):
        return str_term_vars(phi.lhs) | str_term_vars(phi.rhs), set()
    if isinstance(phi, LenLeq):
        return len_term_vars(phi.term)
    if isinstance(phi, InRe):
        return str_term_vars(phi.term), set()
    if isinstance(phi, Not):
        return free_vars(phi.inner)
    svars: set[str] = set()
    ivars: set[str] = set()
    for p in phi.parts:
        s, i = free_vars(p)
        svars |= s
        ivars |= i
    return svars, ivars


def formula_letters(phi: Formula) -> set[str]:
    """All alphabet letters mentioned anywhere in the formula."""

    def term_letters(t: StrTerm) -> set[str]:
        if isinstance(t, Lit):
            return set(t.word)
        if isinstance(t, Var):
            return set()
        out: set[str] = set()
        for p in t.parts:
            out |= term_letters(p)
        return out

    if isinstance(phi, WordEq):
        return term_letters(phi.lhs) | term_letters(phi.rhs)
    if isinstance(phi, LenLeq):
        out = set()
        stack: list[LenTerm] = [phi.term]
        while stack:
            t = stack.pop()
            if isinstance(t, Len):
                out |= term_letters(t.term)
            elif isinstance(t, Sum):
                stack.extend(term for _, term in t.items)
        return out
    if isinstance(phi, InRe):
        return term_letters(phi.term) | regex_letters(phi.regex)
    if isinstance(phi, Not):
        return formula_letters(phi.inner)
    out = set()
    for p in phi.parts:
        out |= formula_letters(p)
    return out


class NameGen:
    """Fresh-name source that never collides with a set of taken names."""

    def __init__(self, taken: Iterable[str] = ()) -> None:
        self._taken = set(taken)
        self._counters: dict[str, int] = {}

    def fresh(self, prefix: str) -> str:
        n = self._counters.get(prefix, 0)
        while f"{prefix}{n}" in self._taken:
            n += 1
        self._counters[prefix] = n + 1
        name = f"{prefix}{n}"
        self._taken.add(name)
        return name

    def reserve(self, names: Iterable[str]) -> None:
        self._taken.update(names)
