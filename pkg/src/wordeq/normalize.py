"""Boolean normalization: disjunctive normal form and removal of negations.

Negated atoms are rewritten into positive ones:

* a negated length bound flips into a bound on the negated term;
* a negated regex membership becomes membership in the complement
  language over the problem alphabet;
* a negated word equation splits into "lengths differ" plus, for every
  ordered pair of distinct letters, "common prefix then a mismatch".
"""

from __future__ import annotations

from dataclasses import dataclass

from .automata import dfa_complement, dfa_to_regex, regex_to_dfa
from .errors import ResourceExhausted
from .terms import (
    And,
    Formula,
    InRe,
    Len,
    LenLeq,
    Lit,
    NameGen,
    Not,
    Or,
    Var,
    WordEq,
    concat,
    scale,
    sum_of,
)

Atom = WordEq | LenLeq | InRe


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool


def _nnf(phi: Formula, positive: bool) -> Formula:
    if isinstance(phi, Not):
        return _nnf(phi.inner, not positive)
    if isinstance(phi, And):
        parts = tuple(_nnf(p, positive) for p in phi.parts)
        return And(parts) if positive else Or(parts)
    if isinstance(phi, Or):
        parts = tuple(_nnf(p, positive) for p in phi.parts)
        return Or(parts) if positive else And(parts)
    return phi if positive else Not(phi)


def to_dnf(phi: Formula, max_disjuncts: int = 100_000) -> list[list[Literal]]:
    """Disjunction of conjunctions of literals, equivalent to ``phi``."""

    def walk(f: Formula) -> list[list[Literal]]:
        if isinstance(f, Or):
            out: list[list[Literal]] = []
            for p in f.parts:
                out.extend(walk(p))
                if len(out) > max_disjuncts:
                    raise ResourceExhausted("disjunctive normal form too large")
            return out
        if isinstance(f, And):
            acc: list[list[Literal]] = [[]]
            for p in f.parts:
                branch = walk(p)
                acc = [c + d for c in acc for d in branch]
                if len(acc) > max_disjuncts:
                    raise ResourceExhausted("disjunctive normal form too large")
            return acc
        if isinstance(f, Not):
            assert isinstance(f.inner, (WordEq, LenLeq, InRe))
            return [[Literal(f.inner, False)]]
        assert isinstance(f, (WordEq, LenLeq, InRe))
        return [[Literal(f, True)]]

    return walk(_nnf(phi, True))


def _negate_word_eq(atom: WordEq, alphabet: str, gen: NameGen) -> list[list[Atom]]:
    s, t = atom.lhs, atom.rhs
    shorter = LenLeq(sum_of((1, Len(s)), (-1, Len(t))), -1)
    longer = LenLeq(sum_of((1, Len(t)), (-1, Len(s))), -1)
    out: list[list[Atom]] = [[shorter], [longer]]
    prefix = Var(gen.fresh("P"))
    left_tail = Var(gen.fresh("U"))
    right_tail = Var(gen.fresh("V"))
    for a in alphabet:
        for b in alphabet:
            if a == b:
                continue
            out.append(
                [
                    WordEq(s, concat(prefix, Lit(a), left_tail)),
                    WordEq(t, concat(prefix, Lit(b), right_tail)),
                ]
            )
    return out


def eliminate_negations(
    conjunct: list[Literal], alphabet: str, gen: NameGen
) -> list[list[Atom]]:
    """Turn a conjunction of literals into equivalent positive conjunctions.

    The result is a disjunction: the conjunction of the input literals is
    satisfiable (over words in the given alphabet) iff some returned
    conjunction of positive atoms is.
    """
    alternatives: list[list[list[Atom]]] = []
    for lit in conjunct:
        if lit.positive:
            alternatives.append([[lit.atom]])
            continue
        atom = lit.atom
        if isinstance(atom, LenLeq):
            # not (t <= c)  <=>  t >= c + 1  <=>  -t <= -c - 1
            flipped = LenLeq(scale(atom.term, -1), -atom.bound - 1)
            alternatives.append([[flipped]])
        elif isinstance(atom, InRe):
            complement = dfa_complement(regex_to_dfa(atom.regex, alphabet))
            r = dfa_to_regex(complement)
            if r is None:
                # complement empty: the negated membership can never hold
                return []
            alternatives.append([[InRe(atom.term, r)]])
        else:
            assert isinstance(atom, WordEq)
            alternatives.append(_negate_word_eq(atom, alphabet, gen))

    out: list[list[Atom]] = [[]]
    for alts in alternatives:
        out = [acc + choice for acc in out for choice in alts]
    return out
