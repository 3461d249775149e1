"""The satisfiability pipeline for word equations with length and
regular-expression constraints.

Every disjunct of the input's disjunctive normal form is processed as a
conjunction of positive atoms (negations are eliminated first): the word
equations are rewritten into solved forms, each solved form contributes
its implied length rows, length atoms translate to further rows, and each
membership atom constrains the power parameters of the constrained term
through exact automaton walks.  The resulting integer systems go to the
linear solver; a model there is turned back into concrete words and
re-checked against the original formula before being reported.

``check_sat_length_abstraction`` is a deliberately weakened variant that
replaces the exact membership analysis with the regex's length set.  It
can claim "sat" for unsatisfiable inputs — it exists to demonstrate why
the exact parameter analysis is necessary — so it only reports a verdict
string and never a model.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .automata import UPSet, param_membership, regex_to_dfa, upset_intersect, upset_is_empty
from .errors import LetterOutsideAlphabet, ResourceExhausted
from .lengths import (
    Row,
    implied_length_constraints,
    int_var,
    param_var,
    part_var,
    translate_len_atom,
    upset_rows,
)
from .lia import lia_sat
from .normalize import Atom, eliminate_negations, to_dnf
from .paramwords import ParamWord, Unfixed, has_unfixed, instantiate, params_of, parts_of
from .semantics import Assignment, eval_formula
from .solved_form import (
    OutOfFragment,
    SolvedForm,
    apply_solved_form,
    to_solved_form,
)
from .solved_form import Unsat as EqUnsat
from .terms import Formula, InRe, LenLeq, NameGen, WordEq, formula_letters, free_vars


@dataclass(frozen=True)
class Sat:
    strings: dict[str, str]
    ints: dict[str, int]

    def assignment(self) -> Assignment:
        return Assignment(dict(self.strings), dict(self.ints))


@dataclass(frozen=True)
class Unsat:
    pass


@dataclass(frozen=True)
class Unsupported:
    reason: str


Verdict = Sat | Unsat | Unsupported


def _regex_row_groups(
    atoms: list[InRe],
    sf: SolvedForm,
    alphabet: str,
    gen: NameGen,
) -> list[list[Row]] | None | str:
    """Row groups (a disjunction) encoding all membership atoms under a
    solved form.  None means some atom can never hold; a string is an
    unsupported-reason."""
    per_atom_boxes: list[list[dict[str, UPSet]]] = []
    for atom in atoms:
        pw = apply_solved_form(sf, atom.term)
        if has_unfixed(pw):
            parts = ", ".join(parts_of(pw))
            return f"membership constraint over unfixed parts ({parts})"
        boxes = param_membership(pw, regex_to_dfa(atom.regex, alphabet))
        if not boxes:
            return None
        per_atom_boxes.append(boxes)

    groups: list[list[Row]] = []
    for choice in product(*per_atom_boxes):
        merged: dict[str, UPSet] = {}
        dead = False
        for box in choice:
            for param, s in box.items():
                cur = merged.get(param)
                s2 = s if cur is None else upset_intersect(cur, s)
                if upset_is_empty(s2):
                    dead = True
                    break
                merged[param] = s2
            if dead:
                break
        if dead:
            continue
        per_param = [
            upset_rows({param_var(p): 1}, 0, s, gen)
            for p, s in sorted(merged.items())
        ]
        for combo in product(*per_param):
            groups.append([row for group in combo for row in group])
        if len(groups) > 20_000:
            raise ResourceExhausted("too many membership branches")
    if not groups:
        return None
    return groups


def _build_model(
    sf: SolvedForm,
    lia_model,
    svars: set[str],
    ivars: set[str],
    alphabet: str,
) -> tuple[dict[str, str], dict[str, int]] | None:
    params: dict[str, int] = {}
    part_words: dict[str, str] = {}
    for _, pw in sf.bindings:
        for p in params_of(pw):
            params[p] = lia_model.get(param_var(p), 0)
        for part in parts_of(pw):
            n = lia_model.get(part_var(part), 0)
            if n > 0 and not alphabet:
                return None  # no word of positive length exists
            part_words[part] = alphabet[0] * n if alphabet else ""
    mapping = sf.mapping()
    strings = {v: instantiate(mapping[v], params, part_words) for v in svars}
    ints = {n: lia_model.get(int_var(n), 0) for n in ivars}
    return strings, ints


def check_sat(
    phi: Formula,
    alphabet: str,
    budget: int = 8,
    max_branches: int = 10_000,
) -> Verdict:
    """Decide the formula over words in the given alphabet.

    Sound for both answers: a Sat verdict carries a model that was
    re-checked by evaluation, an Unsat verdict means every branch was
    refuted.  Inputs outside the supported fragment (or beyond the
    rewriting budgets) come back Unsupported instead of a guess.
    """
    stray = formula_letters(phi) - set(alphabet)
    if stray:
        raise LetterOutsideAlphabet(
            f"formula uses letters outside the alphabet: {sorted(stray)}"
        )
    svars, ivars = free_vars(phi)
    gen = NameGen(svars | ivars)
    blocked: str | None = None
    try:
        disjuncts = to_dnf(phi)
        for conjunct in disjuncts:
            for atoms in eliminate_negations(conjunct, alphabet, gen):
                outcome = _check_conjunct(atoms, svars, ivars, alphabet, gen, budget, max_branches)
                if isinstance(outcome, Sat):
                    assert eval_formula(phi, outcome.assignment())
                    return outcome
                if isinstance(outcome, Unsupported) and blocked is None:
                    blocked = outcome.reason
    except ResourceExhausted as exc:
        return Unsupported(str(exc))
    if blocked is not None:
        return Unsupported(blocked)
    return Unsat()


def _check_conjunct(
    atoms: list[Atom],
    svars: set[str],
    ivars: set[str],
    alphabet: str,
    gen: NameGen,
    budget: int,
    max_branches: int,
) -> Verdict:
    eqs = [a for a in atoms if isinstance(a, WordEq)]
    lens = [a for a in atoms if isinstance(a, LenLeq)]
    res = [a for a in atoms if isinstance(a, InRe)]

    solved = to_solved_form(eqs, variables=svars, gen=gen, budget=budget, max_branches=max_branches)
    if isinstance(solved, EqUnsat):
        return Unsat()
    if isinstance(solved, OutOfFragment):
        return Unsupported(solved.reason)

    blocked: str | None = None
    conjunct_svars = svars | {v for eq in eqs for v in free_vars(eq)[0]}
    for sf in solved:
        base_rows = implied_length_constraints(sf)
        base_rows.extend(translate_len_atom(a) for a in lens)
        groups = _regex_row_groups(res, sf, alphabet, gen)
        if groups is None:
            continue
        if isinstance(groups, str):
            if blocked is None:
                blocked = groups
            continue
        for extra in groups:
            model = lia_sat(base_rows + extra)
            if model is None:
                continue
            built = _build_model(sf, model, conjunct_svars, ivars, alphabet)
            if built is None:
                continue
            strings, ints = built
            visible = {v: strings[v] for v in svars}
            return Sat(visible, ints)
    if blocked is not None:
        return Unsupported(blocked)
    return Unsat()


def check_sat_length_abstraction(phi: Formula, alphabet: str) -> str:
    """Weakened pipeline: membership atoms only constrain lengths.

    Returns "sat", "unsat" or "unsupported".  The "sat" answers are not
    trustworthy — the length set of a regex keeps no letter positions —
    and no model is produced.  This exists as the control arm showing
    what the exact parameter analysis adds.
    """
    from .automata import length_set
    from .lengths import paramword_length

    stray = formula_letters(phi) - set(alphabet)
    if stray:
        raise LetterOutsideAlphabet(
            f"formula uses letters outside the alphabet: {sorted(stray)}"
        )
    svars, ivars = free_vars(phi)
    gen = NameGen(svars | ivars)
    blocked = False
    try:
        for conjunct in to_dnf(phi):
            for atoms in eliminate_negations(conjunct, alphabet, gen):
                eqs = [a for a in atoms if isinstance(a, WordEq)]
                lens = [a for a in atoms if isinstance(a, LenLeq)]
                res = [a for a in atoms if isinstance(a, InRe)]
                solved = to_solved_form(eqs, variables=svars, gen=gen)
                if isinstance(solved, EqUnsat):
                    continue
                if isinstance(solved, OutOfFragment):
                    blocked = True
                    continue
                for sf in solved:
                    rows = implied_length_constraints(sf)
                    rows.extend(translate_len_atom(a) for a in lens)
                    groups: list[list[Row]] = [[]]
                    feasible = True
                    for atom in res:
                        pw = apply_solved_form(sf, atom.term)
                        coeffs, const = paramword_length(pw)
                        lengths = length_set(regex_to_dfa(atom.regex, alphabet))
                        alts = upset_rows(coeffs, const, lengths, gen)
                        if not alts:
                            feasible = False
                            break
                        groups = [g + alt for g in groups for alt in alts]
                    if not feasible:
                        continue
                    for extra in groups:
                        if lia_sat(rows + extra) is not None:
                            return "sat"
    except ResourceExhausted:
        return "unsupported"
    return "unsupported" if blocked else "unsat"
