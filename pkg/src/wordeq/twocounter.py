"""Two-counter machines and their reduction to universally quantified
word-equation sentences.

A machine has a read-only input head (clamped at both ends of the input)
and two counters.  A transition row is keyed by the current state, the
letter under the head, and the zero-tests of both counters; it names the
successor state, which track to move (``in`` for the head, ``stor1`` /
``stor2`` for the counters), and the direction (on a counter, ``R`` means
increment and ``L`` decrement, clamped at zero).

A run accepts when it reaches a final state with the head back on the
first letter and both counters zero; that check happens before any rule
lookup.  Runs are deterministic, so a revisited configuration means the
machine loops forever.

``encode`` turns a machine plus input word into a prenex sentence
``forall S exists S1..S4 U V . body`` over word equations whose
counterexamples (values of S for which no witness exists) are exactly the
encodings of accepting runs.  Each configuration becomes one composite
letter (state and head position) followed by unary counter words ``b^i
c^j``; the body is a disjunction of defect patterns: bad start, bad end,
malformed counter blocks, and step violations.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from .errors import ResourceExhausted, WordeqError
from .normalize import to_dnf
from .solved_form import Const, Side, VarItem, side, _match_pattern
from .terms import (
    And,
    Concat,
    Formula,
    Lit,
    Not,
    Or,
    StrTerm,
    Var,
    WordEq,
    concat,
    conj,
    disj,
    free_vars,
)


class NondeterministicDelta(WordeqError):
    """Two rules share the same (state, letter, zero-tests) key."""


class MissingTransition(WordeqError):
    """No rule applies to a reached configuration (strict simulation only)."""


class EncodingCapExceeded(WordeqError):
    """The machine is too large for the sentence encoding."""


TRACKS = ("in", "stor1", "stor2")
MOVES = ("L", "R")

DeltaKey = tuple[str, str, str, str]  # state, letter, counter-1 tag, counter-2 tag
DeltaVal = tuple[str, str, str]  # next state, track, move


@dataclass(frozen=True)
class TwoCounterMachine:
    states: tuple[str, ...]
    input_alphabet: tuple[str, ...]
    initial: str
    finals: frozenset[str]
    rules: tuple[tuple[DeltaKey, DeltaVal], ...]

    def __post_init__(self) -> None:
        assert len(set(self.states)) == len(self.states)
        assert len(set(self.input_alphabet)) == len(self.input_alphabet)
        assert self.initial in self.states
        assert self.finals <= set(self.states)
        seen: set[DeltaKey] = set()
        letters = set(self.input_alphabet) | {"end"}
        for (q, a, t1, t2), (q2, track, move) in self.rules:
            if (q, a, t1, t2) in seen:
                raise NondeterministicDelta(f"duplicate rule for {(q, a, t1, t2)}")
            seen.add((q, a, t1, t2))
            assert q in self.states and q2 in self.states
            assert a in letters
            assert t1 in ("Z", "b") and t2 in ("Z", "c")
            assert track in TRACKS and move in MOVES

    @cached_property
    def delta(self) -> dict[DeltaKey, DeltaVal]:
        return dict(self.rules)


@dataclass(frozen=True)
class MachineId:
    """One configuration: state, head position, and both counter values."""

    state: str
    head: int
    counter1: int
    counter2: int

    def __post_init__(self) -> None:
        assert self.head >= 0 and self.counter1 >= 0 and self.counter2 >= 0


@dataclass(frozen=True)
class Accepted:
    steps: int
    history: tuple[MachineId, ...]


@dataclass(frozen=True)
class Rejected:
    steps: int
    reason: str


@dataclass(frozen=True)
class StillRunning:
    steps: int


def simulate(
    m: TwoCounterMachine,
    word: tuple[str, ...] | list[str],
    max_steps: int = 10_000,
    raise_on_stuck: bool = False,
) -> Accepted | Rejected | StillRunning:
    """Run the machine on a nonempty input word."""
    w = tuple(word)
    assert len(w) >= 1, "the input word must be nonempty"
    assert all(a in m.input_alphabet for a in w)
    config = MachineId(m.initial, 0, 0, 0)
    seen = {config}
    history = [config]
    for step in range(max_steps):
        if (
            config.state in m.finals
            and config.head == 0
            and config.counter1 == 0
            and config.counter2 == 0
        ):
            return Accepted(steps=step, history=tuple(history))
        key = (
            config.state,
            w[config.head],
            "b" if config.counter1 > 0 else "Z",
            "c" if config.counter2 > 0 else "Z",
        )
        row = m.delta.get(key)
        if row is None:
            if raise_on_stuck:
                raise MissingTransition(f"no rule for {key}")
            return Rejected(steps=step, reason=f"no rule for {key}")
        q2, track, move = row
        d = 1 if move == "R" else -1
        h, c1, c2 = config.head, config.counter1, config.counter2
        if track == "in":
            h = min(max(h + d, 0), len(w) - 1)
        elif track == "stor1":
            c1 = max(c1 + d, 0)
        else:
            c2 = max(c2 + d, 0)
        config = MachineId(q2, h, c1, c2)
        if config in seen:
            return Rejected(steps=step + 1, reason="revisited configuration")
        seen.add(config)
        history.append(config)
    return StillRunning(steps=max_steps)


# ---------------------------------------------------------------------------
# configuration letters

# Counter words use 'b' and 'c', so configuration letters must avoid both.
_LETTER_POOL = "".join(
    ch for ch in string.digits + string.ascii_uppercase + string.ascii_lowercase
    if ch not in "bc"
)


def id_letters(
    m: TwoCounterMachine, word_len: int
) -> tuple[dict[tuple[str, int], str], tuple[tuple[str, str, int], ...]]:
    """Assign one letter per (state, head position) pair, plus a legend."""
    assert word_len >= 1
    pairs = [(q, h) for q in m.states for h in range(word_len)]
    if len(pairs) > len(_LETTER_POOL):
        raise EncodingCapExceeded(
            f"{len(pairs)} configuration letters exceed the pool of {len(_LETTER_POOL)}"
        )
    mapping = {pair: _LETTER_POOL[i] for i, pair in enumerate(pairs)}
    legend = tuple((mapping[(q, h)], q, h) for (q, h) in pairs)
    return mapping, legend


def encode_history(
    m: TwoCounterMachine, word: tuple[str, ...] | list[str], history: Sequence[MachineId]
) -> str:
    """Encode a run as one configuration letter plus unary counters per step."""
    w = tuple(word)
    mapping, _ = id_letters(m, len(w))
    out = []
    for c in history:
        assert c.head < len(w)
        out.append(mapping[(c.state, c.head)] + "b" * c.counter1 + "c" * c.counter2)
    return "".join(out)


# ---------------------------------------------------------------------------
# the sentence


@dataclass(frozen=True)
class Sentence:
    """Prenex sentence: for all universals, there exist existentials with body."""

    universals: tuple[str, ...]
    existentials: tuple[str, ...]
    body: Formula
    alphabet: str
    legend: tuple[tuple[str, str, int], ...]


def _clamp(x: int, lo: int, hi: int) -> int:
    return min(max(x, lo), hi)


def encode(
    m: TwoCounterMachine, word: tuple[str, ...] | list[str], cap: int = 100_000
) -> Sentence:
    """Build the sentence whose counterexamples are the accepting run encodings.

    The body is a disjunction of defect clauses over the universal S.  A string
    S admits no witness exactly when it spells out, block by block, the
    machine's accepting run on ``word``: first block is the initial
    configuration with zero counters, consecutive blocks are related by the
    transition rules, and the final block is an accepting configuration.
    """
    w = tuple(word)
    assert len(w) >= 1, "the input word must be nonempty"
    assert all(a in m.input_alphabet for a in w)
    n = len(w)
    mapping, legend = id_letters(m, n)
    sigma0 = [mapping[(q, h)] for q in m.states for h in range(n)]
    alphabet = "".join(sigma0) + "bc"

    S, S1, S2, S3, S4 = Var("S"), Var("S1"), Var("S2"), Var("S3"), Var("S4")
    U, V = Var("U"), Var("V")
    b, c = Lit("b"), Lit("c")
    init = mapping[(m.initial, 0)]
    finals0 = {mapping[(q, 0)] for q in m.finals}

    # Bad start: S empty, wrong first letter, or nonzero initial counters.
    bad_start: list[Formula] = [WordEq(S, Lit(""))]
    bad_start += [
        WordEq(S, concat(Lit(e), S1)) for e in alphabet if e != init
    ]
    bad_start += [WordEq(S, concat(Lit(init), b, S1)), WordEq(S, concat(Lit(init), c, S1))]

    # Bad end: the last letter must be an accepting configuration letter
    # (a trailing b/c means nonzero counters, a non-final letter a bad state
    # or a head away from the left end).
    bad_end: list[Formula] = [WordEq(S, Lit(""))]
    bad_end += [WordEq(S, concat(S1, Lit(e))) for e in alphabet if e not in finals0]

    # Malformed counter block: a 'b' may never follow a 'c'.
    bad_block = disj(WordEq(S, Lit("")), WordEq(S, concat(S1, c, b, S4)))

    # Step defects.  For every configuration context (state, head, zero-tests)
    # anchor the current block as letter + b-run + c-run; U and V stand for
    # the tails of those runs and are forced into b* / c* by the commutation
    # equations conjoined below.
    violations: list[Formula] = []
    for q in m.states:
        for h in range(n):
            for g1 in (False, True):
                for g2 in (False, True):
                    cur = mapping[(q, h)]
                    pat: list[StrTerm] = [Lit(cur)]
                    if g1:
                        pat += [b, U]
                    if g2:
                        pat += [c, V]
                    row = m.delta.get((q, w[h], "b" if g1 else "Z", "c" if g2 else "Z"))
                    if row is None:
                        # Stuck context: any further block is a defect.
                        violations += [
                            WordEq(S, concat(S1, *pat, Lit(s), S4)) for s in sigma0
                        ]
                        continue
                    q3, track, move = row
                    d = 1 if move == "R" else -1
                    h2 = _clamp(h + d, 0, n - 1) if track == "in" else h
                    nxt = Lit(mapping[(q3, h2)])
                    # Expected counter words of the successor block.
                    if track == "stor1":
                        run1 = ([b, b, U] if g1 else [b]) if move == "R" else ([U] if g1 else [])
                    else:
                        run1 = [b, U] if g1 else []
                    if track == "stor2":
                        run2 = ([c, c, V] if g2 else [c]) if move == "R" else ([V] if g2 else [])
                    else:
                        run2 = [c, V] if g2 else []
                    # Wrong successor letter.
                    violations.append(
                        conj(
                            disj(*[WordEq(S2, Lit(s)) for s in sigma0]),
                            WordEq(S, concat(S1, *pat, S2, S4)),
                            Not(WordEq(S2, nxt)),
                        )
                    )
                    # b-run too long / too short.
                    violations.append(WordEq(S, concat(S1, *pat, nxt, *run1, b, S4)))
                    if run1:
                        violations.append(
                            conj(
                                WordEq(concat(*run1), concat(S2, b, S3)),
                                disj(
                                    WordEq(S, concat(S1, *pat, nxt, S2, c, S4)),
                                    *[
                                        WordEq(S, concat(S1, *pat, nxt, S2, Lit(s), S4))
                                        for s in sigma0
                                    ],
                                    WordEq(S, concat(S1, *pat, nxt, S2)),
                                ),
                            )
                        )
                    # c-run too long / too short (after an exact b-run).
                    violations.append(
                        WordEq(S, concat(S1, *pat, nxt, *run1, *run2, c, S4))
                    )
                    if run2:
                        violations.append(
                            conj(
                                WordEq(concat(*run2), concat(S2, c, S3)),
                                disj(
                                    *[
                                        WordEq(
                                            S, concat(S1, *pat, nxt, *run1, S2, Lit(s), S4)
                                        )
                                        for s in sigma0
                                    ],
                                    WordEq(S, concat(S1, *pat, nxt, *run1, S2)),
                                ),
                            )
                        )

    clauses = len(bad_start) + len(bad_end) + 2 + len(violations)
    if clauses > cap:
        raise EncodingCapExceeded(f"{clauses} defect clauses exceed the cap of {cap}")

    step_defects = conj(
        disj(*violations),
        WordEq(concat(U, b), concat(b, U)),
        WordEq(concat(V, c), concat(c, V)),
    )
    body = disj(*bad_start, *bad_end, bad_block, step_defects)
    return Sentence(
        universals=("S",),
        existentials=("S1", "S2", "S3", "S4", "U", "V"),
        body=body,
        alphabet=alphabet,
        legend=legend,
    )


# ---------------------------------------------------------------------------
# removing negations


def _formula_str_vars(phi: Formula) -> set[str]:
    return free_vars(phi)[0]


def positivize(s: Sentence) -> Sentence:
    """Replace each negated equation by an equivalent positive disjunction.

    Only negations of the form ``not (X = "u")`` appear; each becomes the
    exact complement: X is a proper prefix of u, or differs from u at some
    position, or properly extends u.  The trailing free piece uses an
    existential that is not otherwise constrained alongside the negation,
    or a fresh one appended to the existential block.
    """
    extra: list[str] = []
    names_in_use = set(s.universals) | set(s.existentials)

    def pick_helper(taken: set[str]) -> Var:
        for name in s.existentials + tuple(extra):
            if name not in taken:
                return Var(name)
        name = f"H{len(extra)}"
        while name in names_in_use:
            name = f"H{len(extra) + len(names_in_use)}"
        extra.append(name)
        names_in_use.add(name)
        return Var(name)

    def complement(eq: WordEq, taken: set[str]) -> Formula:
        lhs, rhs = eq.lhs, eq.rhs
        if isinstance(rhs, Var) and isinstance(lhs, Lit):
            lhs, rhs = rhs, lhs
        assert isinstance(lhs, Var) and isinstance(rhs, Lit), (
            "only variable-vs-constant negations occur in encoded bodies"
        )
        u = rhs.word
        h = pick_helper(taken | {lhs.name})
        options: list[Formula] = [WordEq(lhs, Lit(u[:k])) for k in range(len(u))]
        for k in range(len(u)):
            options += [
                WordEq(lhs, concat(Lit(u[:k] + a), h))
                for a in s.alphabet
                if a != u[k]
            ]
        options += [WordEq(lhs, concat(Lit(u + a), h)) for a in s.alphabet]
        return disj(*options)

    def rewrite(phi: Formula, active: set[str]) -> Formula:
        if isinstance(phi, WordEq):
            return phi
        if isinstance(phi, Not):
            assert isinstance(phi.inner, WordEq)
            return complement(phi.inner, active)
        if isinstance(phi, Or):
            return Or(tuple(rewrite(p, active) for p in phi.parts))
        assert isinstance(phi, And)
        parts = list(phi.parts)
        var_sets = [_formula_str_vars(p) for p in parts]
        out = []
        for i, part in enumerate(parts):
            others = set().union(*(var_sets[j] for j in range(len(parts)) if j != i))
            new = rewrite(part, active | others)
            # A helper introduced here is constrained; siblings must avoid it.
            var_sets[i] = _formula_str_vars(new)
            out.append(new)
        return And(tuple(out))

    new_body = rewrite(s.body, set())
    if new_body == s.body and not extra:
        return s
    return Sentence(
        universals=s.universals,
        existentials=s.existentials + tuple(extra),
        body=new_body,
        alphabet=s.alphabet,
        legend=s.legend,
    )


# ---------------------------------------------------------------------------
# bounded validity


@dataclass(frozen=True)
class Counterexample:
    word: str


@dataclass(frozen=True)
class NoCounterexampleUpTo:
    max_len: int


def _term_side(t: StrTerm) -> Side:
    if isinstance(t, Lit):
        return side((Const(t.word),)) if t.word else ()
    if isinstance(t, Var):
        return (VarItem(t.name),)
    assert isinstance(t, Concat)
    items: list[Const | VarItem] = []
    for p in t.parts:
        items.extend(_term_side(p))
    return side(tuple(items))


_Eq = tuple[Side, Side, bool]  # lhs, rhs, positive


def _subst(s: Side, env: dict[str, str]) -> Side:
    if not any(isinstance(it, VarItem) and it.name in env for it in s):
        return s
    items: list[Const | VarItem] = []
    for it in s:
        if isinstance(it, VarItem) and it.name in env:
            if env[it.name]:
                items.append(Const(env[it.name]))
        else:
            items.append(it)
    return side(tuple(items))


def _ground(s: Side) -> str | None:
    if len(s) == 0:
        return ""
    if len(s) == 1 and isinstance(s[0], Const):
        return s[0].word
    return None


def _iter_words(alphabet: str, max_len: int) -> Iterator[str]:
    """All words up to a length, shortest first, letters in alphabet order."""
    from itertools import product

    for ln in range(max_len + 1):
        for tup in product(alphabet, repeat=ln):
            yield "".join(tup)


def _conjunct_sat(
    eqs: list[_Eq], env: dict[str, str], alphabet: str, bound: int, budget: list[int]
) -> bool:
    """Does some assignment of words of length <= bound satisfy the conjunct?"""
    budget[0] -= 1
    if budget[0] <= 0:
        raise ResourceExhausted("bounded validity check budget exceeded")
    pending: list[_Eq] = []
    for lhs, rhs, positive in eqs:
        ls, rs = _subst(lhs, env), _subst(rhs, env)
        lg, rg = _ground(ls), _ground(rs)
        if positive and lg is not None and rg is not None:
            if lg != rg:
                return False
            continue
        if not positive and lg is not None and rg is not None:
            if lg == rg:
                return False
            continue
        pending.append((ls, rs, positive))
    if not pending:
        return True
    # Solve a positive equation with one constant side by pattern matching.
    for i, (lhs, rhs, positive) in enumerate(pending):
        if not positive:
            continue
        for pattern, target in ((lhs, _ground(rhs)), (rhs, _ground(lhs))):
            if target is None:
                continue
            rest = pending[:i] + pending[i + 1 :]
            matches = _match_pattern(pattern, target, cap=100_000)
            if matches is None:
                raise ResourceExhausted("pattern match cap exceeded")
            for venv, penv in matches:
                assert not penv
                if _conjunct_sat(rest, {**env, **venv}, alphabet, bound, budget):
                    return True
            return False
    # No equation has a constant side: enumerate the first unbound variable.
    names: list[str] = []
    for lhs, rhs, _ in pending:
        for it in lhs + rhs:
            if isinstance(it, VarItem) and it.name not in names:
                names.append(it.name)
    # Identical sides can never be told apart, so a lone negation on them fails.
    if all(not positive and lhs == rhs for lhs, rhs, positive in pending):
        return False
    name = names[0]
    for word in _iter_words(alphabet, bound):
        if _conjunct_sat(pending, {**env, name: word}, alphabet, bound, budget):
            return True
    return False


def _compiled_body(s: Sentence) -> list[list[_Eq]]:
    conjuncts = []
    for literals in to_dnf(s.body):
        eqs: list[_Eq] = []
        for lit in literals:
            assert isinstance(lit.atom, WordEq), "sentence bodies hold equations only"
            eqs.append((_term_side(lit.atom.lhs), _term_side(lit.atom.rhs), lit.positive))
        conjuncts.append(eqs)
    return conjuncts


def is_counterexample(s: Sentence, word: str, node_budget: int = 50_000_000) -> bool:
    """Does the word defeat every existential witness choice?"""
    assert len(s.universals) == 1, "one universal variable is supported"
    conjuncts = _compiled_body(s)
    budget = [node_budget]
    env = {s.universals[0]: word}
    return not any(
        _conjunct_sat(eqs, env, s.alphabet, len(word), budget) for eqs in conjuncts
    )


def _counterexamples(
    s: Sentence, max_len: int, limit: int | None, node_budget: int
) -> list[str]:
    assert len(s.universals) == 1, "one universal variable is supported"
    universal = s.universals[0]
    conjuncts = _compiled_body(s)
    budget = [node_budget]
    found: list[str] = []
    for word in _iter_words(s.alphabet, max_len):
        env = {universal: word}
        witnessed = any(
            _conjunct_sat(eqs, env, s.alphabet, len(word), budget) for eqs in conjuncts
        )
        if not witnessed:
            found.append(word)
            if limit is not None and len(found) >= limit:
                return found
    return found


def bounded_validity_check(
    s: Sentence, max_len: int, node_budget: int = 50_000_000
) -> Counterexample | NoCounterexampleUpTo:
    """Search for a universal value of length <= max_len with no witness.

    Witness words for the existential variables are searched up to the
    length of the universal value; in the encoded sentences every witness
    is a piece of it.
    """
    found = _counterexamples(s, max_len, limit=1, node_budget=node_budget)
    if found:
        return Counterexample(found[0])
    return NoCounterexampleUpTo(max_len)


def enumerate_counterexamples(
    s: Sentence, max_len: int, node_budget: int = 50_000_000
) -> list[str]:
    """All counterexamples up to the length bound, shortest first."""
    return _counterexamples(s, max_len, limit=None, node_budget=node_budget)
