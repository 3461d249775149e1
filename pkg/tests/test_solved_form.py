"""The word-equation rewriting engine and its solved forms."""

import random
from itertools import product

from helpers import _template_equation
from wordeq.paramwords import Const, ParamWord, Power, Unfixed, instantiate, param_word, parts_of
from wordeq.semantics import Assignment, eval_formula
from wordeq.solved_form import (
    OutOfFragment,
    SolvedForm,
    Unsat,
    apply_solved_form,
    is_solved_equation,
    render_solved_form,
    to_solved_form,
)
from wordeq.terms import Lit, Var, WordEq, concat, conj


def solve(*eqs, **kw):
    return to_solved_form(list(eqs), **kw)


def words_upto(sigma, n):
    out = [""]
    for ln in range(1, n + 1):
        out.extend("".join(t) for t in product(sigma, repeat=ln))
    return out


def sf_solutions(sf: SolvedForm, sigma: str, max_len: int) -> set[tuple[str, ...]]:
    """All instantiations whose bound words stay within max_len."""
    params = sorted({b.param for _, w in sf.bindings for b in w.blocks if isinstance(b, Power)})
    parts = sorted({p for _, w in sf.bindings for p in parts_of(w)})
    out = set()
    for pv in product(range(max_len + 1), repeat=len(params)):
        pmap = dict(zip(params, pv))
        for wv in product(words_upto(sigma, max_len), repeat=len(parts)):
            wmap = dict(zip(parts, wv))
            vals = tuple(instantiate(w, pmap, wmap) for _, w in sf.bindings)
            if all(len(v) <= max_len for v in vals):
                out.add(vals)
    return out


def brute_solutions(eqs, names, sigma, max_len) -> set[tuple[str, ...]]:
    phi = conj(*eqs)
    out = set()
    for combo in product(words_upto(sigma, max_len), repeat=len(names)):
        a = Assignment(dict(zip(names, combo)))
        if eval_formula(phi, a):
            out.add(combo)
    return out


def test_is_solved_equation():
    assert is_solved_equation(WordEq(Var("X"), concat(Lit("a"), Var("Y"))))
    assert is_solved_equation(WordEq(Var("X"), Lit("")))
    assert not is_solved_equation(WordEq(Var("X"), concat(Lit("a"), Var("X"))))
    assert not is_solved_equation(WordEq(concat(Var("X"), Lit("a")), Var("Y")))
    assert not is_solved_equation(WordEq(Lit("a"), Var("X")))


def test_definition_is_its_own_solved_form():
    # X = aYbZa stays a single binding with the other variables unfixed
    (sf,) = solve(WordEq(Var("X"), concat(Lit("a"), Var("Y"), Lit("b"), Var("Z"), Lit("a"))))
    m = sf.mapping()
    assert m["X"] == param_word(
        [Const("a"), Unfixed("Y"), Const("b"), Unfixed("Z"), Const("a")]
    )
    assert m["Y"] == ParamWord((Unfixed("Y"),))
    assert m["Z"] == ParamWord((Unfixed("Z"),))


def test_conjugate_equation_gives_power_family():
    # abX = Xba forces X = (ab)^i a
    (sf,) = solve(WordEq(concat(Lit("ab"), Var("X")), concat(Var("X"), Lit("ba"))))
    assert sf.mapping()["X"].blocks[:1] == (Power("ab", sf.mapping()["X"].blocks[0].param),)
    param = sf.mapping()["X"].blocks[0].param
    assert sf.mapping()["X"] == param_word([Power("ab", param), Const("a")])
    for i in range(5):
        w = instantiate(sf.mapping()["X"], {param: i})
        assert "ab" + w == w + "ba"


def test_crossing_pair_shares_one_parameter():
    # Xa = aY and Ya = Xa make X and Y the same power of a
    forms = solve(
        WordEq(concat(Var("X"), Lit("a")), concat(Lit("a"), Var("Y"))),
        WordEq(concat(Var("Y"), Lit("a")), concat(Var("X"), Lit("a"))),
    )
    assert isinstance(forms, list)
    seen = set()
    for sf in forms:
        x, y = sf.mapping()["X"], sf.mapping()["Y"]
        assert x == y
        assert len(x.blocks) == 1 and isinstance(x.blocks[0], Power)
        assert x.blocks[0].base == "a"
        seen.add(x.blocks[0].param)
    # one shared parameter per form: X and Y grow in lockstep
    for sf in forms:
        p = sf.mapping()["X"].blocks[0].param
        for i in range(4):
            v = instantiate(sf.mapping()["X"], {p: i})
            assert v == "a" * i


def test_ground_contradiction_is_unsat():
    assert isinstance(solve(WordEq(Lit("a"), Lit("b"))), Unsat)
    assert isinstance(
        solve(WordEq(concat(Lit("a"), Var("X")), concat(Lit("b"), Var("X")))), Unsat
    )
    # X = aX has no finite solution
    assert isinstance(solve(WordEq(Var("X"), concat(Lit("a"), Var("X")))), Unsat)


def test_crossed_variables_leave_the_fragment():
    res = solve(
        WordEq(
            concat(Var("X"), Lit("ab"), Var("Y")),
            concat(Var("Y"), Lit("ba"), Var("X")),
        )
    )
    assert isinstance(res, OutOfFragment)
    assert res.reason == "no rule applies to the system"


def test_trivial_systems():
    (sf,) = solve(WordEq(Var("X"), Var("X")))
    assert sf.mapping()["X"] == ParamWord((Unfixed("X"),))
    (sf,) = solve(WordEq(Lit("ab"), Lit("ab")), variables=["X"])
    assert sf.mapping()["X"] == ParamWord((Unfixed("X"),))
    (sf,) = solve(WordEq(Var("X"), Lit("")))
    assert sf.mapping()["X"] == ParamWord(())


def test_chained_definitions_substitute_through():
    # abX = Xba with X = abY: Y must absorb the offset
    forms = solve(
        WordEq(concat(Lit("ab"), Var("X")), concat(Var("X"), Lit("ba"))),
        WordEq(Var("X"), concat(Lit("ab"), Var("Y"))),
    )
    assert isinstance(forms, list)
    # every instance still satisfies both equations
    for sf in forms:
        sols = sf_solutions(sf, "ab", 6)
        for x, y in sols if len(sf.bindings) == 2 else ():
            assert "ab" + x == x + "ba"
            assert x == "ab" + y


def test_render_solved_form():
    sf = SolvedForm(
        (
            ("X", param_word([Power("ab", "i0"), Const("a")])),
            ("Y", ParamWord((Unfixed("y"),))),
            ("Z", ParamWord(())),
        )
    )
    assert render_solved_form(sf) == 'X = (ab)^i0 a\nY = <y>\nZ = ""'


def test_apply_solved_form():
    sf = SolvedForm((("X", param_word([Power("a", "i")])),))
    w = apply_solved_form(sf, concat(Lit("b"), Var("X"), Lit("b")))
    assert w == param_word([Const("b"), Power("a", "i"), Const("b")])


def test_exact_solution_sets_on_random_systems():
    # the union of solved-form instances equals the brute-force solution set
    rng = random.Random(401)
    oof = 0
    for _ in range(60):
        eqs = []
        names: set[str] = set()
        for _ in range(rng.randint(1, 2)):
            eq, vs = _template_equation(rng, "ab")
            eqs.append(eq)
            names.update(vs)
        res = to_solved_form(eqs, variables=names)
        order = sorted(names)
        want = brute_solutions(eqs, order, "ab", 3)
        if isinstance(res, OutOfFragment):
            oof += 1
            continue
        if isinstance(res, Unsat):
            assert want == set(), eqs
            continue
        got = set()
        for sf in res:
            assert [v for v, _ in sf.bindings] == order
            got |= sf_solutions(sf, "ab", 3)
        assert got == want, eqs
    assert oof <= 10


def test_forms_cover_long_solutions_too():
    # abX = Xba solutions of every length up to 9 are hit exactly
    (sf,) = solve(WordEq(concat(Lit("ab"), Var("X")), concat(Var("X"), Lit("ba"))))
    got = sf_solutions(sf, "ab", 9)
    want = brute_solutions(
        [WordEq(concat(Lit("ab"), Var("X")), concat(Var("X"), Lit("ba")))], ["X"], "ab", 9
    )
    assert got == want
    assert ("ababa",) in got


def test_branch_budget_reports_out_of_fragment():
    eqs = [
        WordEq(concat(Var("X"), Lit("a"), Var("Y")), concat(Var("Y"), Lit("a"), Var("X")))
    ]
    res = to_solved_form(eqs, max_branches=1)
    assert isinstance(res, OutOfFragment)
