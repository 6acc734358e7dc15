import pytest
from hypothesis import given
import hypothesis.strategies as st

from sat2tri import formula as fm
from conftest import EXAMPLE_Q, cnf_trees


def test_example_formula_length_and_models():
    f = fm.parse_expr(EXAMPLE_Q)
    assert fm.length(f) == 12
    assert fm.variables(f) == ["a", "c", "b"]
    models = fm.brute_force_sat(f)
    assert len(models) == 4
    assert {"a": True, "c": False, "b": True} in models


def test_precedence_and_aliases():
    assert fm.parse_expr("a | b & c") == fm.Or(fm.Var("a"), fm.And(fm.Var("b"), fm.Var("c")))
    assert fm.parse_expr("¬a ∨ b") == fm.parse_expr("!a | b")
    assert fm.parse_expr("a & b & c") == fm.And(fm.And(fm.Var("a"), fm.Var("b")), fm.Var("c"))


def test_syntax_error_offset():
    with pytest.raises(fm.FormulaSyntaxError) as err:
        fm.parse_expr("a & (b")
    assert err.value.offset == 6
    assert "expected ')'" in str(err.value)
    with pytest.raises(fm.FormulaSyntaxError):
        fm.parse_expr("a $ b")


def test_not_cnf_rejected():
    with pytest.raises(fm.NotCNFError) as err:
        fm.normalize_cnf(fm.parse_expr("~(a | b)"))
    assert "~(a | b)" in str(err.value)
    with pytest.raises(fm.NotCNFError):
        fm.normalize_cnf(fm.parse_expr("(a & b) | c"))
    with pytest.raises(fm.NotCNFError):
        fm.normalize_cnf(fm.parse_expr("~~a"))


def test_dimacs_roundtrip_and_errors():
    f = fm.parse_dimacs("c demo\np cnf 3 2\n1 -2 0\n2 3 0\n")
    assert fm.to_expr(f) == "(x1 | ~x2) & (x2 | x3)"
    assert fm.to_dimacs(f) == "p cnf 3 2\n1 -2 0\n2 3 0\n"
    for bad in ["1 2 0\n", "p cnf 2 1\n3 0\n", "p cnf 2 2\n1 0\n", "p cnf 2 1\n0\n"]:
        with pytest.raises(ValueError):
            fm.parse_dimacs(bad)


def test_parse_formula_detects_format():
    assert fm.parse_formula("p cnf 1 1\n1 0\n") == fm.Var("x1")
    assert fm.parse_formula("a\n") == fm.Var("a")


def test_enumerate_cnf_counts():
    counts = [sum(1 for f in fm.enumerate_cnf("ab", L) if fm.length(f) == L) for L in range(1, 6)]
    assert counts == [2, 2, 8, 16, 56]
    assert all(fm.length(f) <= 5 for f in fm.enumerate_cnf("ab", 5))


@given(cnf_trees())
def test_expr_roundtrip(f):
    assert fm.parse_expr(fm.to_expr(f)) == f
    assert fm.parse_expr(fm.to_expr(f, unicode=True)) == f
    assert fm.normalize_cnf(fm.normalize_cnf(f)) == f


@given(cnf_trees())
def test_length_counts_symbols(f):
    text = fm.to_expr(f)
    symbols = sum(text.count(ch) for ch in "~&|") + sum(1 for tok in text.replace("(", " ").replace(")", " ").replace("~", " ").split() if tok.isalpha())
    assert fm.length(f) == symbols


@given(cnf_trees())
def test_dimacs_preserves_models(f):
    g = fm.parse_dimacs(fm.to_dimacs(f))
    rename = {name: f"x{i + 1}" for i, name in enumerate(fm.variables(f))}
    got = [{k: m[rename[k]] for k in rename} for m in fm.brute_force_sat(g)]
    assert got == fm.brute_force_sat(f)


def test_bipartition_compiler_example():
    P = [fm.Bipartition({1}, {2, 3}, 3), fm.Bipartition({1, 2}, {3}, 3)]
    f = fm.compile_bipartitions(P, 3)
    got = {fm.assignment_to_bipartition(m, 3) for m in fm.brute_force_sat(f)}
    assert got == set(P)
    assert str(P[0]) == "1|23"


def test_bipartition_full_set_is_tautology():
    f = fm.compile_bipartitions(fm.all_bipartitions(2), 2)
    assert fm.to_expr(f) == "(v1 | ~v1) & (v2 | ~v2)"
    assert len(fm.brute_force_sat(f)) == 4


def test_bipartition_validation():
    with pytest.raises(ValueError):
        fm.Bipartition({1}, {1, 2}, 2)
    with pytest.raises(ValueError):
        fm.Bipartition({1}, set(), 2)
    with pytest.raises(ValueError):
        fm.compile_bipartitions([], 2)


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.sampled_from(fm.all_bipartitions(n)), min_size=1))))
def test_bipartition_models_biject(args):
    n, P = args
    f = fm.compile_bipartitions(P, n)
    models = fm.brute_force_sat(f)
    assert len(models) == len(P)
    assert {fm.assignment_to_bipartition(m, n) for m in models} == P


@given(st.lists(st.lists(st.tuples(st.sampled_from("abc"), st.booleans()), min_size=1, max_size=4), min_size=1, max_size=4), st.randoms(use_true_random=False))
def test_length_ignores_association(cls, rng):
    def chain(items, op):
        items = list(items)
        while len(items) > 1:
            i = rng.randrange(len(items) - 1)
            items[i : i + 2] = [op(items[i], items[i + 1])]
        return items[0]

    lit = lambda n, pos: fm.Var(n) if pos else fm.Not(fm.Var(n))
    f = chain([chain([lit(*x) for x in c], fm.Or) for c in cls], fm.And)
    g = fm.parse_expr(" & ".join("(" + " | ".join(("" if p else "~") + n for n, p in c) + ")" for c in cls))
    assert fm.length(fm.normalize_cnf(f)) == fm.length(g)
    assert fm.clauses(f) == fm.clauses(g)
