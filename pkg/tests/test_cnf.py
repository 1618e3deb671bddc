import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from obsmorph.cnf import (ALL_SIGNS_UNSAT, SAMPLE_FORMULA, UNSAT, Assignment, CnfError, CnfFormula, dpll_solve,
                          parse_dimacs, random_formula, serialize_dimacs)


def brute_force_sat(f: CnfFormula) -> bool:
    return any(f.satisfied_by(Assignment(vals)) for vals in itertools.product((False, True), repeat=f.n))


formulas = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.tuples(*[st.integers(1, n).flatmap(lambda v: st.sampled_from((v, -v)))] * 3),
                       max_size=8).map(lambda cs: CnfFormula(n, tuple(cs))))


def test_parse_single_clause():
    f = parse_dimacs("p cnf 3 1\n1 2 -3 0")
    assert (f.n, f.m, f.clauses) == (3, 1, ((1, 2, -3),))


def test_two_literal_clause_is_rejected_with_line():
    with pytest.raises(CnfError, match="line 2.*3-CNF required"):
        parse_dimacs("p cnf 3 1\n1 2 0\n")


def test_sample_formula_text():
    text = "c sample\np cnf 3 3\n2 1 -3 0\n-1 3 2 0\n-3 -2 -1 0\n"
    assert parse_dimacs(text) == SAMPLE_FORMULA


@pytest.mark.parametrize("text, msg", [
    ("1 2 3 0\n", "before problem line"),
    ("p cnf 2 1\n1 2 3 0\n", "exceeds"),
    ("p cnf x 1\n", "non-integer"),
    ("p cnf 3 2\n1 2 3 0\n", "declares 2 clauses"),
    ("p cnf 3 1\n1 a 3 0\n", "bad literal"),
    ("", "missing"),
])
def test_malformed_dimacs(text, msg):
    with pytest.raises(CnfError, match=msg):
        parse_dimacs(text)


def test_satlib_end_marker_and_trailing_clause():
    f = parse_dimacs("p cnf 3 2\n1 2 3 0\n-1 -2 -3\n%\n0\n")
    assert f.clauses == ((1, 2, 3), (-1, -2, -3))


@given(formulas)
def test_dimacs_round_trip(f):
    assert parse_dimacs(serialize_dimacs(f)) == f


@settings(max_examples=200)
@given(formulas)
def test_dpll_agrees_with_brute_force(f):
    res = dpll_solve(f)
    if res == UNSAT:
        assert not brute_force_sat(f)
    else:
        assert f.satisfied_by(res)


def test_all_signs_formula_is_unsat():
    assert dpll_solve(ALL_SIGNS_UNSAT) == UNSAT


def test_assignment_must_be_total():
    with pytest.raises(CnfError, match="not total"):
        Assignment.from_map(3, {1: True, 3: False})


def test_random_formula_shape():
    f = random_formula(random.Random(3), 4, 6)
    assert f.n == 4 and f.m == 6 and all(1 <= abs(x) <= 4 for c in f.clauses for x in c)
