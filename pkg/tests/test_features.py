"""Feature expressions, products and the satisfiability backends."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from feta import (
    FALSE,
    TRUE,
    And,
    CrossCheckBackend,
    DpllBackend,
    EnumerationBackend,
    FeatureSpace,
    Iff,
    Implies,
    Not,
    Or,
    Product,
    ResourceLimitError,
    SpecificationError,
    Var,
    Xor,
    all_products,
    conj,
    disj,
    entails,
    equivalent,
    evaluate,
    format_expr,
    is_satisfiable,
    product_expr,
    product_set_expr,
    resolve_backend,
    simplified,
    valid_products,
    variables,
)
from feta.dsl import parse_expr

AB = FeatureSpace.of("a", "b")
ABC = FeatureSpace.of("a", "b", "c")
A, B, C = Var("a"), Var("b"), Var("c")


def brute_holds(expr, product):
    return evaluate(expr, product)


def brute_satisfiable(expr, space):
    return any(brute_holds(expr, p) for p in all_products(space))


# --- spaces and products -----------------------------------------------------


def test_feature_space_rejects_duplicates():
    with pytest.raises(SpecificationError):
        FeatureSpace.of("a", "a")


def test_product_of_unknown_feature():
    with pytest.raises(SpecificationError):
        Product.of(AB, "z")


def test_product_str_sorted():
    p = Product.of(AB, "b", "a")
    assert str(p) == "{a,b}"
    assert str(Product.of(AB)) == "{}"


def test_all_products_is_lexicographic():
    names = [tuple(sorted(p.selected)) for p in all_products(ABC)]
    assert names == sorted(names)
    assert len(names) == 8


def test_all_products_respects_limit():
    with pytest.raises(ResourceLimitError):
        all_products(ABC, limit=4)


def test_valid_products_filters_by_model():
    products = valid_products(Xor(A, B), AB)
    assert [sorted(p.selected) for p in products] == [["a"], ["b"]]


def test_valid_products_of_unsatisfiable_model():
    assert valid_products(And((A, Not(A))), AB) == ()


# --- evaluation ---------------------------------------------------------------


def test_connective_truth_tables():
    for sa, sb in itertools.product((False, True), repeat=2):
        selected = {n for n, s in (("a", sa), ("b", sb)) if s}
        p = Product.of(AB, *selected)
        assert evaluate(Implies(A, B), p) == ((not sa) or sb)
        assert evaluate(Iff(A, B), p) == (sa == sb)
        assert evaluate(Xor(A, B), p) == (sa != sb)
        assert evaluate(And((A, B)), p) == (sa and sb)
        assert evaluate(Or((A, B)), p) == (sa or sb)
        assert evaluate(Not(A), p) == (not sa)


def test_evaluate_rejects_unknown_variables():
    with pytest.raises(SpecificationError):
        evaluate(Var("z"), Product.of(AB, "a"))


def test_empty_conjunction_is_true_and_empty_disjunction_is_false():
    assert conj(()) is TRUE
    assert disj(()) is FALSE
    assert conj((A,)) is A
    assert disj((A,)) is A


def test_variables():
    expr = Implies(And((A, Not(B))), Xor(C, TRUE))
    assert variables(expr) == frozenset({"a", "b", "c"})


def test_operator_sugar():
    p = Product.of(AB, "a")
    assert evaluate((A & ~B) | B, p)


# --- product characterisation --------------------------------------------------


def test_product_expr_characterises_exactly_one_product():
    for p in all_products(ABC):
        expr = product_expr(p)
        for q in all_products(ABC):
            assert evaluate(expr, q) == (p == q)


def test_product_set_expr_characterises_exactly_the_set():
    chosen = [p for p in all_products(ABC) if len(p.selected) == 1]
    expr = product_set_expr(chosen, ABC)
    for q in all_products(ABC):
        assert evaluate(expr, q) == (q in chosen)


def test_product_set_expr_of_empty_set_is_unsatisfiable():
    assert not is_satisfiable(product_set_expr([], ABC), ABC)


def test_product_set_expr_rejects_foreign_spaces():
    with pytest.raises(SpecificationError):
        product_set_expr([Product.of(AB, "a")], ABC)


# --- satisfiability and entailment ---------------------------------------------


def test_satisfiability_ranges_over_all_products_not_only_valid_ones():
    # b && !a is satisfied only by {b}; whether {b} passes some feature
    # model is irrelevant to satisfiability.
    assert is_satisfiable(And((B, Not(A))), AB)


def test_entails_and_equivalent():
    assert entails(And((A, B)), A, AB)
    assert not entails(A, And((A, B)), AB)
    assert equivalent(Implies(A, B), Or((Not(A), B)), AB)
    assert not equivalent(A, B, AB)


def test_resolve_backend_by_name_and_default():
    assert isinstance(resolve_backend("enumerative", AB), EnumerationBackend)
    assert isinstance(resolve_backend("sat", AB), DpllBackend)
    assert isinstance(resolve_backend(None, AB), EnumerationBackend)
    big = FeatureSpace.of(*[f"f{i}" for i in range(17)])
    assert isinstance(resolve_backend(None, big), DpllBackend)
    with pytest.raises(SpecificationError):
        resolve_backend("smt", AB)


def test_crosscheck_backend_counts_queries():
    backend = CrossCheckBackend()
    assert backend.satisfiable(A, AB)
    assert not backend.satisfiable(And((A, Not(A))), AB)
    assert backend.queries == 2


# --- formatting -----------------------------------------------------------------


@pytest.mark.parametrize(
    "expr, text",
    [
        (And((A, B)), "a && b"),
        (Or((And((A, B)), C)), "a && b || c"),
        (And((A, Or((B, C)))), "a && (b || c)"),
        (Not(A), "!a"),
        (Not(And((A, B))), "!(a && b)"),
        (Implies(A, Implies(B, C)), "a -> b -> c"),
        (Implies(Implies(A, B), C), "(a -> b) -> c"),
        (Xor(A, And((B, C))), "a xor b && c"),
        (Iff(A, Implies(B, C)), "a <-> b -> c"),
        (Implies(A, Iff(B, C)), "a -> (b <-> c)"),
        (TRUE, "true"),
        (FALSE, "false"),
    ],
)
def test_format_expr_minimal_parentheses(expr, text):
    assert format_expr(expr) == text
    assert parse_expr(text) == expr


# --- property tests --------------------------------------------------------------

NAMES = ("a", "b", "c", "d")
SPACE4 = FeatureSpace.of(*NAMES)

exprs = st.recursive(
    st.sampled_from([TRUE, FALSE, A, B, C, Var("d")]),
    lambda kids: st.one_of(
        kids.map(Not),
        st.tuples(kids, kids).map(And),
        st.tuples(kids, kids).map(Or),
        st.tuples(kids, kids).map(lambda ab: Implies(*ab)),
        st.tuples(kids, kids).map(lambda ab: Iff(*ab)),
        st.tuples(kids, kids).map(lambda ab: Xor(*ab)),
    ),
    max_leaves=10,
)


@settings(max_examples=150, deadline=None, derandomize=True)
@given(exprs)
def test_backends_agree(expr):
    enum = EnumerationBackend().satisfiable(expr, SPACE4)
    sat = DpllBackend().satisfiable(expr, SPACE4)
    assert enum == sat == brute_satisfiable(expr, SPACE4)


@settings(max_examples=150, deadline=None, derandomize=True)
@given(exprs)
def test_format_then_parse_preserves_meaning(expr):
    reparsed = parse_expr(format_expr(expr))
    for p in all_products(SPACE4):
        assert evaluate(reparsed, p) == evaluate(expr, p)


@settings(max_examples=150, deadline=None, derandomize=True)
@given(exprs)
def test_format_parse_reaches_a_fixpoint(expr):
    once = parse_expr(format_expr(expr))
    twice = parse_expr(format_expr(once))
    assert once == twice


@settings(max_examples=150, deadline=None, derandomize=True)
@given(exprs)
def test_simplified_preserves_meaning(expr):
    simple = simplified(expr)
    for p in all_products(SPACE4):
        assert evaluate(simple, p) == evaluate(expr, p)
