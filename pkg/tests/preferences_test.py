import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prefqbaf.exceptions import (
    DuplicateArgumentError,
    PreferenceError,
    PreferenceSyntaxError,
    SingleTierError,
    UnknownArgumentError,
)
from prefqbaf.preferences import (
    GapKind,
    PreferenceOrdering,
    Relation,
    adjacent_pairs,
    are_isomorphic,
    extend_with_equal,
    extremes,
    parse_dsl,
    relation,
    render,
    tokenize,
)

from .strategies import ARGUMENT_POOL, orderings


@pytest.fixture
def ordering():
    """Ordering c = f >> b = e > a = d over the feeding-pace reasons."""
    return parse_dsl("c = f >> b = e > a = d")


def test_parse_tiers(ordering):
    """Test tiers and gaps come out most preferred first."""
    assert ordering.tiers == (frozenset("cf"), frozenset("be"), frozenset("ad"))
    assert ordering.gaps == (GapKind.MUCH_GREATER, GapKind.GREATER)
    assert ordering.arguments == frozenset("abcdef")
    assert ordering.gap_counts == (1, 1)
    assert "c" in ordering and "D1" not in ordering


def test_parse_without_spaces():
    """Test whitespace is optional between tokens."""
    assert parse_dsl("a>>b=c>d") == parse_dsl("a >> b = c > d")


def test_tokenize():
    """Test '>>' is a single token."""
    kinds = [token.kind for token in tokenize("a >> b > c = d")]
    assert kinds == ["id", "much", "id", "greater", "id", "equal", "id"]


@pytest.mark.parametrize(
    "text,position",
    [("a >", 3), ("> a", 0), ("a ? b", 2), ("a b", 2), ("", 0), ("a > > b", 4)],
)
def test_syntax_errors(text, position):
    """Test malformed orderings report the offending position."""
    with pytest.raises(PreferenceSyntaxError) as excinfo:
        parse_dsl(text)
    assert excinfo.value.position == position


def test_single_tier():
    """Test an ordering without any strict preference is rejected."""
    with pytest.raises(SingleTierError):
        parse_dsl("a = b")
    with pytest.raises(SingleTierError):
        parse_dsl("a")


def test_duplicate_argument():
    """Test an argument may appear only once."""
    with pytest.raises(DuplicateArgumentError):
        parse_dsl("a > a")
    with pytest.raises(DuplicateArgumentError):
        PreferenceOrdering.from_tiers([["a", "b"], ["b"]], [GapKind.GREATER])


@pytest.mark.parametrize("bad", ["x\n", "", "x y", "x-y", 3])
def test_invalid_argument_id(bad):
    """Test argument ids must consist entirely of letters, digits or underscore."""
    with pytest.raises(PreferenceError):
        PreferenceOrdering.from_tiers([[bad], ["y"]], [GapKind.GREATER])


def test_gap_count_mismatch():
    """Test tiers and gaps must agree in number."""
    with pytest.raises(PreferenceError):
        PreferenceOrdering.from_tiers([["a"], ["b"]], [])


def test_relation(ordering):
    """Test relations between arguments, including chains crossing a much-greater gap."""
    assert relation(ordering, "c", "f") is Relation.EQUAL
    assert relation(ordering, "b", "a") is Relation.GREATER
    assert relation(ordering, "c", "b") is Relation.MUCH_GREATER
    assert relation(ordering, "c", "a") is Relation.MUCH_GREATER
    assert relation(ordering, "a", "b") is Relation.REVERSED_GREATER
    assert relation(ordering, "d", "f") is Relation.REVERSED_MUCH_GREATER
    with pytest.raises(UnknownArgumentError):
        relation(ordering, "c", "z")


@given(orderings())
def test_relation_antisymmetry(ordering):
    """Test swapping the arguments reverses the relation."""
    for a, b in itertools.permutations(sorted(ordering.arguments), 2):
        assert relation(ordering, b, a) is relation(ordering, a, b).reversed()


def test_adjacent_pairs_two_tiers():
    """Test indifferent pairs come first, then cross pairs of consecutive tiers."""
    pairs = adjacent_pairs(parse_dsl("c = f >> b = e"))
    assert pairs == [
        ("c", "f", Relation.EQUAL),
        ("b", "e", Relation.EQUAL),
        ("c", "b", Relation.MUCH_GREATER),
        ("c", "e", Relation.MUCH_GREATER),
        ("f", "b", Relation.MUCH_GREATER),
        ("f", "e", Relation.MUCH_GREATER),
    ]


def test_adjacent_pairs_counts(ordering):
    """Test the pair counts for three tiers of two."""
    kinds = [kind for _, _, kind in adjacent_pairs(ordering)]
    assert kinds.count(Relation.EQUAL) == 3
    assert kinds.count(Relation.MUCH_GREATER) == 4
    assert kinds.count(Relation.GREATER) == 4
    assert ("c", "a", Relation.MUCH_GREATER) not in adjacent_pairs(ordering)


def test_extremes(ordering):
    """Test the most and least preferred tiers."""
    assert extremes(ordering) == (frozenset("cf"), frozenset("ad"))


def test_isomorphism_examples():
    """Test isomorphism compares tier sizes only."""
    assert are_isomorphic(parse_dsl("a > b = c"), parse_dsl("x > y = z"))
    assert are_isomorphic(parse_dsl("a > b"), parse_dsl("b > a"))
    assert are_isomorphic(parse_dsl("a >> b"), parse_dsl("a > b"))
    assert not are_isomorphic(parse_dsl("a > b = c"), parse_dsl("a = b > c"))
    assert not are_isomorphic(parse_dsl("a > b"), parse_dsl("a > b > c"))


def _brute_force_isomorphic(o1, o2):
    args1, args2 = sorted(o1.arguments), sorted(o2.arguments)
    if len(args1) != len(args2):
        return False
    for image in itertools.permutations(args2):
        f = dict(zip(args1, image))
        if all(
            o1.prefers(a, b) == o2.prefers(f[a], f[b])
            for a in args1
            for b in args1
        ):
            return True
    return False


@settings(max_examples=300)
@given(st.data())
def test_isomorphism_matches_brute_force(data):
    """Test the tier-size check agrees with searching all bijections."""
    size = data.draw(st.integers(2, 5))
    arguments = ARGUMENT_POOL[:size]
    o1 = data.draw(orderings(arguments=arguments))
    o2 = data.draw(orderings(arguments=arguments))
    assert are_isomorphic(o1, o2) == _brute_force_isomorphic(o1, o2)


@given(orderings())
def test_render_parse_identity(ordering):
    """Test rendering and parsing give back the same ordering."""
    assert parse_dsl(render(ordering)) == ordering
    assert str(ordering) == render(ordering)


def test_render(ordering):
    """Test the canonical rendering sorts ids within tiers."""
    swapped = PreferenceOrdering.from_tiers([["f", "c"], ["e", "b"]], [GapKind.GREATER])
    assert render(swapped) == "c = f > b = e"
    assert render(ordering) == "c = f >> b = e > a = d"


def test_extend_with_equal(ordering):
    """Test a new argument joins the anchor's tier and nothing else moves."""
    extended = extend_with_equal(ordering, "g", "b")
    assert extended.tiers == (frozenset("cf"), frozenset("beg"), frozenset("ad"))
    assert extended.gaps == ordering.gaps
    with pytest.raises(DuplicateArgumentError):
        extend_with_equal(ordering, "a", "b")
    with pytest.raises(UnknownArgumentError):
        extend_with_equal(ordering, "g", "z")


def test_prefers(ordering):
    """Test weak preference."""
    assert ordering.prefers("c", "a")
    assert ordering.prefers("c", "f")
    assert not ordering.prefers("a", "b")
    assert ordering.tier_index("e") == 1


@given(st.data())
def test_relation_strictness_is_transitive(data):
    """Test strictly above twice is strictly above, much-greater if either link is."""
    ordering = data.draw(orderings(min_size=3))
    a, b, c = data.draw(st.permutations(sorted(ordering.arguments)))[:3]
    first, second = relation(ordering, a, b), relation(ordering, b, c)
    if first.is_strict and second.is_strict:
        combined = relation(ordering, a, c)
        assert combined.is_strict
        if Relation.MUCH_GREATER in (first, second):
            assert combined is Relation.MUCH_GREATER


@given(st.data())
def test_isomorphism_is_an_equivalence(data):
    """Test isomorphism is reflexive, symmetric and transitive."""
    size = data.draw(st.integers(2, 4))
    arguments = ARGUMENT_POOL[:size]
    o1, o2, o3 = (data.draw(orderings(arguments=arguments)) for _ in range(3))
    assert are_isomorphic(o1, o1)
    assert are_isomorphic(o1, o2) == are_isomorphic(o2, o1)
    if are_isomorphic(o1, o2) and are_isomorphic(o2, o3):
        assert are_isomorphic(o1, o3)


@given(st.data())
def test_extension_keeps_isomorphism(data):
    """Test adding an argument at the same tier of two orderings keeps their isomorphism."""
    size = data.draw(st.integers(2, 5))
    arguments = ARGUMENT_POOL[:size]
    o1 = data.draw(orderings(arguments=arguments))
    o2 = data.draw(orderings(arguments=arguments))
    position = data.draw(st.integers(0, min(len(o1.tiers), len(o2.tiers)) - 1))
    e1 = extend_with_equal(o1, "fresh", min(o1.tiers[position]))
    e2 = extend_with_equal(o2, "fresh", min(o2.tiers[position]))
    assert are_isomorphic(e1, e2) == are_isomorphic(o1, o2)
