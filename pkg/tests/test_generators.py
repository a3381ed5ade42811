"""
Unit tests for blueprints, twists, mutations and corpus generation.
"""
import pytest

from fibcat.exceptions import AddressInvalid, BadBlueprint
from fibcat.services.fincat import validate_category
from fibcat.services.generators import (
    CORPUS_BASES,
    TWIST_FIBERS,
    MutationSpec,
    TwistSpec,
    WordRng,
    base_blueprint,
    build_corpus,
    corpus_twists,
    fiber_category,
    mutate_instance,
    mutation_battery,
    sheaf_fiber,
    strict_corpus,
    strict_presheaf_instance,
    thin_counterexample_instance,
    twisted_instance,
)


@pytest.mark.parametrize("name", ["bz2", "bz3", "bs3", "mon2", "chain2"])
def test_fiber_blueprints_are_categories(name):
    """Test that every constant fiber blueprint is a valid category."""
    assert validate_category(fiber_category(name)).passed


def test_fiber_blueprint_shapes():
    """Test element names and sizes of the fiber blueprints."""
    assert fiber_category("bz3").morphism_names == ("e", "a", "a2")
    assert fiber_category("bs3").n_morphisms == 6
    assert fiber_category("bs3").morphism_index("(123)") >= 0
    assert fiber_category("mon2").morphism_names == ("e", "z")


def test_unknown_blueprints_raise():
    """Test that unknown base and fiber names are rejected."""
    with pytest.raises(BadBlueprint):
        base_blueprint("chain9")
    with pytest.raises(BadBlueprint):
        fiber_category("bz7")
    with pytest.raises(BadBlueprint):
        fiber_category("sheaf2")
    with pytest.raises(BadBlueprint):
        thin_counterexample_instance("middle")


def test_sheaf_fiber_sizes(powerset2):
    """Test that the sheaf fiber over a set with k points has 2^k objects."""
    cat = powerset2.cat
    sizes = [sheaf_fiber(powerset2, cat.object_index(name)).n_objects for name in ("∅", "1", "12")]
    assert sizes == [1, 2, 4]


def test_strict_corpus_size():
    """Test that the strict corpus covers every base and fiber blueprint."""
    corpus = strict_corpus()
    assert len(corpus) == 24
    assert corpus[0].name == "chain2-bz2-strict"
    assert len({i.name for i in corpus}) == 24


def test_corpus_is_deterministic():
    """Test that one seed gives the same twisted corpus twice."""
    first = build_corpus(5)
    second = build_corpus(5)
    assert len(first) == 24 + len(CORPUS_BASES) * len(TWIST_FIBERS) * 2 == 48
    assert [i.name for i in first] == [i.name for i in second]
    assert [i.seed for i in first] == [i.seed for i in second]


def test_twist_keeps_oracle_and_drops_full_families(twisted, twisted_full):
    """Test which families a twisted instance keeps."""
    assert twisted.name == "chain2-bz3-twist11"
    assert twisted.seed == 11
    assert twisted.morphism.theta is None
    assert twisted.tensors["source"].m is None
    assert twisted.oracle.theta is not None
    assert twisted_full.morphism.theta is not None
    assert twisted_full.target is not None


def test_twist_is_reproducible(twisted_full):
    """Test that the same seed twists the same way."""
    again = twisted_instance("chain2", "bz3", 11, keep_full=True)
    for f, theta in twisted_full.morphism.theta.items():
        assert again.morphism.theta[f] == theta


def test_mutation_records_its_address(strict_group):
    """Test that a mutation names its family, key and replaced component."""
    mutant = mutate_instance(strict_group, MutationSpec("theta", ("∅<=1",), "*", "a"))
    assert mutant.name == "powerset2-bz3-strict-mut-theta"
    record = mutant.mutation
    assert (record.family, record.key, record.obj) == ("theta", ("∅<=1",), "*")
    assert (record.original, record.replacement) == ("e", "a")
    assert record.covered
    assert strict_group.morphism.theta[strict_group.base.cat.morphism_index("∅<=1")].is_identity()


@pytest.mark.parametrize(
    "spec",
    [
        MutationSpec("nonsense", ("∅<=1",), "*", "a"),
        MutationSpec("theta", ("∅<=1", "1<=12"), "*", "a"),
        MutationSpec("theta", ("1<=∅",), "*", "a"),
        MutationSpec("theta", ("∅<=1",), "*", "e"),
        MutationSpec("theta", ("∅<=1",), "*", "b"),
        MutationSpec("target.conn", ("∅<=1", "1<=12"), "*", "a"),
    ],
)
def test_invalid_mutations_raise(strict_group, spec):
    """Test that bad addresses, equal replacements and missing families are rejected."""
    with pytest.raises(AddressInvalid):
        mutate_instance(strict_group, spec)


def test_mutation_battery_count():
    """Test that the battery emits the requested number of named mutants."""
    battery = mutation_battery(3, 13)
    assert len(battery.instances) == 13
    assert battery.instances[0].name.startswith("mutant-0000-")
    assert all(i.mutation is not None for i in battery.instances)
    assert all(i.seed == 3 for i in battery.instances)
    assert battery.undetectable == [i.mutation for i in battery.instances if not i.mutation.covered]


def test_word_stream_is_pinned():
    """Test that seed 7 gives the reference MT19937 words and their reductions."""
    rng = WordRng(7)
    assert [rng.word() for _ in range(4)] == [1390851128, 4071050724, 647892279, 1695753998]
    rng = WordRng(7)
    assert [rng.index(3) for _ in range(6)] == [0, 2, 0, 1, 1, 0]
    rng = WordRng(7)
    assert [rng.choice("abcde") for _ in range(6)] == ["b", "e", "a", "b", "d", "a"]
    assert WordRng(0).word() == 3626764237


def test_index_rejects_empty_range():
    """Test that drawing from nothing raises."""
    with pytest.raises(ValueError):
        WordRng(7).index(0)


def test_corpus_twist_seeds_are_pinned():
    """Test the first twist choices derived from seed 7."""
    twists = corpus_twists(7)
    assert len(twists) == len(CORPUS_BASES) * len(TWIST_FIBERS) * 2
    assert twists[:3] == [
        ("chain2", "bz2", 695425564),
        ("chain2", "bz2", 2035525362),
        ("chain2", "bz3", 323946139),
    ]
    names = [i.name for i in build_corpus(7)[24:27]]
    assert names == [
        "chain2-bz2-twist695425564",
        "chain2-bz2-twist2035525362",
        "chain2-bz3-twist323946139",
    ]


def test_first_twist_choice_is_pinned(chain2):
    """Test that seed 11 twists the only non-identity morphism of chain2 by a."""
    strict = strict_presheaf_instance(chain2, "bz3")
    spec = TwistSpec.random(strict, 11)
    f = chain2.cat.morphism_index("0<=1")
    assert spec.units["source"] == {f: (strict.source.functor(f).target.morphism_index("a"),)}
    assert spec.seed == 11
