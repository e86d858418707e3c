import pytest

from sumprodlab import errors
from sumprodlab.families import (
    RNG_ALGORITHM,
    FamilySpec,
    generate,
    local_search,
    make_rng,
    parse_family,
)
from sumprodlab.setcore import make_set, sumset


def test_parse_family_forms():
    assert parse_family("interval:64") == FamilySpec("interval", (), 64, 0)
    assert parse_family("geometric:2:32") == FamilySpec("geometric", ("2",), 32, 0)
    assert parse_family("random:1000000:128:seed=7") == FamilySpec("random", ("1000000",), 128, 7)
    assert parse_family("random-subset:50:5").family == "random"
    assert parse_family("file:/tmp/x.txt") == FamilySpec("file", ("/tmp/x.txt",))
    assert parse_family("random:100:8:seed=3").descriptor == "random:100:8:seed=3"
    assert parse_family("interval").n is None


@pytest.mark.parametrize(
    "bad", ["", "nope:3", "interval:x", "geometric:1:4", "random:3:8", "interval:0", "random:10:4:seed=x", "interval:1:2:3"]
)
def test_parse_family_rejects(bad):
    with pytest.raises(errors.InvalidParameterError):
        generate(bad)


def test_deterministic_families():
    assert list(generate("interval:4")) == [1, 2, 3, 4]
    assert list(generate("geometric:3/2:3")) == [1, make_set(["3/2"]).elements[0], make_set(["9/4"]).elements[0]]
    assert list(generate("convex-squares:4")) == [1, 4, 9, 16]
    with pytest.raises(errors.InvalidParameterError):
        generate("interval")


def test_ap_plus_ap_is_two_dimensional():
    A = generate("ap-plus-ap:16")
    assert len(A) == 16
    # a 4x4 proper progression has |A+A| = 7*7
    assert len(sumset(A, A)) == 49


def test_random_families_are_seeded():
    a = generate("random:1000:20:seed=1")
    assert a == generate("random:1000:20:seed=1")
    assert a != generate("random:1000:20:seed=2")
    assert all(1 <= x <= 1000 for x in a)
    assert len(generate("random:20:20")) == 20
    p = generate("perturbed-ap:3:30:seed=5")
    assert len(p) == 30 and p == generate("perturbed-ap:3:30:seed=5")
    assert generate("perturbed-ap:0:5") == make_set([10, 20, 30, 40, 50])


def test_rng_streams_are_independent():
    x = make_rng(1, "a").integers(1 << 30, size=4)
    y = make_rng(1, "b").integers(1 << 30, size=4)
    assert list(x) != list(y)
    assert list(x) == list(make_rng(1, "a").integers(1 << 30, size=4))
    assert RNG_ALGORITHM == "numpy.PCG64+SeedSequence"


def test_file_family(tmp_path):
    p = tmp_path / "s.txt"
    p.write_text("1\n2\n5\n")
    assert generate(f"file:{p}") == make_set([1, 2, 5])


@pytest.mark.parametrize("objective", ["min-pinned", "min-aaplus", "min-aaminus", "max-energy-ratio"])
def test_local_search_never_worsens(objective):
    st = local_search(objective, "random:200:10:seed=4", 60, seed=9)
    keys = [t.candidate_key for t in st.trace if t.accepted]
    assert all(b <= a for a, b in zip(keys, keys[1:]))
    assert len(st.current) == 10
    again = local_search(objective, "random:200:10:seed=4", 60, seed=9)
    assert again.current == st.current and again.key == st.key
    assert st.to_dict()["rng"] == RNG_ALGORITHM


def test_local_search_rejects():
    with pytest.raises(errors.InvalidParameterError):
        local_search("max-fun", "interval:4", 3)
    with pytest.raises(errors.InvalidParameterError):
        local_search("min-pinned", "interval:4", -1)
