import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import C6_POINTS, C8_POINTS, K2, K4, K8, interval
from digitop import (
    AdjacencyKind,
    DigitalImage,
    EmptinessError,
    InputError,
    ParseError,
    adjacent,
    connected_images,
    detect_simple_closed_curve,
    generate_cycle,
    is_connected,
    parse_image,
    product_adjacent,
    search_cycles,
    serialize_image,
)


def test_kind_names():
    assert [AdjacencyKind(d, k).name for d, k in [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]] == [2, 4, 8, 6, 18, 26]
    assert AdjacencyKind.from_name(8) == K8
    with pytest.raises(InputError):
        AdjacencyKind(2, 3)


def test_adjacent_examples():
    assert adjacent((0, 0), (1, 1), K8)
    assert not adjacent((0, 0), (1, 1), K4)
    assert adjacent((5,), (6,), K2)
    assert not adjacent((0, 0), (2, 0), K8)


def test_adjacent_errors():
    with pytest.raises(InputError):
        adjacent((0, 0), (0, 0), K8)
    with pytest.raises(InputError):
        adjacent((0, 0), (1,), K8)


def test_product_adjacent_examples():
    kinds = (K8, K8)
    assert product_adjacent(((0, 0), (0, 0)), ((0, 0), (0, 0)), kinds)
    assert product_adjacent(((0, 0), (0, 0)), ((1, 1), (0, 0)), kinds)
    assert not product_adjacent(((0, 0), (0, 0)), ((2, 0), (0, 0)), kinds)
    with pytest.raises(InputError):
        product_adjacent(((0, 0), (0,)), ((0, 0), (0, 0)), kinds)


def test_is_connected_examples(c6):
    assert is_connected(c6)
    assert not is_connected(DigitalImage([(0,), (2,)], K2))
    assert is_connected(interval(4))


def test_detect_lemma_curves(c6, c8):
    w = detect_simple_closed_curve(c6)
    assert w.m == 6 and w.check()
    assert [c6.points[i] for i in w.ordering] == C6_POINTS
    w8 = detect_simple_closed_curve(c8)
    assert w8.m == 8
    assert [c8.points[i] for i in w8.ordering] == C8_POINTS
    assert detect_simple_closed_curve(interval(3)) is None


def test_detect_rejects_chords():
    full = DigitalImage([(x, y) for x in range(3) for y in range(3) if (x, y) != (1, 1)], K8)
    assert detect_simple_closed_curve(full) is None
    assert detect_simple_closed_curve(DigitalImage([(0, 0), (1, 0), (0, 1), (1, 1)], K8)) is None


def test_generate_standard_exemplars():
    assert set(generate_cycle(6, K8).points) == set(C6_POINTS)
    assert set(generate_cycle(8, K4).points) == set(C8_POINTS)


@pytest.mark.parametrize("m,kind", [(5, K8), (5, K4), (6, K4), (7, K4), (9, K4), (11, K4)])
def test_generate_empty(m, kind):
    with pytest.raises(EmptinessError):
        generate_cycle(m, kind)


def test_generate_rejects_small_m():
    with pytest.raises(InputError):
        generate_cycle(3, K8)


@pytest.mark.parametrize("kind,ms", [(K8, [4, 6, 7, 8, 9, 10, 11, 12, 15]), (K4, [4, 8, 10, 12, 14, 20])])
def test_generated_curves_detect(kind, ms):
    for m in ms:
        X = generate_cycle(m, kind)
        w = detect_simple_closed_curve(X)
        assert w is not None and w.m == m == len(X)


@pytest.mark.parametrize("m,kind,window", [(5, K4, 5), (5, K8, 5), (6, K4, 6), (6, K4, 7), (7, K4, 7), (9, K4, 9)])
def test_search_empty(m, kind, window):
    assert search_cycles(m, kind, window) == []


def test_search_finds_lemma_curves():
    found = search_cycles(6, K8, 6)
    assert DigitalImage(C6_POINTS, K8).canonical_translate() in found
    found8 = search_cycles(8, K4, 8)
    assert DigitalImage(C8_POINTS, K4).canonical_translate() in found8


def test_search_is_translation_canonical():
    found = search_cycles(7, K8, 7)
    assert found and len(set(found)) == len(found)
    assert all(X == X.canonical_translate() for X in found)
    assert all(detect_simple_closed_curve(X).m == 7 for X in found)


def test_round_trip(c6):
    assert parse_image(serialize_image(c6)) == c6


def test_parse_comments_and_order():
    X = parse_image("# demo\ndim 2\nk 2  # 8-adjacency\np 1 1\np 0 0\n")
    assert X.points == ((0, 0), (1, 1)) and X.kind == K8


def test_parse_duplicate_point():
    with pytest.raises(ParseError) as exc:
        parse_image("dim 2\nk 2\np 0 0\np 0 0\n")
    assert exc.value.line == 4 and "duplicate" in str(exc.value)


def test_parse_invalid_kind():
    with pytest.raises(ParseError) as exc:
        parse_image("dim 2\nk 3\np 0 0\n")
    assert exc.value.line == 2


@pytest.mark.parametrize("text", ["dim 2\nk 1\np 0\n", "k 1\n", "dim 2\nk 1\n", "dim 2\nk 1\np 0 x\n", "dim 2\nq 1\n"])
def test_parse_malformed(text):
    with pytest.raises(ParseError):
        parse_image(text)


def test_round_trip_random_corpus():
    rng = np.random.default_rng(20261018)
    for _ in range(1000):
        d = int(rng.integers(1, 4))
        k = int(rng.integers(1, d + 1))
        n = int(rng.integers(1, 12))
        pts = {tuple(int(c) for c in rng.integers(-20, 20, size=d)) for _ in range(n)}
        X = DigitalImage(pts, AdjacencyKind(d, k))
        assert parse_image(serialize_image(X)) == X


points2 = st.tuples(st.integers(-3, 3), st.integers(-3, 3))


@given(st.sets(points2, min_size=1, max_size=12), st.sampled_from([K4, K8]))
def test_adjacency_symmetric_irreflexive_and_degree_bound(pts, kind):
    X = DigitalImage(pts, kind)
    for i in range(len(X)):
        assert i not in X.nbrs[i]
        assert len(X.nbrs[i]) <= 3 ** X.dim - 1
        for j in X.nbrs[i]:
            assert i in X.nbrs[j]
            assert adjacent(X.points[i], X.points[j], kind)


@settings(max_examples=50)
@given(st.sets(st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2)), min_size=2, max_size=8),
       st.integers(1, 3))
def test_adjacency_3d(pts, k):
    X = DigitalImage(pts, AdjacencyKind(3, k))
    for i in range(len(X)):
        assert len(X.nbrs[i]) <= 26
        for j in X.nbrs[i]:
            diff = [abs(a - b) for a, b in zip(X.points[i], X.points[j])]
            assert max(diff) == 1 and sum(diff) <= k


def test_corpus_contains_square_and_is_canonical():
    imgs = connected_images(K4, 2, 4)
    assert DigitalImage([(0, 0), (1, 0), (0, 1), (1, 1)], K4) in imgs
    assert all(is_connected(X) for X in imgs)
    assert len(set(imgs)) == len(imgs)


def _brute_corpus(kind, window, max_points):
    """Every subset of the window, kept when connected, deduplicated by translation."""
    import itertools

    cells = [(x, y) for x in range(window) for y in range(window)]
    seen = set()
    for r in range(1, max_points + 1):
        for sub in itertools.combinations(cells, r):
            X = DigitalImage(sub, kind)
            if is_connected(X):
                seen.add(X.canonical_translate())
    return seen


@pytest.mark.parametrize("kind,count", [(K4, 109), (K8, 249)])
def test_corpus_matches_subset_enumeration(kind, count):
    got = connected_images(kind, 3, 6)
    assert set(got) == _brute_corpus(kind, 3, 6)
    assert len(got) == count
