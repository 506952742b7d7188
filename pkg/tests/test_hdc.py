import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hdnav import hdc

D = 1000


def bipolar(seed, d=D):
    return hdc.random_bipolar(d, np.random.default_rng(seed))


# --- random_bipolar ------------------------------------------------------------


def test_random_bipolar_elements_and_determinism():
    x = bipolar(1)
    assert hdc.is_bipolar(x)
    assert len(x) == D
    assert np.array_equal(x, bipolar(1))
    assert hdc.cosine(x, bipolar(1)) == 1.0


def test_random_bipolar_rejects_zero_dimension():
    with pytest.raises(ValueError, match="dimension"):
        hdc.random_bipolar(0, np.random.default_rng(0))


def test_random_pair_similarity_tail():
    # Monte-Carlo tail estimate: 1e4 pairs at d=1000 stay well inside |cos| < 0.15
    rng = np.random.default_rng(3)
    xs = rng.choice(np.array([-1.0, 1.0]), size=(10_000, D))
    ys = rng.choice(np.array([-1.0, 1.0]), size=(10_000, D))
    sims = (xs * ys).sum(axis=1) / D
    assert np.abs(sims).max() < 0.15
    assert abs(sims.mean()) < 0.005
    assert 0.025 < sims.std() < 0.04  # theoretical 1/sqrt(d) ~ 0.0316


# --- cosine ---------------------------------------------------------------------


def test_cosine_identity_and_antiparallel():
    x = bipolar(4)
    assert hdc.cosine(x, x) == pytest.approx(1.0)
    assert hdc.cosine(x, -x) == pytest.approx(-1.0)


def test_cosine_scale_invariance():
    x, y = bipolar(5), bipolar(6)
    assert hdc.cosine(2.0 * x, y) == pytest.approx(hdc.cosine(x, y))


def test_cosine_zero_norm_rejected():
    with pytest.raises(ValueError, match="zero-norm"):
        hdc.cosine(np.zeros(D), bipolar(7))


def test_cosine_dimension_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        hdc.cosine(bipolar(8), bipolar(8, d=999))


# --- sign -----------------------------------------------------------------------


def test_sign_cases():
    assert np.array_equal(hdc.sign(np.array([3.2, -0.1, 0.0])), [1.0, -1.0, 0.0])


def test_sign_of_bipolar_is_identity():
    x = bipolar(9)
    assert np.array_equal(hdc.sign(x), x)


def test_sign_of_cancelling_sum_is_zero():
    x = bipolar(10)
    assert np.array_equal(hdc.sign(x + (-x)), np.zeros(D))


# --- bundle ---------------------------------------------------------------------


def test_bundle_similar_to_components():
    rng = np.random.default_rng(11)
    x, y, z = (hdc.random_bipolar(D, rng) for _ in range(3))
    q = hdc.bundle([x, y, z], rng)
    assert hdc.is_bipolar(q)
    # majority-of-3 agrees with each component 3/4 of the time -> cosine ~ 0.5
    for v in (x, y, z):
        assert 0.35 < hdc.cosine(q, v) < 0.65
    assert abs(hdc.cosine(q, hdc.random_bipolar(D, rng))) < 0.15


def test_bundle_even_count_stays_bipolar():
    rng = np.random.default_rng(12)
    x, y = hdc.random_bipolar(D, rng), hdc.random_bipolar(D, rng)
    assert hdc.is_bipolar(hdc.bundle([x, y], rng))


def test_bundle_singleton_is_identity():
    rng = np.random.default_rng(13)
    x = hdc.random_bipolar(D, rng)
    assert np.array_equal(hdc.bundle([x], rng), x)


def test_bundle_empty_rejected():
    with pytest.raises(ValueError, match="at least one"):
        hdc.bundle([], np.random.default_rng(0))


# --- bind -----------------------------------------------------------------------


def test_bind_self_inverse_identity():
    x = bipolar(14)
    assert np.array_equal(hdc.bind(x, x), np.ones(D))


def test_bind_dissimilar_to_inputs():
    x, y = bipolar(15), bipolar(16)
    assert abs(hdc.cosine(hdc.bind(x, y), x)) < 0.15


def test_bind_releases_bound_value_from_bundle():
    rng = np.random.default_rng(17)
    w, x, y, z = (hdc.random_bipolar(D, rng) for _ in range(4))
    q = hdc.bundle([hdc.bind(w, x), hdc.bind(y, z)], rng)
    released = hdc.bind(w, q)
    fresh = hdc.random_bipolar(D, rng)
    assert hdc.cosine(released, x) > 3 * abs(hdc.cosine(released, fresh))
    assert hdc.cosine(released, x) > 0.3


@given(st.integers(0, 2**31 - 1), st.integers(0, 2**31 - 1))
@settings(max_examples=25, deadline=None)
def test_bind_self_inverse_property(seed_x, seed_y):
    x, y = bipolar(seed_x, d=256), bipolar(seed_y, d=256)
    assert np.array_equal(hdc.bind(x, hdc.bind(x, y)), y)


@given(st.integers(0, 2**31 - 1))
@settings(max_examples=25, deadline=None)
def test_bind_preserves_similarity_property(seed):
    rng = np.random.default_rng(seed)
    w, x, y = (hdc.random_bipolar(256, rng) for _ in range(3))
    assert hdc.cosine(hdc.bind(w, x), hdc.bind(w, y)) == pytest.approx(
        hdc.cosine(x, y), abs=1e-12
    )


# --- permute --------------------------------------------------------------------


def test_permute_identity_and_full_rotation():
    x = bipolar(18)
    assert np.array_equal(hdc.permute(x, 0), x)
    assert np.array_equal(hdc.permute(x, D), x)


def test_permute_inverse():
    x = bipolar(19)
    assert np.array_equal(hdc.permute(hdc.permute(x, 7), -7), x)


def test_permute_extracts_sequence_position():
    rng = np.random.default_rng(20)
    x, y, z = (hdc.random_bipolar(D, rng) for _ in range(3))
    q = hdc.bundle([x, hdc.permute(y, 1), hdc.permute(z, 2)], rng)
    assert hdc.cosine(hdc.permute(q, -1), y) > 0.1


@given(st.integers(0, 2**31 - 1), st.integers(-512, 512))
@settings(max_examples=25, deadline=None)
def test_permute_preserves_cosine_property(seed, k):
    rng = np.random.default_rng(seed)
    x, y = hdc.random_bipolar(256, rng), hdc.random_bipolar(256, rng)
    assert hdc.cosine(hdc.permute(x, k), hdc.permute(y, k)) == hdc.cosine(x, y)


# --- dictionary / recover -------------------------------------------------------


def _dictionary(rng, n=8):
    return hdc.Dictionary.from_pairs(
        [(f"v{i}", hdc.random_bipolar(D, rng)) for i in range(n)]
    )


def test_recover_exact_member():
    rng = np.random.default_rng(21)
    d = _dictionary(rng)
    assert hdc.recover(d.vector("v3"), d, 0.1) == "v3"


def test_recover_noise_returns_none():
    rng = np.random.default_rng(22)
    d = _dictionary(rng)
    assert hdc.recover(hdc.random_bipolar(D, rng), d, 0.1) is None


def test_recover_after_unbinding():
    rng = np.random.default_rng(23)
    w, x, y, z = (hdc.random_bipolar(D, rng) for _ in range(4))
    d = hdc.Dictionary.from_pairs([("x", x), ("y", y), ("z", z), ("w", w)])
    q = hdc.bundle([hdc.bind(w, x), hdc.bind(y, z)], rng)
    assert hdc.recover(hdc.bind(w, q), d, 0.1) == "x"


def test_recover_tie_breaks_to_lowest_index():
    rng = np.random.default_rng(24)
    v = hdc.random_bipolar(D, rng)
    d = hdc.Dictionary.from_pairs([("first", v), ("second", v.copy())])
    assert hdc.recover(v, d, 0.1) == "first"


def test_recover_idempotent_cleanup():
    rng = np.random.default_rng(25)
    d = _dictionary(rng)
    for label in d.labels:
        assert hdc.recover(d.vector(label), d, 0.1) == label


def test_recover_zero_query_is_none():
    rng = np.random.default_rng(26)
    assert hdc.recover(np.zeros(D), _dictionary(rng), 0.1) is None


def test_recover_dimension_mismatch():
    rng = np.random.default_rng(27)
    with pytest.raises(ValueError, match="dimension"):
        hdc.recover(np.ones(12), _dictionary(rng), 0.1)


def test_recover_theta_range():
    rng = np.random.default_rng(28)
    d = _dictionary(rng)
    with pytest.raises(ValueError, match="theta"):
        hdc.recover(d.vector("v0"), d, 1.0)


def test_dictionary_validation():
    rng = np.random.default_rng(29)
    v = hdc.random_bipolar(D, rng)
    with pytest.raises(ValueError, match="unique"):
        hdc.Dictionary.from_pairs([("a", v), ("a", v)])
    with pytest.raises(ValueError, match="empty"):
        hdc.Dictionary.from_pairs([])
