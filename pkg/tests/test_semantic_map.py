import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hdnav import hdc, maze as mz, semantic_map as sm

D = 1000
LABELS = list(mz.OBJECT_LABELS)


def random_objects(seed=11):
    rng = np.random.default_rng(seed)
    return hdc.Dictionary.from_pairs(
        [(label, hdc.random_bipolar(D, rng)) for label in LABELS]
    )


def synthetic_memory(seed):
    """Map built over pseudo-orthogonal random 'positions' (the easy regime)."""
    rng = np.random.default_rng(seed)
    objects = hdc.Dictionary.from_pairs(
        [(label, hdc.random_bipolar(D, rng)) for label in LABELS]
    )
    cells = [(i, i) for i in range(8)]
    positions = [hdc.random_bipolar(D, rng) for _ in range(8)]
    terms = [
        hdc.sign(hdc.bind(objects.vector(label), positions[i]))
        for i, label in enumerate(LABELS)
    ]
    return sm.MapMemory(
        map_hv=hdc.bundle(terms, rng),
        objects=objects,
        positions=hdc.Dictionary.from_pairs(
            [(sm.position_label(c), p) for c, p in zip(cells, positions)]
        ),
        cell_of=dict(zip(LABELS, cells)),
    )


# --- position labels ---------------------------------------------------------------


def test_position_label_round_trip():
    assert sm.parse_position_label(sm.position_label((3, 17))) == (3, 17)


# --- build_map ----------------------------------------------------------------------


def test_map_is_bipolar(viable_setup):
    _, memory, _ = viable_setup
    assert hdc.is_bipolar(memory.map_hv)


def test_map_bipolar_across_seeds(object_cml, grid_cml):
    objects = object_cml.state_dictionary()
    for seed in range(20):
        rng = np.random.default_rng(seed)
        maze = mz.generate_maze(rng)
        memory = sm.build_map(objects, maze, grid_cml, rng)
        assert hdc.is_bipolar(memory.map_hv)


def test_map_unbinding_reveals_position(viable_setup):
    maze, memory, _ = viable_setup
    released = hdc.bind(memory.map_hv, memory.objects.vector("k"))
    k_state = memory.positions.vector(memory.position_of("k"))
    assert hdc.cosine(released, k_state) > 0.1


def test_map_term_order_is_irrelevant():
    rng = np.random.default_rng(31)
    terms = [hdc.random_bipolar(D, rng) for _ in range(8)]
    eta = hdc.random_bipolar(D, rng)
    forward = hdc.sign(np.sum(terms + [eta], axis=0))
    shuffled = hdc.sign(np.sum(terms[::-1] + [eta], axis=0))
    assert np.array_equal(forward, shuffled)


def test_map_dictionaries_complete(viable_setup):
    maze, memory, _ = viable_setup
    assert len(memory.objects) == 8
    assert len(memory.positions) == 8
    for label in LABELS:
        assert memory.cell_of[label] == maze.placements[label]


# --- viability ----------------------------------------------------------------------


def test_synthetic_orthogonal_positions_nearly_always_viable():
    viable = sum(sm.check_viability(synthetic_memory(seed)) for seed in range(1000))
    assert viable >= 990


def test_fixture_map_is_viable(viable_setup):
    _, memory, _ = viable_setup
    assert sm.check_viability(memory)


def test_tampered_position_dictionary_fails_viability(viable_setup):
    _, memory, _ = viable_setup
    vectors = memory.positions.vectors.copy()
    vectors[0] = vectors[1] + 1e-9  # near-duplicate forces ambiguous recovery
    tampered = sm.MapMemory(
        map_hv=memory.map_hv,
        objects=memory.objects,
        positions=hdc.Dictionary(memory.positions.labels, vectors),
        cell_of=memory.cell_of,
    )
    assert not sm.check_viability(tampered)


def test_trained_grid_viability_fraction_is_small(object_cml, grid_cml, config):
    # correlated grid states make most random arrangements ambiguous; the
    # harness measures the fraction and regenerates until viable
    from hdnav import experiments

    records = [
        experiments.viability_trial(config, object_cml, grid_cml, i) for i in range(200)
    ]
    viable = sum(r["viable"] for r in records)
    ready = sum(r["mission_ready"] for r in records)
    assert 0 < viable < 60
    assert 0 < ready <= viable  # readiness additionally needs arrival feedback


def test_mission_ready_implies_viable_not_conversely(object_cml, grid_cml):
    objects = object_cml.state_dictionary()
    viable_only = 0
    checked = 0
    for i in range(300):
        rng = np.random.default_rng([61, i])
        maze = mz.generate_maze(rng)
        memory = sm.build_map(objects, maze, grid_cml, rng)
        if sm.mission_ready(memory):
            assert sm.check_viability(memory)
        elif sm.check_viability(memory):
            viable_only += 1
        checked += 1
    # near-parallel states make the reverse queries strictly harder, so
    # some viable maps are still not mission ready
    assert viable_only > 0


# --- queries ------------------------------------------------------------------------


def test_round_trip_on_viable_map(viable_setup):
    _, memory, _ = viable_setup
    for label in LABELS:
        pos = sm.query_position(memory, memory.objects.vector(label))
        assert pos == memory.position_of(label)
        back = sm.query_object(memory, memory.positions.vector(pos))
        assert back == label


def test_query_position_with_noise_vector_is_none(viable_setup):
    _, memory, _ = viable_setup
    rng = np.random.default_rng(33)
    assert sm.query_position(memory, hdc.random_bipolar(D, rng)) is None


def test_query_position_accepts_approximate_object(viable_setup):
    _, memory, _ = viable_setup
    rng = np.random.default_rng(34)
    noisy = memory.objects.vector("t") + 0.5 * rng.normal(size=D)
    assert sm.query_position(memory, noisy) == memory.position_of("t")


def test_query_object_at_door_cell(viable_setup):
    _, memory, _ = viable_setup
    state = memory.positions.vector(memory.position_of("a"))
    assert sm.query_object(memory, state) == "a"


def test_query_object_with_noise_vector_is_none(viable_setup):
    _, memory, _ = viable_setup
    rng = np.random.default_rng(35)
    assert sm.query_object(memory, rng.normal(size=D)) is None


# --- policy -------------------------------------------------------------------------


def test_policy_is_bipolar_and_counts_goals():
    rng = np.random.default_rng(36)
    policy = sm.encode_policy(["k", "t", "h"], random_objects(), rng)
    assert hdc.is_bipolar(policy.policy_hv)
    assert policy.remaining == 3


def test_policy_replays_goals_in_order():
    rng = np.random.default_rng(37)
    objects = random_objects()
    policy = sm.encode_policy(["k", "t", "h"], objects, rng)
    revealed = []
    for _ in range(4):
        goal, policy = sm.next_goal(policy, objects)
        revealed.append(goal)
    assert revealed == ["k", "t", "h", None]


def test_singleton_policy():
    rng = np.random.default_rng(38)
    objects = random_objects()
    policy = sm.encode_policy(["t"], objects, rng)
    goal, policy = sm.next_goal(policy, objects)
    assert goal == "t"
    goal, _ = sm.next_goal(policy, objects)
    assert goal is None


def test_policy_pseudo_orthogonal_to_raw_objects():
    rng = np.random.default_rng(39)
    objects = random_objects()
    policy = sm.encode_policy(["k", "t", "h"], objects, rng)
    for label in LABELS:
        assert abs(hdc.cosine(policy.policy_hv, objects.vector(label))) < 0.1


def test_policy_rejects_unknown_goal():
    with pytest.raises(ValueError, match="unknown goal"):
        sm.encode_policy(["k", "x"], random_objects(), np.random.default_rng(0))


def test_policy_rejects_empty():
    with pytest.raises(ValueError, match="at least one"):
        sm.encode_policy([], random_objects(), np.random.default_rng(0))


@given(st.lists(st.sampled_from(LABELS), min_size=1, max_size=5), st.integers(0, 2**31 - 1))
@settings(max_examples=30, deadline=None)
def test_policy_replay_order_property(goals, seed):
    rng = np.random.default_rng([seed, 1])
    objects = random_objects(seed)
    policy = sm.encode_policy(goals, objects, rng)
    revealed = []
    for _ in range(len(goals)):
        goal, policy = sm.next_goal(policy, objects)
        revealed.append(goal)
    assert revealed == goals


def test_policy_exhaustion_rate():
    # after the last goal the residual is permuted junk; its projection on
    # some object grazes the 0.1 noise floor in under ~2% of seeds
    false_positives = 0
    for i in range(400):
        rng = np.random.default_rng([53, i])
        objects = hdc.Dictionary.from_pairs(
            [(label, hdc.random_bipolar(D, rng)) for label in LABELS]
        )
        goals = [LABELS[int(rng.integers(0, 8))] for _ in range(int(rng.integers(1, 6)))]
        policy = sm.encode_policy(goals, objects, rng)
        for _ in goals:
            _, policy = sm.next_goal(policy, objects)
        goal, _ = sm.next_goal(policy, objects)
        false_positives += goal is not None
    assert false_positives <= 8  # ~0.8% measured over 3000 seeds
