import numpy as np
import pytest

from hdnav import cml, persist
from hdnav.grid import GridCml, build_actions, train_grid
from hdnav.maze import object_graph


def test_object_model_round_trip_bit_exact(object_cml, tmp_path):
    path = tmp_path / "object.hdm"
    persist.save_cml(object_cml, path)
    loaded = persist.load_model(path)
    assert isinstance(loaded, cml.Cml)
    assert np.array_equal(loaded.S, object_cml.S)
    assert np.array_equal(loaded.A, object_cml.A)
    assert np.array_equal(loaded.G, object_cml.G)
    assert loaded.graph == object_cml.graph


def test_pseudo_inverse_recomputed_on_load(object_cml, tmp_path):
    path = tmp_path / "object.hdm"
    persist.save_cml(object_cml, path)
    loaded = persist.load_model(path)
    assert np.abs(loaded.A @ loaded.A_dagger @ loaded.A - loaded.A).max() < 1e-6


def test_grid_model_round_trip_bit_exact(grid_cml, tmp_path):
    path = tmp_path / "grid.hdm"
    persist.save_grid_cml(grid_cml, path)
    loaded = persist.load_model(path)
    assert isinstance(loaded, GridCml)
    assert np.array_equal(loaded.P, grid_cml.P)
    assert np.array_equal(loaded.A4, grid_cml.A4)
    assert (loaded.width, loaded.height) == (grid_cml.width, grid_cml.height)


def test_save_load_save_is_stable(grid_cml, tmp_path):
    p1, p2 = tmp_path / "g1.hdm", tmp_path / "g2.hdm"
    persist.save_grid_cml(grid_cml, p1)
    persist.save_grid_cml(persist.load_model(p1), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_weighted_graph_round_trips(tmp_path, rng):
    graph = cml.CmlGraph(
        ("x", "y", "z"),
        ((0, 1), (1, 0), (1, 2), (2, 1)),
        (1.0, 1.0, 2.5, 2.5),
    )
    model = cml.init_calculated(graph, 256, rng)
    path = tmp_path / "weighted.hdm"
    persist.save_cml(model, path)
    loaded = persist.load_model(path)
    assert loaded.graph.edge_weights == (1.0, 1.0, 2.5, 2.5)
    assert np.array_equal(loaded.G, model.G)


def test_truncated_file_rejected(object_cml, tmp_path):
    path = tmp_path / "object.hdm"
    persist.save_cml(object_cml, path)
    data = path.read_bytes()
    path.write_bytes(data[: len(data) - 100])
    with pytest.raises(ValueError, match="truncated"):
        persist.load_model(path)


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "junk.hdm"
    path.write_bytes(b"NOT-A-MODEL 1 object\n\n")
    with pytest.raises(ValueError, match="not a model file"):
        persist.load_model(path)


def test_unsupported_version_rejected(tmp_path):
    path = tmp_path / "future.hdm"
    path.write_bytes(b"HDNAV-MODEL 99 object\n\n")
    with pytest.raises(ValueError, match="version"):
        persist.load_model(path)
