import json

import numpy as np
import pytest

from metricext.space import (
    InstanceError,
    dist_to_subset,
    instance_from_dict,
    load_instance,
    load_space,
    nearest_in_subset,
)


def test_line_instance_accepted(i1):
    assert i1.space.scale == 1.0
    assert i1.space.d.max() == 1.0
    assert i1.subset.members == (0, 1)


def test_normalization_records_scale():
    space, _ = load_space([0, 1], 0, 1, points=[[0, 0], [2, 0]])
    assert space.scale == 2.0
    assert space.d[0, 1] == 1.0


def test_triangle_violation_witness():
    d = [[0, 1, 3], [1, 0, 1], [3, 1, 0]]
    with pytest.raises(InstanceError) as err:
        load_space([0, 1], 0, 1, distances=d)
    assert err.value.witness == (0, 1, 2)


@pytest.mark.parametrize("kwargs, fragment", [
    (dict(subset=[0, 1], a=0, b=1, distances=[[0, 0], [0, 0]]), "duplicate"),
    (dict(subset=[0], a=0, b=0, points=[[0], [1]]), "at least two"),
    (dict(subset=[0, 1], a=0, b=0, points=[[0], [1]]), "differ"),
    (dict(subset=[0, 1], a=0, b=2, points=[[0], [1], [2]]), "not in the subset"),
    (dict(subset=[0, 1], a=0, b=1, distances=[[0, 1], [2, 0]]), "symmetric"),
    (dict(subset=[0, 1], a=0, b=1, distances=[[0, -1], [-1, 0]]), "negative"),
    (dict(subset=[0, 5], a=0, b=5, points=[[0], [1]]), "out of range"),
])
def test_rejections(kwargs, fragment):
    with pytest.raises(InstanceError, match=fragment):
        load_space(**kwargs)


def test_distance_to_subset(i1):
    assert dist_to_subset(i1.space, i1.subset, 2) == pytest.approx(0.4)
    assert dist_to_subset(i1.space, i1.subset, 0) == 0.0
    assert dist_to_subset(i1.space, i1.subset, 3) == pytest.approx(0.4)


def test_nearest_in_subset(i1):
    assert nearest_in_subset(i1.space, i1.subset, 2) == 0
    assert nearest_in_subset(i1.space, i1.subset, 3) == 1


def test_nearest_tie_goes_to_lowest_id():
    space, sub = load_space([0, 1], 0, 1, points=[[0.0], [1.0], [0.5]])
    assert nearest_in_subset(space, sub, 2) == 0


def test_nearest_attains_distance(i1):
    rng = np.random.default_rng(3)
    pts = rng.uniform(size=(12, 2))
    space, sub = load_space([1, 4, 7], 1, 4, points=pts)
    for y in range(12):
        dy = dist_to_subset(space, sub, y)
        assert all(dy <= space.d[y, x] for x in sub.members)
        assert dy == space.d[y, nearest_in_subset(space, sub, y)]


def test_rescaling_keeps_metric():
    rng = np.random.default_rng(5)
    pts = rng.uniform(size=(8, 3))
    s1, _ = load_space([0, 1], 0, 1, points=pts)
    s2, _ = load_space([0, 1], 0, 1, points=pts * 37.0)
    assert s2.scale == pytest.approx(37.0 * s1.scale)
    assert np.allclose(s1.d, s2.d, atol=1e-12)


def test_instance_file_round_trip(tmp_path):
    data = {"distances": [[0, 1, 0.5], [1, 0, 0.7], [0.5, 0.7, 0]], "subset": [0, 1], "a": 0, "b": 1,
            "p": [[0, 2], [2, 0]], "group": [[0, 1, 2], [1, 0, 2]]}
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(data))
    inst = load_instance(path)
    assert inst.p.shape == (2, 2)
    assert inst.group == ((0, 1, 2), (1, 0, 2))


@pytest.mark.parametrize("data, fragment", [
    ({"subset": [0, 1], "a": 0, "b": 1}, "exactly one"),
    ({"points": [[0], [1]], "distances": [[0, 1], [1, 0]], "subset": [0, 1], "a": 0, "b": 1}, "exactly one"),
    ({"points": [[0], [1]], "subset": [0, 1], "a": 0}, "missing 'b'"),
    ({"points": [[0], [1]], "subset": [0, 1], "a": 0, "b": 1, "p": [[0]]}, "p must be"),
])
def test_instance_rejections(data, fragment):
    with pytest.raises(InstanceError, match=fragment):
        instance_from_dict(data)


def test_corrupt_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(InstanceError, match="cannot parse"):
        load_instance(path)
