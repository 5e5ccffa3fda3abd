import numpy as np
import pytest

from patrolppd import (
    BMP,
    DCP,
    EmptyProfile,
    Endpoint,
    ImpDetect,
    Intersection,
    LocalMaximum,
    Perfect,
    Poly,
    candidates,
    fence,
    find_fence_ppd,
    find_func,
    find_p,
    maximin_fence,
    perimeter,
    validate_config,
)
from scenarios import config_grid, label

GRID_P = np.linspace(0, 1, 4096)


def grid_maximin(curves):
    return np.min([c(GRID_P) for c in curves], axis=0).max()


def test_crossing_lines():
    res = find_p([Poly([0, 1]), Poly([1, -1])])
    assert res.p_opt == pytest.approx(0.5, abs=1e-12)
    assert isinstance(res.candidate_kind, Intersection)
    assert res.witness_segments == {1, 2}
    assert [p for p, _ in candidates([Poly([0, 1]), Poly([1, -1])])] == pytest.approx([0.5])


def test_parabola_vertex():
    res = find_p([Poly([0, 1, -1])])
    assert res.p_opt == pytest.approx(0.5, abs=1e-9)
    assert res.candidate_kind == LocalMaximum(1)
    assert res.value == pytest.approx(0.25)


def test_constant_curves():
    res = find_p([Poly([0.3]), Poly([0.7])])
    assert res.p_opt == 0.5 and res.value == pytest.approx(0.3)
    assert isinstance(res.candidate_kind, LocalMaximum)


def test_identical_curves_have_no_crossing():
    f = Poly([0, 1, -1])
    res = find_p([f, f])
    assert res.witness_segments == {1, 2}
    assert all(not isinstance(k, Intersection) for _, k in candidates([f, f]))


def test_tie_goes_to_smallest_p():
    # two separate peaks of equal height
    f = Poly([0, 1, -1]) * Poly([0, 1, -1])
    g = Poly([1.0 / 16 + 1e-12])
    res = find_p([f, g])
    assert res.p_opt == pytest.approx(0.5)
    h = Poly([0.5, -1]) * Poly([0.5, -1])  # (0.5 - p)^2, peaks at both ends
    res = find_p([Poly([0.1]), Poly([1]) - h * 4])
    assert res.p_opt <= 0.5 + 1e-9


def test_endpoint_only_when_strictly_better():
    res = find_p([Poly([0, 1])])
    assert res.p_opt == 1.0 and res.candidate_kind == Endpoint(1.0)
    res = find_p([Poly([0, 1]), Poly([1, -1])])
    assert 0 < res.p_opt < 1


def test_empty_profile():
    with pytest.raises(EmptyProfile):
        find_p([])


def test_sweep_numbers():
    r9 = find_p(find_func(validate_config(perimeter(9, 8))))
    r15 = find_p(find_func(validate_config(perimeter(15, 8))))
    assert r9.value == pytest.approx(0.423, abs=0.01)
    assert r15.value == pytest.approx(0.05, abs=0.01)
    assert any(c.p == r9.p_opt for c in r9.all_candidates)


def test_value_is_min_at_p_opt():
    prof = find_func(validate_config(perimeter(12, 9)))
    res = find_p(prof)
    assert res.value == pytest.approx(prof.minimum(res.p_opt), abs=1e-9)
    assert res.value > 0


def test_increasing_in_t():
    values = [find_p(find_func(validate_config(perimeter(16, t)))).value for t in range(9, 16)]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_fence_location_dependence():
    results = maximin_fence(find_fence_ppd(validate_config(fence(8, 10))))
    assert len(results) == 8
    assert len({round(r.p_opt, 9) for r in results}) >= 2


def test_fence_small_grid_search():
    table = find_fence_ppd(validate_config(fence(4, 5)))
    for j, res in enumerate(maximin_fence(table), start=1):
        assert res.value == pytest.approx(grid_maximin(table.location(j).curves), abs=1e-4)


def test_fence_single_segment_constant():
    # the only segment is watched at instants 0 and 1
    cfg = validate_config(fence(1, 1, sensing=ImpDetect(0.7)))
    (res,) = maximin_fence(find_fence_ppd(cfg))
    assert res.value == pytest.approx(1 - 0.3**2)
    assert res.p_opt == 0.5


DENSE_P = np.linspace(0, 1, 65537)


def _profiles(cfg):
    if cfg.is_fence:
        table = find_fence_ppd(cfg)
        return [table.location(j) for j in range(1, cfg.d + 1)]
    return [find_func(cfg)]


@pytest.mark.parametrize("cfg", list(config_grid(ds=(3, 5))), ids=label)
def test_no_grid_point_beats_optimum(cfg):
    for prof in _profiles(cfg):
        res = find_p(prof)
        assert prof.minimum(GRID_P).max() <= res.value + 1e-6
        # envelope slopes stay below ~5, so a 2^16-cell grid lands within 1e-4 of the peak
        assert res.value == pytest.approx(prof.minimum(DENSE_P).max(), abs=1e-4)


@pytest.mark.parametrize("cfg", list(config_grid(envs=("perimeter",), sensing=(Perfect(),))), ids=label)
def test_deterministic_edge(cfg):
    prof = find_func(cfg)
    forward = 0.0 if isinstance(cfg.movement, BMP) else 1.0
    assert prof.minimum(forward) == 0.0
    assert prof.minimum(1.0 - forward) == 0.0 or isinstance(cfg.movement, BMP)
    assert find_p(prof).value > 0
