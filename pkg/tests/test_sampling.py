import numpy as np
import numpy.testing as npt
import pytest

from orderfield import (
    DeploymentDraw,
    SampleSet,
    deploy,
    extract_quantile_samples,
    load_samples,
    observe,
    quantile_indices,
    random_field,
    save_samples,
    sorted_locations,
)
from orderfield.fields import eval_field


def test_deploy_draws_uniform_locations(rng):
    d = deploy(500, rng)
    assert d.n == 500
    assert d.locations.shape == (500,)
    assert d.locations.min() >= 0.0 and d.locations.max() <= 1.0


def test_deploy_rejects_empty():
    with pytest.raises(ValueError):
        deploy(0, np.random.default_rng(0))


def test_deploy_is_deterministic():
    a = deploy(20, np.random.default_rng(5))
    b = deploy(20, np.random.default_rng(5))
    npt.assert_array_equal(a.locations, b.locations)


def test_draw_validates_locations():
    with pytest.raises(ValueError):
        DeploymentDraw(n=2, locations=np.array([0.5]))
    with pytest.raises(ValueError):
        DeploymentDraw(n=2, locations=np.array([0.5, 1.5]))


def test_sorted_locations_sorts_without_mutating(rng):
    d = deploy(50, rng)
    srt = sorted_locations(d)
    assert np.all(np.diff(srt) >= 0)
    npt.assert_array_equal(np.sort(d.locations), srt)


def test_observe_evaluates_at_sorted_locations(rng, cosine_field):
    d = deploy(64, rng)
    s = observe(cosine_field, d)
    assert s.n == 64
    assert s.b_source == 1
    npt.assert_allclose(s.values, eval_field(cosine_field, sorted_locations(d)), atol=1e-12)


def test_sample_set_validates_length():
    with pytest.raises(ValueError):
        SampleSet(n=3, values=np.zeros(2, dtype=complex))


def test_quantile_indices_small_cases():
    npt.assert_array_equal(quantile_indices(9, 1), [1, 4, 7])
    npt.assert_array_equal(quantile_indices(10, 1), [1, 4, 7])
    npt.assert_array_equal(quantile_indices(7, 3), [1, 2, 3, 4, 5, 6, 7])
    npt.assert_array_equal(quantile_indices(5, 0), [1])


def test_quantile_indices_track_grid_levels():
    # rank_l / n stays within 1/n of the level l/(2b+1), and ranks increase
    for b in (1, 2, 5):
        m = 2 * b + 1
        for n in (m, 17, 1003, 10**5):
            if n < m:
                continue
            ranks = quantile_indices(n, b)
            assert ranks[0] == 1
            assert np.all(np.diff(ranks) > 0)
            assert ranks.min() >= 1 and ranks.max() <= n
            levels = np.arange(m) / m
            assert np.max(np.abs(ranks / n - levels)) <= 1.0 / n + 1e-15


def test_quantile_indices_exact_at_huge_counts():
    # pure integer arithmetic: no float rounding even where n*l/(2b+1) is
    # a hair below an integer
    n, b = 10**9, 1
    npt.assert_array_equal(quantile_indices(n, b), [1, n // 3 + 1, (2 * n) // 3 + 1])


def test_quantile_indices_reject_insufficient_samples():
    with pytest.raises(ValueError):
        quantile_indices(4, 2)
    with pytest.raises(ValueError):
        quantile_indices(10, -1)


def test_extract_quantile_samples_is_one_based():
    s = SampleSet(n=4, values=np.array([10.0, 20.0, 30.0, 40.0], dtype=complex))
    npt.assert_array_equal(extract_quantile_samples(s, np.array([1, 4])), [10.0, 40.0])
    with pytest.raises(ValueError):
        extract_quantile_samples(s, np.array([0]))
    with pytest.raises(ValueError):
        extract_quantile_samples(s, np.array([5]))


def test_sample_file_roundtrip(tmp_path, rng):
    field = random_field(2, rng)
    s = observe(field, deploy(40, rng, seed_label="1234"))
    csv_path = tmp_path / "samples.csv"
    sidecar = tmp_path / "samples.json"
    save_samples(s, csv_path, sidecar)
    back = load_samples(csv_path, sidecar)
    assert back.n == s.n
    assert back.b_source == 2
    assert back.seed == "1234"
    npt.assert_array_equal(back.values, s.values)
    header = csv_path.read_text().splitlines()[0]
    assert header == "value_re,value_im"


def test_load_samples_rejects_wrong_header(tmp_path):
    csv_path = tmp_path / "samples.csv"
    sidecar = tmp_path / "samples.json"
    csv_path.write_text("re,im\n1,2\n")
    sidecar.write_text('{"n": 1, "b_source": 0, "seed": ""}\n')
    with pytest.raises(ValueError):
        load_samples(csv_path, sidecar)
