import json

import numpy as np
import numpy.testing as npt
import pytest

from orderfield import (
    FourierCoefficients,
    build_dft_matrix,
    coeffs_from_samples,
    eval_derivative,
    eval_field,
    load_field,
    random_field,
    samples_from_coeffs,
    save_field,
)


def naive_eval(coeffs, b, t):
    """Direct frequency-sum evaluation, the oracle for the Horner path."""
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    ks = np.arange(-b, b + 1)
    return (coeffs[None, :] * np.exp(2j * np.pi * np.outer(t, ks))).sum(axis=1)


def test_coefficient_vector_length_is_checked():
    with pytest.raises(ValueError):
        FourierCoefficients(b=1, coeffs=np.zeros(4, dtype=complex))
    with pytest.raises(ValueError):
        FourierCoefficients(b=-1, coeffs=np.zeros(1, dtype=complex))
    with pytest.raises(ValueError):
        FourierCoefficients(b=0, coeffs=np.array([np.nan + 0j]))


def test_real_valued_flag_requires_conjugate_symmetry():
    ok = FourierCoefficients(
        b=1, coeffs=np.array([0.1 - 0.2j, 0.3, 0.1 + 0.2j]), real_valued=True
    )
    assert ok.real_valued
    with pytest.raises(ValueError):
        FourierCoefficients(b=1, coeffs=np.array([0.1j, 0.3, 0.2j]), real_valued=True)


def test_bounded_flag_requires_unit_magnitude_sum():
    FourierCoefficients(b=1, coeffs=np.array([0.25, 0.5, 0.25 + 0j]), bounded=True)
    with pytest.raises(ValueError):
        FourierCoefficients(b=1, coeffs=np.array([0.5, 0.5, 0.5 + 0j]), bounded=True)


def test_coefficients_are_frozen(cosine_field):
    with pytest.raises(ValueError):
        cosine_field.coeffs[0] = 1.0


def test_eval_matches_naive_sum(rng):
    for b in (0, 1, 3, 5):
        coeffs = rng.normal(size=2 * b + 1) + 1j * rng.normal(size=2 * b + 1)
        c = FourierCoefficients(b=b, coeffs=coeffs)
        t = rng.random(40)
        npt.assert_allclose(eval_field(c, t), naive_eval(coeffs, b, t), atol=1e-12)


def test_eval_is_periodic(cosine_field):
    t = np.array([0.1, 0.37, 0.9])
    npt.assert_allclose(eval_field(cosine_field, t + 1.0), eval_field(cosine_field, t), atol=1e-12)
    npt.assert_allclose(eval_field(cosine_field, t - 2.0), eval_field(cosine_field, t), atol=1e-12)


def test_eval_cosine_closed_form(cosine_field):
    t = np.linspace(0.0, 1.0, 17)
    expected = 0.5 + 0.5 * np.cos(2 * np.pi * t)
    vals = eval_field(cosine_field, t)
    npt.assert_allclose(vals.real, expected, atol=1e-12)
    assert np.max(np.abs(vals.imag)) < 1e-12


def test_derivative_matches_naive_sum(rng):
    for b in (1, 2, 4):
        coeffs = rng.normal(size=2 * b + 1) + 1j * rng.normal(size=2 * b + 1)
        c = FourierCoefficients(b=b, coeffs=coeffs)
        ks = np.arange(-b, b + 1)
        t = rng.random(25)
        expected = naive_eval(coeffs * 2j * np.pi * ks, b, t)
        npt.assert_allclose(eval_derivative(c, t), expected, atol=1e-11)


def test_derivative_matches_finite_differences(cosine_field):
    t = np.array([0.12, 0.48, 0.81])
    h = 1e-6
    fd = (eval_field(cosine_field, t + h) - eval_field(cosine_field, t - h)) / (2 * h)
    npt.assert_allclose(eval_derivative(cosine_field, t), fd, atol=1e-5)


def test_derivative_bound_for_bounded_fields(rng):
    # |g'| <= 2*pi*b when the coefficient magnitudes sum to one.
    for b in (1, 2, 4):
        c = random_field(b, rng)
        d = eval_derivative(c, np.linspace(0, 1, 512, endpoint=False))
        assert np.max(np.abs(d)) <= 2 * np.pi * b + 1e-9


def test_dft_matrix_entries_by_direct_formula():
    b = 2
    m = 2 * b + 1
    phi = build_dft_matrix(b).entries
    for l in range(m):
        for i, k in enumerate(range(-b, b + 1)):
            npt.assert_allclose(phi[l, i], np.exp(2j * np.pi * k * l / m), atol=1e-14)


def test_dft_matrix_columns_are_orthogonal():
    for b in range(9):
        phi = build_dft_matrix(b)
        m = 2 * b + 1
        gram = phi.conj_t @ phi.entries
        npt.assert_allclose(gram, m * np.eye(m), atol=1e-10)


def test_dft_matrix_rejects_negative_bandwidth():
    with pytest.raises(ValueError):
        build_dft_matrix(-1)


def test_grid_samples_match_field_values(cosine_field):
    grid = np.arange(3) / 3
    npt.assert_allclose(
        samples_from_coeffs(cosine_field), eval_field(cosine_field, grid), atol=1e-12
    )


def test_coeff_sample_roundtrip(rng):
    for b in (0, 1, 4, 8):
        coeffs = rng.normal(size=2 * b + 1) + 1j * rng.normal(size=2 * b + 1)
        c = FourierCoefficients(b=b, coeffs=coeffs)
        back = coeffs_from_samples(samples_from_coeffs(c))
        assert back.b == b
        npt.assert_allclose(back.coeffs, coeffs, atol=1e-10)


def test_coeffs_from_samples_rejects_even_length():
    with pytest.raises(ValueError):
        coeffs_from_samples(np.ones(4, dtype=complex))


def test_random_field_is_bounded_and_real(rng):
    for b in (0, 1, 3):
        c = random_field(b, rng)
        assert c.bounded and c.real_valued
        npt.assert_allclose(np.sum(np.abs(c.coeffs)), 1.0, atol=1e-12)
        vals = eval_field(c, rng.random(200))
        assert np.max(np.abs(vals.real)) <= 1.0 + 1e-12
        assert np.max(np.abs(vals.imag)) < 1e-10


def test_random_field_complex_mode(rng):
    c = random_field(3, rng, real_valued=False)
    assert not c.real_valued
    assert c.bounded
    vals = eval_field(c, rng.random(50))
    assert np.max(np.abs(vals)) <= 1.0 + 1e-12


def test_random_field_is_deterministic():
    a = random_field(2, np.random.default_rng(77))
    b = random_field(2, np.random.default_rng(77))
    npt.assert_array_equal(a.coeffs, b.coeffs)


def test_random_field_constant_case():
    c = random_field(0, np.random.default_rng(3))
    assert c.coeffs.shape == (1,)
    assert abs(abs(c.coeffs[0]) - 1.0) < 1e-12


def test_json_roundtrip_exact(rng):
    c = random_field(2, rng)
    back = FourierCoefficients.from_json_dict(c.to_json_dict())
    npt.assert_array_equal(back.coeffs, c.coeffs)
    assert back.b == c.b and back.real_valued == c.real_valued and back.bounded


def test_file_roundtrip(tmp_path, cosine_field):
    path = tmp_path / "field.json"
    save_field(cosine_field, path)
    back = load_field(path)
    npt.assert_array_equal(back.coeffs, cosine_field.coeffs)
    # the document is plain JSON with the expected keys
    doc = json.loads(path.read_text())
    assert set(doc) == {"b", "real_valued", "coeffs"}


def test_from_json_dict_rejects_malformed():
    with pytest.raises(ValueError):
        FourierCoefficients.from_json_dict({"b": 1})
    with pytest.raises(ValueError):
        FourierCoefficients.from_json_dict({"b": 1, "real_valued": False, "coeffs": 3})


def test_unbounded_field_loads_unbounded():
    c = FourierCoefficients(b=0, coeffs=np.array([2.0 + 0j]))
    back = FourierCoefficients.from_json_dict(c.to_json_dict())
    assert not back.bounded
