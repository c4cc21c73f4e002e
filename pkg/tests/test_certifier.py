import cmath
import math

import numpy as np
import pytest

from boundarykit import (DegenerateArguments, GridConfig, MissingAlternation,
                         ScalarFunction, UnboundedDefect,
                         alternating_bump_function, certify_complex_region,
                         certify_interval, const_function, doubling_defect,
                         extend_by_symmetry, five_term_defect, pole_function,
                         vol3_slice)
from boundarykit.certifier import BoundCertificate, RegionSpec

FAST_GRID = GridConfig(points_per_region=2000)


def smooth_real():
    return ScalarFunction(evaluator=lambda x: math.exp(-(x - 0.5) ** 2),
                          field_tag="real", name="gauss")


def smooth_complex():
    return ScalarFunction(evaluator=lambda z: math.exp(-abs(complex(z) - 0.5) ** 2),
                          field_tag="complex", name="gauss")


# ---------------------------------------------------------------------------
# five-term and doubling defects


def test_five_term_of_constant_is_the_constant():
    F = const_function(2.5)
    assert five_term_defect(F, 0.4, 0.7) == 2.5
    assert five_term_defect(F, -3.0, 5.0) == 2.5


def test_five_term_of_vol3_slice_vanishes():
    F = vol3_slice()
    rng = np.random.default_rng(91)
    for _ in range(100):
        x = complex(rng.standard_normal(), rng.standard_normal())
        y = complex(rng.standard_normal(), rng.standard_normal())
        if min(abs(x), abs(x - 1), abs(y), abs(y - 1), abs(x - y)) < 1e-3:
            continue
        assert abs(five_term_defect(F, x, y)) <= 1e-7


def test_five_term_of_pole_grows_without_bound():
    F = pole_function()
    values = [abs(five_term_defect(F, 1.0 - 2.0 ** -m, (1.0 - 2.0 ** -m) ** 2))
              for m in range(3, 16)]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[-1] > 1e3


def test_five_term_rejects_degenerate_arguments():
    F = const_function(1.0)
    with pytest.raises(DegenerateArguments):
        five_term_defect(F, 1.0, 0.5)
    with pytest.raises(DegenerateArguments):
        five_term_defect(F, 0.5, 0.5)


def test_doubling_examples():
    assert doubling_defect(const_function(3.0), 0.4) == 3.0
    F = ScalarFunction(evaluator=lambda x: x, field_tag="real")
    assert doubling_defect(F, 0.5) == pytest.approx(2.25, abs=1e-15)


def test_doubling_equals_five_term_at_squared_point():
    rng = np.random.default_rng(92)
    F = smooth_real()
    G = smooth_complex()
    for _ in range(200):
        x = rng.uniform(-2.0, 2.0)
        if min(abs(x), abs(x - 1), abs(x + 1)) < 1e-2:
            continue
        assert doubling_defect(F, x) == pytest.approx(
            five_term_defect(F, x, x * x), abs=1e-12)
        z = complex(x, rng.uniform(-1, 1))
        if min(abs(z), abs(z - 1), abs(z + 1), abs(z - z * z)) < 1e-2:
            continue
        assert doubling_defect(G, z) == pytest.approx(
            five_term_defect(G, z, z * z), abs=1e-12)


def test_doubling_rejects_minus_one():
    with pytest.raises(DegenerateArguments):
        doubling_defect(const_function(1.0), -1.0)


# ---------------------------------------------------------------------------
# interval certification


def test_certificate_with_zero_increments_reduces_to_m_base():
    cert = certify_interval(const_function(0.0), delta=0.125, grid=FAST_GRID,
                            overrides={"M_base": 4.0, "B_defect": 0.0,
                                       "M_near2": 0.0})
    assert cert.certified_bound == 4.0
    assert cert.provenance["M_base"] == "analytic"


def test_certificate_with_unit_constants():
    cert = certify_interval(const_function(0.0), delta=0.125, grid=FAST_GRID,
                            overrides={"M_base": 1.0, "B_defect": 1.0,
                                       "M_near2": 0.0})
    assert cert.certified_bound == pytest.approx(3.0, abs=1e-15)


def test_certificate_formula_reconstruction():
    cert = certify_interval(smooth_real(), delta=0.125, grid=FAST_GRID)
    c = cert.inputs["B_defect"] + 2.0 * cert.inputs["M_near2"]
    assert cert.certified_bound == cert.inputs["M_base"] + 2.0 * c
    assert set(cert.provenance.values()) == {"empirical"}
    assert cert.region.kind == "real_interval"
    assert cert.k_max < 60


def test_certificate_soundness_on_finer_grid():
    F = alternating_bump_function()
    delta = 0.125
    cert = certify_interval(F, delta=delta, grid=FAST_GRID)
    fine = np.linspace(1.0 - delta, 1.0 - 1e-9, 10 * FAST_GRID.points_per_region)
    emp = max(abs(F(x)) for x in fine)
    assert cert.certified_bound + 1e-9 >= emp


def test_certificate_monotonicity():
    base = dict(M_base=1.0, B_defect=0.5, M_near2=0.25)
    cert = certify_interval(const_function(0.0), delta=0.125, grid=FAST_GRID,
                            overrides=base)
    for key in base:
        bigger = dict(base)
        bigger[key] = base[key] + 1.0
        cert_b = certify_interval(const_function(0.0), delta=0.125,
                                  grid=FAST_GRID, overrides=bigger)
        assert cert_b.certified_bound >= cert.certified_bound


def test_pole_is_refused():
    with pytest.raises(UnboundedDefect):
        certify_interval(pole_function(), delta=0.125, grid=FAST_GRID)
    with pytest.raises(UnboundedDefect):
        certify_interval(pole_function(), delta=0.02, grid=FAST_GRID)


def test_interval_rejects_bad_delta():
    with pytest.raises(ValueError):
        certify_interval(const_function(1.0), delta=1.5)


def test_certificate_reproducible():
    a = certify_interval(smooth_real(), delta=0.1, grid=FAST_GRID)
    b = certify_interval(smooth_real(), delta=0.1, grid=FAST_GRID)
    assert a == b


# ---------------------------------------------------------------------------
# symmetry extension


def _near_one_empirical_cert(F, delta, n=20_000):
    xs = np.concatenate([np.linspace(1.0 - delta, 1.0 - 1e-9, n),
                         np.linspace(1.0 + 1e-9, 1.0 / (1.0 - delta), n)])
    sup = max(abs(F(x)) for x in xs)
    region = RegionSpec(kind="real_interval", delta=delta,
                        target=f"[{1 - delta}, 1)", base="caller-supplied")
    return BoundCertificate(region=region, certified_bound=sup,
                            inputs={"M_base": sup, "B_defect": 0.0,
                                    "M_near2": 0.0},
                            k_max=0, provenance={"M_base": "empirical"})


def test_extension_requires_alternation_declaration():
    cert = certify_interval(smooth_real(), delta=0.125, grid=FAST_GRID)
    with pytest.raises(MissingAlternation):
        extend_by_symmetry(cert, smooth_real())


def test_extension_bounds_zero_and_infinity_neighborhoods():
    F = alternating_bump_function()
    delta = 0.125
    cert = certify_interval(F, delta=delta, grid=FAST_GRID)
    glob = extend_by_symmetry(cert, F, grid=FAST_GRID)
    rng = np.random.default_rng(93)
    for _ in range(500):
        x = rng.uniform(-delta, delta)
        if abs(x) < 1e-8:
            continue
        assert abs(F(x)) <= glob.certified_bound + 1e-12
        big = 1.0 / x
        assert abs(F(big)) <= glob.certified_bound + 1e-12


def test_extension_matches_brute_force_sup():
    F = alternating_bump_function()
    delta = 0.125
    cert = _near_one_empirical_cert(F, delta)
    glob = extend_by_symmetry(cert, F, grid=GridConfig(points_per_region=20_000))
    xs = np.linspace(-60.0, 60.0, 600_001)
    xs = xs[(np.abs(xs) > 1e-7) & (np.abs(xs - 1.0) > 1e-7)]
    brute = max(abs(F(x)) for x in xs)
    assert glob.certified_bound >= brute - 1e-12
    assert glob.certified_bound <= brute * 1.05
    assert glob.region.kind == "real_global"
    assert glob.provenance["compact_sup"] == "empirical"


# ---------------------------------------------------------------------------
# complex sector certification


def test_complex_real_points_iterate_like_the_interval():
    delta = 0.1
    x = 0.97

    def count_real(x):
        k = 0
        while x > 1.0 - delta:
            x = x * x
            k += 1
        return k

    k_real = count_real(x)
    from boundarykit.certifier import _in_sector
    z, k = complex(x, 0.0), 0
    while _in_sector(z, delta):
        z = z * z
        k += 1
    assert k == k_real


def test_complex_explicit_doubling_count():
    # oracle: minimal k with 2^k arg >= delta or modulus^(2^k) <= 1 - delta
    delta = 0.1
    from boundarykit.certifier import _in_sector

    def explicit_count(r, t):
        k = 0
        while r > 1.0 - delta and abs(t) < delta:
            r, t, k = r * r, 2.0 * t, k + 1
        return k

    for r, t in ((1.0 - delta / 2.0, 0.6 * delta), (1.0, 0.3 * delta),
                 (1.0 - delta / 3.0, 0.01 * delta), (0.92, 0.0),
                 (0.999, -0.45 * delta)):
        w, k = cmath.rect(r, t), 0
        while _in_sector(w, delta):
            w = w * w
            k += 1
        assert k == explicit_count(r, t)


def test_complex_certificate_for_vol3_slice_is_sound():
    F = vol3_slice()
    delta = 0.1
    cert = certify_complex_region(F, delta=delta, grid=FAST_GRID)
    assert cert.inputs["B_defect"] <= 1e-7  # cocycle slice: defect is quadrature noise
    assert cert.k_max < 60
    sup = 0.0
    for r in np.linspace(1.0 - delta + 1e-6, 1.0, 160):
        for t in np.linspace(-delta + 1e-6, delta - 1e-6, 160):
            sup = max(sup, abs(F(cmath.rect(r, t))))
    assert cert.certified_bound + 1e-9 >= sup
    assert cert.region.kind == "complex_sector"


def test_complex_pole_is_refused():
    with pytest.raises(UnboundedDefect):
        certify_complex_region(pole_function("complex"), delta=0.1, grid=FAST_GRID)


def test_complex_rejects_bad_inputs():
    with pytest.raises(ValueError):
        certify_complex_region(vol3_slice(), delta=0.3)
    with pytest.raises(ValueError):
        certify_complex_region(smooth_real(), delta=0.1)


def test_real_and_complex_certifiers_agree_on_smooth_function():
    delta = 0.1
    real_cert = certify_interval(smooth_real(), delta=delta, grid=FAST_GRID)
    cplx_cert = certify_complex_region(smooth_complex(), delta=delta,
                                       grid=FAST_GRID)
    rel = abs(real_cert.certified_bound - cplx_cert.certified_bound)
    assert rel <= 0.25 * real_cert.certified_bound


def test_complex_extension_global_bound():
    F = vol3_slice()
    cert = certify_complex_region(F, delta=0.1, grid=FAST_GRID)
    glob = extend_by_symmetry(cert, F, grid=FAST_GRID)
    rng = np.random.default_rng(94)
    for _ in range(300):
        z = complex(rng.standard_normal(), rng.standard_normal()) * 3.0
        if min(abs(z), abs(z - 1)) < 1e-3:
            continue
        assert abs(F(z)) <= glob.certified_bound + 1e-9
    assert glob.region.kind == "complex_global"
