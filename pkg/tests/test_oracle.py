import numpy as np
import pytest

from src.errors import OracleError
from src.geometry import build_domain, make_circle
from src.kernels import fund_solution
from src.operators import LayerOperators
from src.oracle import oracle_on_nodes, oracle_quadrature, trig_resample


def cosine(j, t):
    return np.cos(t)


def test_trig_resample_is_exact_for_band_limited_data():
    t = 2 * np.pi * np.arange(16) / 16
    fine_t = 0.1 + 2 * np.pi * np.arange(64) / 64

    assert np.allclose(trig_resample(np.cos(3 * t) + 0.5, 64, shift=0.1), np.cos(3 * fine_t) + 0.5, atol=1e-13)


def test_trig_resample_needs_refinement():
    with pytest.raises(OracleError):
        trig_resample(np.ones(16), 24)


def test_single_layer_of_cosine_on_unit_circle():
    domain = build_domain(make_circle((0.0, 0.0), 1.0, 32))

    values = oracle_on_nodes("single_layer", domain, cosine, multiplier=16)

    assert np.allclose(values, -0.5 * np.cos(domain.outer.t), atol=1e-12)


def test_principal_value_of_constant_on_annulus():
    domain = build_domain(
        make_circle((0.0, 0.0), 2.0, 32, "outer"), [make_circle((0.0, 0.0), 0.5, 32, "hole")]
    )

    values = oracle_on_nodes("double_layer", domain, np.ones(domain.n_nodes))

    assert np.allclose(values, 0.5, atol=1e-11)


def test_cross_component_single_layer_matches_direct_sum(annulus):
    target = annulus.outer.points[5]
    hole = annulus.slices[1]
    direct = fund_solution(target[None, :], annulus.points[hole]) @ annulus.weights[hole]
    hole_indicator = lambda j, t: np.full_like(t, 1.0 if j == 1 else 0.0)

    value = oracle_quadrature(
        "single_layer",
        hole_indicator,
        target,
        domain=annulus,
        on_curve=(0, float(annulus.outer.t[5])),
    )

    assert value == pytest.approx(direct, abs=1e-12)


def test_oracle_agrees_with_assembled_operators(kite_domain, smooth_density):
    ops = LayerOperators(kite_domain)
    phi = smooth_density(kite_domain, seed=2, modes=3)

    for kernel, operator in (("single_layer", ops.S), ("double_layer", ops.D), ("adjoint_double_layer", ops.K)):
        assert np.max(np.abs(oracle_on_nodes(kernel, kite_domain, phi) - operator @ phi)) < 1e-9


def test_rejects_unknown_kernel_and_small_multiplier(unit_disk):
    target = np.array([0.1, 0.0])

    with pytest.raises(OracleError, match="Unknown kernel"):
        oracle_quadrature("hypersingular", np.ones(128), target, domain=unit_disk)
    with pytest.raises(OracleError, match="at least"):
        oracle_quadrature("single_layer", np.ones(128), target, multiplier=4, domain=unit_disk)


def test_adjoint_needs_target_normal(unit_disk):
    with pytest.raises(OracleError, match="target normal"):
        oracle_quadrature("adjoint_double_layer", np.ones(128), np.array([0.1, 0.0]), domain=unit_disk)


def test_unresolved_target_reports_non_convergence():
    domain = build_domain(make_circle((0.0, 0.0), 1.0, 16))

    with pytest.raises(OracleError, match="did not converge"):
        oracle_quadrature("double_layer", cosine, np.array([1.0 - 1e-3, 0.0]), domain=domain)
