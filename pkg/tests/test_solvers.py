import numpy as np
import pytest

from src.errors import SolverError
from src.evaluate import boundary_residual_robin, energy_residual, eval_solution, five_point_laplacian
from src.geometry import build_domain, make_circle, make_fourier_curve
from src.kernels import fund_solution
from src.manufactured import manufactured_case
from src.operators import LayerOperators
from src.solvers import (
    detect_exceptional,
    eigenspace_V,
    psi_basis,
    solve_dirichlet,
    solve_neumann,
    solve_robin,
)


def interior_error(solution, case, domain, up_to_constant=False, probes=None):
    if probes is None:
        probes = domain.interior_test_points()
        probes = probes[domain.distance_to_boundary(probes) >= 0.1]
    errors = np.asarray(eval_solution(solution, probes)) - case.exact(probes)
    if up_to_constant:
        errors = errors - errors.mean()
    return float(np.max(np.abs(errors)))


@pytest.mark.parametrize("radius", [0.5, 1.0, 2.0])
def test_robin_constant_of_a_circle(radius):
    domain = build_domain(make_circle((0.0, 0.0), radius, 64))
    report = detect_exceptional(domain)

    assert report.robin_constant == pytest.approx(np.log(radius) / (2 * np.pi), abs=1e-10)
    assert report.is_exceptional == (radius == 1.0)
    assert domain.outer.weights @ report.equilibrium_density == pytest.approx(1.0, abs=1e-12)


def test_exceptional_domain_is_detected(exceptional_domain, exceptional_ops):
    report = detect_exceptional(exceptional_domain, operators=exceptional_ops)

    assert abs(report.robin_constant) < 1e-10
    assert report.is_exceptional


def test_robin_regular_path_on_annulus(annulus, annulus_ops):
    case = manufactured_case("log-radial", {"a": 1.0, "b": 1.0}, annulus)
    h = np.ones(annulus.n_nodes)
    g = case.robin_data(h)

    solution = solve_robin(annulus, h, g, operators=annulus_ops)

    assert solution.path == "regular"
    assert not solution.exceptional
    assert solution.charges.shape == (1,)
    assert solution.residual < 1e-10
    assert interior_error(solution, case, annulus) < 1e-8
    assert boundary_residual_robin(annulus, solution, h, g, annulus_ops) < 1e-9
    assert energy_residual(annulus, solution, h, g, annulus_ops) < 1e-8


def test_robin_exceptional_path(exceptional_domain, exceptional_ops):
    case = manufactured_case("harmonic-polynomial", {"k": 1}, exceptional_domain)
    h = np.ones(exceptional_domain.n_nodes)
    g = case.robin_data(h)

    solution = solve_robin(exceptional_domain, h, g, operators=exceptional_ops)

    assert solution.path == "exceptional"
    assert solution.exceptional
    assert solution.side_condition < 1e-10
    assert abs(exceptional_ops.quadrature(solution.phi)) < 1e-10
    assert interior_error(solution, case, exceptional_domain) < 1e-8
    assert energy_residual(exceptional_domain, solution, h, g, exceptional_ops) < 1e-8


def test_robin_with_variable_coefficient_on_kite_domain(kite_domain, kite_ops):
    case = manufactured_case(
        "point-log",
        {"a": 0.5, "sources": [{"point": [-0.8, 0.0], "strength": 0.7}, {"point": [0.8, 0.0]}]},
        kite_domain,
    )
    t = np.concatenate([c.t for c in kite_domain.components])
    h = 1.0 + 0.5 * np.cos(t)
    g = case.robin_data(h)

    solution = solve_robin(kite_domain, h, g, operators=kite_ops)

    probes = np.array([[0.0, 1.0], [0.0, -1.0], [0.3, 0.8], [-0.5, -0.9], [1.2, 0.3], [-1.0, 1.0]])

    assert solution.charges.shape == (2,)
    assert interior_error(solution, case, kite_domain, probes=probes) < 1e-8
    assert boundary_residual_robin(kite_domain, solution, h, g, kite_ops) < 1e-8


def test_robin_rejects_invalid_coefficients(annulus, annulus_ops):
    h = np.ones(annulus.n_nodes)
    h[0] = -1.0
    g = np.zeros(annulus.n_nodes)

    with pytest.raises(SolverError, match="negative"):
        solve_robin(annulus, h, g, operators=annulus_ops)
    with pytest.raises(SolverError):
        solve_robin(annulus, np.zeros(annulus.n_nodes), g, operators=annulus_ops)


def test_robin_with_zero_h_needs_flux_free_data(annulus, annulus_ops):
    g = np.concatenate([np.full(128, 0.25), np.full(128, -1.0)])

    with pytest.raises(SolverError, match="flux free"):
        solve_robin(annulus, np.zeros(256), g, neumann=True, operators=annulus_ops)


def test_robin_with_zero_h_matches_neumann_strict_path(annulus, annulus_ops):
    case = manufactured_case("harmonic-polynomial", {"k": 2}, annulus)
    g = case.neumann_data

    robin = solve_robin(annulus, np.zeros(annulus.n_nodes), g, neumann=True, operators=annulus_ops)
    neumann = solve_neumann(annulus, g, operators=annulus_ops)

    assert robin.path == "neumann"
    assert neumann.path == "strict"
    assert np.max(np.abs(robin.phi.values - neumann.phi.values)) < 1e-12


def test_neumann_strict_path(annulus, annulus_ops):
    case = manufactured_case("harmonic-polynomial", {"k": 2}, annulus)

    solution = solve_neumann(annulus, case.neumann_data, operators=annulus_ops)

    assert solution.path == "strict"
    assert solution.kernel_dimension == 2
    assert np.all(solution.charges == 0.0)
    assert interior_error(solution, case, annulus, up_to_constant=True) < 1e-8


def test_neumann_general_path_charges(annulus, annulus_ops):
    # u = -0.15 log|x| has flux 0.3 pi into the hole and -0.3 pi out of the outer curve
    g = np.concatenate([np.full(128, -0.075), np.full(128, 0.3)])
    case = manufactured_case("log-radial", {"a": 0.0, "b": -0.15}, annulus)

    solution = solve_neumann(annulus, g, operators=annulus_ops)

    assert solution.path == "general"
    assert solution.charges[0] == pytest.approx(-0.3, abs=1e-12)
    fluxes = annulus_ops.quadrature.component_integrals(solution.corrected_data)
    assert np.max(np.abs(fluxes)) < 1e-10
    probes = annulus.interior_test_points()
    laplacian = five_point_laplacian(lambda p: eval_solution(solution, p), probes)
    assert np.max(np.abs(laplacian)) < 1e-4
    assert interior_error(solution, case, annulus, up_to_constant=True) < 1e-8


def test_neumann_normalization_is_zero_mean_on_outer_curve(annulus, annulus_ops):
    case = manufactured_case("harmonic-polynomial", {"k": 2, "constant": 3.0}, annulus)
    solution = solve_neumann(annulus, case.neumann_data, operators=annulus_ops)
    trace = annulus_ops.interior_trace_of_double_layer(solution.psi.values) + solution.offset

    assert annulus.outer.weights @ trace[annulus.slices[0]] == pytest.approx(0.0, abs=1e-10)
    assert solution.normalization == "zero-mean-outer"


def test_neumann_rejects_nonzero_total_flux(annulus, annulus_ops):
    with pytest.raises(SolverError, match="total flux"):
        solve_neumann(annulus, np.ones(annulus.n_nodes), operators=annulus_ops)


def test_neumann_zero_data_gives_zero_field(annulus, annulus_ops):
    solution = solve_neumann(annulus, np.zeros(annulus.n_nodes), operators=annulus_ops)
    values = eval_solution(solution, annulus.interior_test_points())

    assert np.max(np.abs(values)) < 1e-12


def test_eigenspace_dimension(unit_disk, annulus, annulus_ops, two_holes, two_holes_ops):
    assert eigenspace_V(unit_disk) == []

    single = eigenspace_V(annulus, operators=annulus_ops)
    assert len(single) == 1
    hole_part = np.linalg.norm(single[0].component(1))
    assert hole_part > 0.1 * np.linalg.norm(single[0].values)

    assert len(eigenspace_V(two_holes, operators=two_holes_ops)) == 2


def test_psi_basis_normalization(two_holes, two_holes_ops):
    basis = psi_basis(two_holes, two_holes_ops)
    centers = two_holes.hole_centers()

    assert len(basis) == 2
    for h, psi in enumerate(basis):
        at_centers = fund_solution(centers[:, None, :], two_holes.points[None, :, :]) @ (
            two_holes.weights * psi.values
        )
        assert np.allclose(at_centers, np.eye(2)[h], atol=1e-8)
        single = two_holes_ops.S @ psi.values
        assert np.max(np.abs(single[two_holes.slices[0]])) < 1e-8


@pytest.mark.parametrize(
    "name, params",
    [
        ("harmonic-polynomial", {"k": 1}),
        ("log-radial", {"a": 0.0, "b": 1.0}),
    ],
)
def test_dirichlet_on_annulus(annulus, annulus_ops, name, params):
    case = manufactured_case(name, params, annulus)

    solution = solve_dirichlet(annulus, case.dirichlet_data, operators=annulus_ops)

    assert not solution.exceptional
    assert solution.residual < 1e-8
    assert solution.constancy_std < 1e-8
    assert solution.trace_error < 1e-8
    assert interior_error(solution, case, annulus) < 1e-8


def test_dirichlet_constant_data(annulus, annulus_ops):
    solution = solve_dirichlet(annulus, np.full(annulus.n_nodes, 5.0), operators=annulus_ops)
    values = eval_solution(solution, annulus.interior_test_points())

    assert np.allclose(values, 5.0, atol=1e-10)
    assert solution.gammas[1] == pytest.approx(0.0, abs=1e-10)


def test_dirichlet_on_exceptional_domain(exceptional_domain, exceptional_ops):
    case = manufactured_case("harmonic-polynomial", {"k": 1, "constant": 2.0}, exceptional_domain)

    solution = solve_dirichlet(exceptional_domain, case.dirichlet_data, operators=exceptional_ops)

    assert solution.exceptional
    assert interior_error(solution, case, exceptional_domain) < 1e-8


def test_solvers_reject_foreign_operators(annulus, unit_disk):
    with pytest.raises(SolverError, match="another domain"):
        solve_neumann(annulus, np.zeros(annulus.n_nodes), operators=LayerOperators(unit_disk))


def test_dirichlet_with_off_centre_holes(off_centre_holes, off_centre_ops):
    case = manufactured_case("harmonic-polynomial", {"k": 2}, off_centre_holes)

    solution = solve_dirichlet(off_centre_holes, case.dirichlet_data, operators=off_centre_ops)

    assert solution.residual < 1e-8
    assert solution.trace_error < 1e-8
    assert interior_error(solution, case, off_centre_holes) < 1e-8


def test_robin_with_off_centre_holes(off_centre_holes, off_centre_ops):
    case = manufactured_case("log-radial", {"a": 0.5, "b": 1.0}, off_centre_holes)
    h = np.ones(off_centre_holes.n_nodes)
    g = case.robin_data(h)

    solution = solve_robin(off_centre_holes, h, g, operators=off_centre_ops)

    assert solution.path == "regular"
    assert solution.charges.shape == (2,)
    assert interior_error(solution, case, off_centre_holes) < 1e-8
    assert boundary_residual_robin(off_centre_holes, solution, h, g, off_centre_ops) < 1e-9


@pytest.mark.parametrize("n", [64, 128])
def test_robin_operator_stays_invertible_under_refinement(n):
    """On a circle of radius 2 with h = 1, -1/4 I + H is bounded below by 1/4."""
    domain = build_domain(make_circle((0.0, 0.0), 2.0, n))
    ops = LayerOperators(domain)
    matrix = ops.H(np.ones(n)).matrix - 0.25 * np.eye(n)

    assert np.linalg.svd(matrix, compute_uv=False).min() > 0.24


def test_robin_condition_number_is_stable_under_refinement():
    conditions = []
    for n in (64, 128):
        domain = build_domain(make_circle((0.0, 0.0), 2.0, n, "outer"), [make_circle((0.3, 0.1), 0.5, n, "hole")])
        case = manufactured_case("harmonic-polynomial", {"k": 1}, domain)
        h = np.ones(domain.n_nodes)
        conditions.append(solve_robin(domain, h, case.robin_data(h)).condition_number)

    assert conditions[1] < 3 * conditions[0]


def test_psi_basis_on_crescent_hole():
    crescent = make_fourier_curve([0.0, 0.3], [0.0, 0.0], [0.0, 0.0, 0.24], [0.0, 0.09], 256, "hole")
    domain = build_domain(make_circle((0.0, 0.0), 2.0, 128, "outer"), [crescent])
    ops = LayerOperators(domain)

    (psi,) = psi_basis(domain, ops)
    center = domain.hole_centers()

    at_center = fund_solution(center[:, None, :], domain.points[None, :, :]) @ (domain.weights * psi.values)
    assert at_center[0] == pytest.approx(1.0, abs=1e-6)
