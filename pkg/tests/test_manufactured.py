import numpy as np
import pytest

from src.errors import ManufacturedCaseError
from src.manufactured import MANUFACTURED_FIELDS, manufactured_case


def test_log_radial_robin_data_on_annulus(annulus):
    case = manufactured_case("log-radial", {"a": 1.0, "b": 1.0}, annulus)
    g = case.robin_data(1.0)

    assert np.allclose(g[annulus.slices[0]], 1.5 + np.log(2.0), atol=1e-12)
    assert np.allclose(g[annulus.slices[1]], -1.0 + np.log(0.5), atol=1e-12)


def test_linear_polynomial_traces(annulus):
    case = manufactured_case("harmonic-polynomial", {"k": 1}, annulus)

    assert np.allclose(case.dirichlet_data, annulus.points[:, 0])
    assert np.allclose(case.neumann_data, annulus.normals[:, 0])


def test_quadratic_polynomial_parts(annulus):
    points = np.array([[1.0, 0.5], [-0.3, 1.2]])
    real = manufactured_case("harmonic-polynomial", {"k": 2}, annulus)
    imag = manufactured_case("harmonic-polynomial", {"k": 2, "part": "im"}, annulus)

    assert np.allclose(real.exact(points), points[:, 0] ** 2 - points[:, 1] ** 2)
    assert np.allclose(imag.exact(points), 2 * points[:, 0] * points[:, 1])


def test_polynomial_normal_derivative_matches_gradient(annulus):
    case = manufactured_case("harmonic-polynomial", {"k": 3, "coefficient": 0.5}, annulus)
    x, y = annulus.points[:, 0], annulus.points[:, 1]
    grad = np.column_stack((1.5 * (x**2 - y**2), -3.0 * x * y))

    assert np.allclose(case.neumann_data, np.einsum("ij,ij->i", grad, annulus.normals))


def test_point_log_sources_inside_holes(two_holes):
    case = manufactured_case(
        "point-log",
        {"sources": [{"point": [-0.8, 0.0], "strength": 2.0}, {"point": [0.8, 0.0]}]},
        two_holes,
    )
    point = np.array([[0.0, 1.0]])
    expected = 2.0 * np.log(np.hypot(0.8, 1.0)) + np.log(np.hypot(0.8, 1.0))

    assert case.exact(point)[0] == pytest.approx(expected)


def test_data_for_dispatches_on_problem(annulus):
    case = manufactured_case("harmonic-polynomial", {"k": 1}, annulus)

    assert np.array_equal(case.data_for("dirichlet"), case.dirichlet_data)
    assert np.array_equal(case.data_for("neumann"), case.neumann_data)
    assert np.allclose(case.data_for("robin", 2.0), case.neumann_data + 2.0 * case.dirichlet_data)
    with pytest.raises(ManufacturedCaseError):
        case.data_for("stokes")


@pytest.mark.parametrize(
    "name, params",
    [
        ("log-radial", {"center": [1.0, 0.0]}),
        ("log-radial", {"center": [0.5, 0.0]}),
        ("point-log", {"sources": [{"point": [0.0, 1.5]}]}),
        ("point-log", {}),
        ("harmonic-polynomial", {"k": 2, "part": "abs"}),
        ("biharmonic", {}),
    ],
)
def test_invalid_cases_rejected(annulus, name, params):
    with pytest.raises(ManufacturedCaseError):
        manufactured_case(name, params, annulus)


def test_log_radial_needs_center_without_holes(unit_disk):
    with pytest.raises(ManufacturedCaseError, match="center"):
        manufactured_case("log-radial", {}, unit_disk)


def test_registry_lists_fields():
    assert set(MANUFACTURED_FIELDS) == {"log-radial", "harmonic-polynomial", "point-log"}
