import numpy as np
import pytest

from src.errors import KernelError
from src.kernels import double_layer_diagonal, dnu_x_s, dnu_y_s, fund_solution


def test_fund_solution_values():
    assert fund_solution(np.array([0.0, 0.0]), np.array([1.0, 0.0])) == pytest.approx(0.0, abs=1e-16)
    assert fund_solution(np.array([0.0, 0.0]), np.array([np.e, 0.0])) == pytest.approx(
        1.0 / (2 * np.pi), rel=1e-14
    )


def test_fund_solution_is_symmetric():
    rng = np.random.default_rng(3)
    x = rng.normal(size=(20, 2))
    y = rng.normal(size=(20, 2))

    assert np.allclose(fund_solution(x, y), fund_solution(y, x), rtol=0, atol=1e-15)


def test_fund_solution_grows_logarithmically():
    far = fund_solution(np.array([1e3, 0.0]), np.array([0.3, 0.2]))

    assert far == pytest.approx(np.log(1e3) / (2 * np.pi), rel=1e-2)


@pytest.mark.parametrize("kernel", [fund_solution, dnu_y_s, dnu_x_s])
def test_coincident_points_raise(kernel):
    x = np.array([0.5, 0.5])
    args = (x, x.copy()) if kernel is fund_solution else (x, x.copy(), np.array([1.0, 0.0]))

    with pytest.raises(KernelError):
        kernel(*args)


def test_source_normal_derivative_on_a_circle():
    radius = 2.0
    angles = np.array([0.1, 1.3, 2.9, 4.4])
    pts = radius * np.column_stack((np.cos(angles), np.sin(angles)))
    x, y = pts[0], pts[1:]
    values = dnu_y_s(x, y, y / radius)

    assert np.allclose(values, 1.0 / (4 * np.pi * radius), atol=1e-15)


def test_source_normal_derivative_matches_finite_difference():
    x = np.array([0.2, -0.4])
    y = np.array([1.1, 0.5])
    nu = np.array([0.6, 0.8])
    step = 1e-5
    difference = (fund_solution(x, y + step * nu) - fund_solution(x, y - step * nu)) / (2 * step)

    assert dnu_y_s(x, y, nu) == pytest.approx(difference, abs=1e-8)


def test_perpendicular_normal_gives_zero():
    assert dnu_y_s(np.array([0.0, 0.0]), np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0


def test_target_derivative_is_source_derivative_with_roles_swapped():
    x = np.array([0.2, -0.4])
    y = np.array([1.1, 0.5])
    nu = np.array([0.6, 0.8])

    assert dnu_x_s(x, y, nu) == pytest.approx(dnu_y_s(y, x, nu), abs=1e-16)
    assert dnu_x_s(x, y, nu) == pytest.approx(-dnu_y_s(x, y, nu), abs=1e-16)


def test_diagonal_is_limit_along_circle():
    radius = 2.0
    x = np.array([radius, 0.0])
    angle = 1e-4
    y = radius * np.array([np.cos(angle), np.sin(angle)])
    near = dnu_y_s(x, y, y / radius)

    assert double_layer_diagonal(np.array([1.0 / radius]))[0] == pytest.approx(near, rel=1e-6)
