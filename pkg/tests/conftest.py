import numpy as np
import pytest

from src.geometry import build_domain, make_circle, make_kite
from src.operators import LayerOperators


def annulus_domain(n=128, outer=2.0, inner=0.5):
    return build_domain(
        make_circle((0.0, 0.0), outer, n, "outer"),
        [make_circle((0.0, 0.0), inner, n, "hole")],
    )


@pytest.fixture(scope="session")
def unit_disk():
    return build_domain(make_circle((0.0, 0.0), 1.0, 128, "outer"))


@pytest.fixture(scope="session")
def annulus():
    return annulus_domain()


@pytest.fixture(scope="session")
def annulus_ops(annulus):
    return LayerOperators(annulus)


@pytest.fixture(scope="session")
def two_holes():
    return build_domain(
        make_circle((0.0, 0.0), 2.0, 128, "outer"),
        [
            make_circle((-0.8, 0.0), 0.3, 128, "hole"),
            make_circle((0.8, 0.0), 0.3, 128, "hole"),
        ],
    )


@pytest.fixture(scope="session")
def two_holes_ops(two_holes):
    return LayerOperators(two_holes)


@pytest.fixture(scope="session")
def kite_domain():
    """Circle of radius 2 with a kite hole on the left and a circular hole on the right."""
    return build_domain(
        make_circle((0.0, 0.0), 2.0, 128, "outer"),
        [
            make_kite((-0.7, 0.0), 0.5, 128, "hole", indent=0.35, stretch=1.2),
            make_circle((0.8, 0.0), 0.25, 128, "hole"),
        ],
    )


@pytest.fixture(scope="session")
def kite_ops(kite_domain):
    return LayerOperators(kite_domain)


@pytest.fixture(scope="session")
def off_centre_holes():
    """Two circular holes of different radii, neither concentric with the outer circle."""
    return build_domain(
        make_circle((0.0, 0.0), 2.0, 128, "outer"),
        [
            make_circle((-0.7, 0.2), 0.3, 128, "hole"),
            make_circle((0.8, -0.3), 0.4, 128, "hole"),
        ],
    )


@pytest.fixture(scope="session")
def off_centre_ops(off_centre_holes):
    return LayerOperators(off_centre_holes)


@pytest.fixture(scope="session")
def exceptional_domain():
    """Unit circle outer boundary, whose Robin constant vanishes."""
    return build_domain(
        make_circle((0.0, 0.0), 1.0, 128, "outer"),
        [make_circle((0.0, 0.0), 0.25, 128, "hole")],
    )


@pytest.fixture(scope="session")
def exceptional_ops(exceptional_domain):
    return LayerOperators(exceptional_domain)


@pytest.fixture
def smooth_density():
    """Low-mode density on every component of a domain, reproducible per seed."""

    def build(domain, seed=7, modes=4):
        rng = np.random.default_rng(seed)
        values = np.zeros(domain.n_nodes)
        for j, component in enumerate(domain.components):
            t = component.t
            part = np.full_like(t, rng.normal())
            for k in range(1, modes + 1):
                part += rng.normal() * np.cos(k * t) / k + rng.normal() * np.sin(k * t) / k
            values[domain.slices[j]] = part
        return values

    return build
