import pytest
from pydantic import ValidationError

from models import CaseConfig, CurveConfig, Report


def test_curve_config_requires_shape_parameters():
    with pytest.raises(ValidationError):
        CurveConfig(kind="circle", role="outer")
    with pytest.raises(ValidationError):
        CurveConfig(kind="fourier", role="hole", x_cos=[0.0, 1.0])

    kite = CurveConfig(kind="fourier", role="hole", x_cos=[0.0, 1.0], y_sin=[0.0, 1.5])
    assert kite.center == [0.0, 0.0]


def test_case_config_expands_node_counts():
    config = CaseConfig(
        id="c",
        problem="dirichlet",
        geometry=[
            {"kind": "circle", "role": "outer", "radius": 2.0},
            {"kind": "circle", "role": "hole", "radius": 0.5},
        ],
        nodes=[64, 32],
    )

    assert config.nodes_per_component() == [64, 32]
    assert config.probe_offset == 0.25


def test_case_config_rejects_mismatched_node_list():
    with pytest.raises(ValidationError, match="one count per curve"):
        CaseConfig(
            id="c",
            problem="dirichlet",
            geometry=[{"kind": "circle", "role": "outer", "radius": 1.0}],
            nodes=[64, 64],
        )


def test_case_config_rejects_unknown_fields():
    with pytest.raises(ValidationError):
        CaseConfig(
            id="c",
            problem="dirichlet",
            geometry=[{"kind": "circle", "role": "outer", "radius": 1.0}],
            mesh="fine",
        )


def test_report_rejects_non_finite_metrics():
    with pytest.raises(ValidationError, match="not finite"):
        Report(case_id="c", command="solve", metrics={"interior_max_error": float("nan")})
