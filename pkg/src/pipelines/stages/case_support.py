"""Helpers shared by the stages that turn a CaseConfig into nodal arrays."""

from __future__ import annotations

import logging
from typing import Sequence

import numexpr as ne
import numpy as np

from models import CaseConfig, CurveConfig
from src.errors import ConfigError
from src.geometry import CurveComponent, Domain, build_domain, make_circle, make_fourier_curve

logger = logging.getLogger(__name__)

EXPRESSION_VARIABLES = ("x1", "x2", "nu1", "nu2", "t", "component")


def sample_curve(curve: CurveConfig, n_nodes: int) -> CurveComponent:
    if curve.kind == "circle":
        return make_circle(curve.center, float(curve.radius), n_nodes, curve.role)
    return make_fourier_curve(
        curve.x_cos, curve.x_sin, curve.y_cos, curve.y_sin, n_nodes, curve.role
    )


def build_domain_from_config(
    config: CaseConfig, nodes: Sequence[int] | None = None
) -> Domain:
    counts = list(nodes) if nodes is not None else config.nodes_per_component()
    if len(counts) != len(config.geometry):
        raise ConfigError(
            f"Case {config.id}: {len(counts)} node counts for {len(config.geometry)} curves"
        )
    components = [sample_curve(curve, n) for curve, n in zip(config.geometry, counts)]
    return build_domain(components[0], components[1:])


def nodal_expression(domain: Domain, expression: str) -> np.ndarray:
    """Evaluate a numexpr expression in the node variables x1, x2, nu1, nu2, t, component."""
    variables = {
        "x1": domain.points[:, 0],
        "x2": domain.points[:, 1],
        "nu1": domain.normals[:, 0],
        "nu2": domain.normals[:, 1],
        "t": np.concatenate([c.t for c in domain.components]),
        "component": domain.component_index.astype(float),
    }
    try:
        values = ne.evaluate(expression, local_dict=variables)
    except (KeyError, SyntaxError, TypeError, ValueError) as e:
        raise ConfigError(
            f"Cannot evaluate expression '{expression}' (variables: {', '.join(EXPRESSION_VARIABLES)}): {e}"
        ) from e
    values = np.broadcast_to(np.asarray(values, dtype=float), (domain.n_nodes,)).copy()
    if not np.all(np.isfinite(values)):
        raise ConfigError(f"Expression '{expression}' is not finite at every node")
    return values


def explicit_values(domain: Domain, values: Sequence[float], label: str) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.shape != (domain.n_nodes,):
        raise ConfigError(
            f"{label} has {array.shape[0]} values but the domain has {domain.n_nodes} nodes"
        )
    return array
