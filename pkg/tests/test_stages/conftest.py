import pytest

from src.harness import parse_config
from src.pipelines.base import CaseContext

ANNULUS = [
    {"kind": "circle", "role": "outer", "radius": 2.0},
    {"kind": "circle", "role": "hole", "radius": 0.5},
]


@pytest.fixture
def make_context():
    def build(nodes=128, geometry=None, command="solve", **fields):
        document = {"id": "stage-case", "geometry": geometry or ANNULUS, "nodes": nodes}
        document.setdefault("problem", "robin")
        document.update(fields)
        if document["problem"] == "robin":
            document.setdefault("h", {"constant": 1.0})
        return CaseContext(config=parse_config(document), command=command)

    return build


@pytest.fixture
def prepared(make_context):
    """Context that already went through geometry and boundary data."""
    from src.pipelines.stages.boundary_data import BoundaryDataStage
    from src.pipelines.stages.geometry_builder import GeometryBuilderStage

    def build(**fields):
        context = make_context(**fields)
        for stage in (GeometryBuilderStage(), BoundaryDataStage()):
            result = stage.execute(context)
            assert result.success, result.error
        return context

    return build
