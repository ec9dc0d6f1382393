from src.pipelines.registry import available_verbs, detect_command
from src.pipelines.stages.exceptional_detection import ExceptionalDetectionStage
from src.pipelines.stages.identity_check import IdentityCheckStage


def test_detect_command_returns_matching_command():
    command = detect_command("solve")

    assert command is not None
    assert command.name == "solve"


def test_detect_command_accepts_verb_or_name():
    by_verb = detect_command("detect-exceptional")
    by_name = detect_command(" detect_exceptional ")

    assert by_verb is not None
    assert by_verb is by_name


def test_detect_command_returns_none_for_unknown_verb():
    assert detect_command("mesh") is None


def test_available_verbs():
    assert available_verbs() == [
        "solve",
        "convergence",
        "detect-exceptional",
        "identities",
        "oracle",
    ]


def test_detected_command_builds_its_pipeline():
    identities = detect_command("identities").get_pipeline()
    detection = detect_command("detect-exceptional").get_pipeline()

    assert isinstance(identities.stages[1], IdentityCheckStage)
    assert isinstance(detection.stages[1], ExceptionalDetectionStage)
