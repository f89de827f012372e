"""Access to the data files shipped with the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

TASK_TIMES = "task_times.csv"
TASK_DIFFICULTY = "task_difficulty.csv"
TASKS8_TRACE = "tasks8.trace"

SURVEY_FACTORS = {
    "subservientness": "survey_subservientness.csv",
    "user-friendliness": "survey_user_friendliness.csv",
    "usability": "survey_usability.csv",
}


def fixture_path(name: str) -> Path:
    path = Path(str(resources.files("touchboard") / "fixtures" / name))
    if not path.is_file():
        raise FileNotFoundError(f"no bundled fixture named {name!r}")
    return path
