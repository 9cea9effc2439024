from .annotator import AnnotatorModel, mixed_population, uniform_population
from .study import StudyConfig, StudyRun, build_report, player_label_map, run_study

__all__ = [
    "AnnotatorModel",
    "StudyConfig",
    "StudyRun",
    "build_report",
    "mixed_population",
    "player_label_map",
    "run_study",
    "uniform_population",
]
