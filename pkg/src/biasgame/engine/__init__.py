from .economy import EconomyConfig, level_for_xp, load_economy_config
from .models import (
    EDUCATION_OPTIONS,
    NEWS_FREQUENCY_OPTIONS,
    DemographicProfile,
    EnglishLevel,
    Gender,
    GroupMission,
    Player,
    Round,
    SentenceVerdict,
    TokenVerdict,
    WordFeedback,
)
from .scoring import combined_accuracy, pending_word_feedback, score_word_submission
from .tutorial import TutorialContent, TutorialLevel, TutorialSentence, load_tutorial

__all__ = [
    "DemographicProfile",
    "EDUCATION_OPTIONS",
    "EconomyConfig",
    "EnglishLevel",
    "Gender",
    "GroupMission",
    "NEWS_FREQUENCY_OPTIONS",
    "Player",
    "Round",
    "SentenceVerdict",
    "TokenVerdict",
    "TutorialContent",
    "TutorialLevel",
    "TutorialSentence",
    "WordFeedback",
    "combined_accuracy",
    "level_for_xp",
    "load_economy_config",
    "load_tutorial",
    "pending_word_feedback",
    "score_word_submission",
]
