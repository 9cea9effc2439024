"""Error types shared across the platform.

Every error carries a machine-readable ``code`` (mirrored 1:1 by the API),
a ``retryable`` hint, and a suggested HTTP status for the service layer.
"""


class GameError(Exception):
    code = "internal_error"
    retryable = False
    http_status = 400

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)


# -- content -----------------------------------------------------------------

class EmptyText(GameError):
    code = "empty_text"


class UnknownTopic(GameError):
    code = "unknown_topic"
    http_status = 404


class DuplicateText(GameError):
    code = "duplicate_text"
    http_status = 409


class FormatError(GameError):
    code = "format_error"


class UnresolvedWord(GameError):
    code = "unresolved_word"


class QuotaExhausted(GameError):
    code = "quota_exhausted"
    http_status = 409


class InsufficientContent(GameError):
    code = "insufficient_content"
    http_status = 409


# -- aggregation -------------------------------------------------------------

class DuplicateAnnotation(GameError):
    code = "duplicate_annotation"
    http_status = 409


class TutorialIncomplete(GameError):
    code = "tutorial_incomplete"
    http_status = 403


class UnknownSentence(GameError):
    code = "unknown_sentence"
    http_status = 404


# -- metrics -----------------------------------------------------------------

class NoPairableValues(GameError):
    code = "no_pairable_values"


class DegenerateData(GameError):
    code = "degenerate_data"


class LevelMismatch(GameError):
    code = "level_mismatch"


class KeyMismatch(GameError):
    code = "key_mismatch"


# -- game engine -------------------------------------------------------------

class ModeLocked(GameError):
    code = "mode_locked"
    http_status = 403


class TopicLocked(GameError):
    code = "topic_locked"
    http_status = 403


class OutOfOrder(GameError):
    code = "out_of_order"


class AlreadyScored(GameError):
    code = "already_scored"
    http_status = 409


class StopwordMarked(GameError):
    code = "stopword_marked"


class TimeExpired(GameError):
    code = "time_expired"
    http_status = 409


class AlreadyTapped(GameError):
    code = "already_tapped"
    http_status = 409


class SelfCritique(GameError):
    code = "self_critique"


class SentenceSetMismatch(GameError):
    code = "sentence_set_mismatch"


class WrongLevelContent(GameError):
    code = "wrong_level_content"


class InsufficientFunds(GameError):
    code = "insufficient_funds"
    http_status = 409


class AlreadyOwned(GameError):
    code = "already_owned"
    http_status = 409


class MissingContent(GameError):
    code = "missing_content"
    http_status = 404


class UnknownPlayer(GameError):
    code = "unknown_player"
    http_status = 404


class UnknownRound(GameError):
    code = "unknown_round"
    http_status = 404


# -- service -----------------------------------------------------------------

class ValidationFailed(GameError):
    code = "validation_failed"

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")


class Unauthorized(GameError):
    code = "unauthorized"
    http_status = 401


class RequestCapExceeded(GameError):
    code = "request_cap_exceeded"
    retryable = True
    http_status = 429


class ConfigError(GameError):
    code = "config_error"


# -- simulator ---------------------------------------------------------------

class InfeasibleConfig(GameError):
    code = "infeasible_config"
