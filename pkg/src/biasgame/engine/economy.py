"""Reward magnitudes and the flat config file backing them.

Only the $10 sentence reward, the 7-of-10 bonus trigger, the +10 s Quick
Words bonus, and the daily cap of ten are fixed by the game rules; everything
else is a tunable default. The config loader refuses unknown keys so typos
cannot silently fall back to defaults.
"""
from __future__ import annotations

from dataclasses import dataclass, fields

from ..errors import ConfigError


@dataclass(frozen=True)
class EconomyConfig:
    sentence_reward: int = 10
    sentence_xp: int = 10
    round_bonus: int = 30
    round_bonus_threshold: int = 7
    word_hit_bonus: int = 2
    quickwords_initial_seconds: float = 60.0
    quickwords_hit_seconds: float = 10.0
    quickwords_penalty_seconds: float = 5.0
    quickwords_word_reward: int = 5
    delayed_multiplier: int = 2
    level_xp_base: int = 100
    topic_price: int = 80
    quota_refill_price: int = 20
    quota_refill_amount: int = 10
    coop_agreement_reward: int = 10
    coop_speed_bonus: int = 20
    coop_unlock_level: int = 3
    critique_unlock_level: int = 5
    breaking_news_multiplier: int = 2
    daily_quota: int = 10
    group_mission_goal: int = 100
    round_size: int = 10
    assessment_size: int = 20


_FIELD_TYPES = {f.name: f.type for f in fields(EconomyConfig)}


def load_economy_config(path) -> EconomyConfig:
    """Parse a flat `key = value` file; unknown keys are refused."""
    overrides: dict[str, object] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {line_no}: expected key = value")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in _FIELD_TYPES:
                raise ConfigError(f"line {line_no}: unknown key {key!r}")
            kind = _FIELD_TYPES[key]
            try:
                overrides[key] = float(value) if "float" in str(kind) else int(value)
            except ValueError:
                raise ConfigError(f"line {line_no}: bad value for {key}: {value!r}") from None
    return EconomyConfig(**overrides)


def level_for_xp(xp: int, base: int = 100) -> int:
    """Largest n >= 1 with xp >= base * n * (n-1) / 2."""
    n = 1
    while xp >= base * (n + 1) * n // 2:
        n += 1
    return n
