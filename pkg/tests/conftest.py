from __future__ import annotations

import pytest

from biasgame.aggregation.models import Mode
from biasgame.content.models import SentenceLabel
from biasgame.engine.models import DemographicProfile, EnglishLevel, Gender
from biasgame.service.clock import VirtualClock
from biasgame.service.platform import Platform


def make_profile(i: int = 0) -> DemographicProfile:
    return DemographicProfile(
        gender=Gender.WOMAN if i % 2 == 0 else Gender.MAN,
        age=25 + (i % 60),
        education="Bachelor's degree",
        english=EnglishLevel.PROFICIENT,
        leaning=(i % 21) - 10,
        news_frequency="Every day",
    )


def complete_tutorial(platform: Platform, player_id: str) -> None:
    """Answer every tutorial level with the curated labels."""
    for level in range(1, platform.tutorial.final_level + 1):
        lv = platform.tutorial.level(level)
        answers = [(s.ref, s.label, sorted(s.biased_indices)) for s in lv.sentences]
        platform.submit_tutorial(player_id, level, answers)


def add_pool(platform: Platform, topic: str = "politics", n: int = 12,
             baseline: bool = False, quota: int = 100) -> list[str]:
    """Topic plus n sentences; baseline rows carry alternating labels."""
    if topic not in platform.content.topics:
        platform.create_topic(topic.capitalize(), unlocked_by_default=True,
                              topic_id=topic, daily_quota=quota)
    ids = []
    if baseline:
        import csv
        import io

        from biasgame.content.store import BASELINE_COLUMNS
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(BASELINE_COLUMNS)
        for i in range(n):
            biased = i % 3 != 2
            text = (
                f"Bulletin {i} warns the reckless overhaul will wreck clinics in district {i}."
                if biased else
                f"Bulletin {i} notes the overhaul will change clinics in district {i}."
            )
            w.writerow([
                text, "biased" if biased else "not_biased",
                "reckless|wreck" if biased else "",
                "Outlet", "center", topic, f"https://example.org/{i}",
            ])
        before = set(platform.content.sentences)
        platform.import_baseline(buf.getvalue())
        ids = sorted(set(platform.content.sentences) - before)
    else:
        for i in range(n):
            s = platform.ingest_sentence(
                f"Dispatch {i} says the dubious rollout will gut services near zone {i}.",
                topic, f"https://example.org/n/{i}", "Outlet", "center",
            )
            ids.append(s.id)
    return ids


def new_player(platform: Platform, i: int = 0, tutorial: bool = True):
    player = platform.register(make_profile(i))
    if tutorial:
        complete_tutorial(platform, player.id)
    return player


@pytest.fixture
def clock() -> VirtualClock:
    return VirtualClock()


@pytest.fixture
def platform(clock) -> Platform:
    return Platform(clock=clock, seed=42)


def play_publish_round(platform: Platform, player_id: str, topic: str,
                       label=SentenceLabel.BIASED, marks=(), mode=Mode.PUBLISH):
    """Start a round and submit the same label everywhere; returns results."""
    r = platform.start_round(player_id, mode, topic)
    results = []
    for sid in list(r.sentence_ids):
        results.append(platform.submit_sentence(r.id, sid, label, marks))
    return r, results
