"""Crash-restart durability: the event log is the single source of truth."""
import dataclasses

from biasgame.service.events import FileEventLog, load_events
from biasgame.service.platform import Platform
from biasgame.simulator.study import StudyConfig, run_study


def player_economy(p):
    return {
        pid: (pl.currency, pl.xp, pl.level, pl.skill_hits, pl.skill_total,
              pl.streak_days, sorted(m.value for m in pl.unlocked_modes))
        for pid, pl in p.players.items()
    }


def test_partial_study_replays_bit_identically(tmp_path):
    path = tmp_path / "events.jsonl"
    cfg = StudyConfig(players=30, baseline_size=74, new_size=30, bootstrap_b=40, seed=21)
    run = run_study(cfg, log=FileEventLog(path), stop_after_players=13)
    original = run.platform

    # "kill": reopen the log from disk in a brand-new process-like platform
    restored = Platform(log=FileEventLog(path), seed=21)

    assert restored.agg.label_states == original.agg.label_states
    assert restored.agg.annotations == original.agg.annotations
    assert player_economy(restored) == player_economy(original)
    assert restored.mission == original.mission
    assert [dataclasses.asdict(r) for r in restored.export_dataset()] == [
        dataclasses.asdict(r) for r in original.export_dataset()]


def test_restart_supports_continued_play(tmp_path):
    path = tmp_path / "events.jsonl"
    cfg = StudyConfig(players=12, baseline_size=30, new_size=10, bootstrap_b=20, seed=8)
    run = run_study(cfg, log=FileEventLog(path), stop_after_players=6)
    before = len(run.platform.log)

    restored = Platform(log=FileEventLog(path), seed=8)
    assert len(restored.log) == before
    # the restored platform accepts new work without id collisions
    from conftest import new_player, play_publish_round
    player = new_player(restored, 99)
    assert player.id not in run.platform.players
    play_publish_round(restored, player.id, "desk-1")
    assert len(restored.log) > before


def test_event_log_json_roundtrip(tmp_path):
    path = tmp_path / "events.jsonl"
    cfg = StudyConfig(players=12, baseline_size=30, new_size=10, bootstrap_b=20, seed=8)
    run_study(cfg, log=FileEventLog(path))
    events = load_events(path)
    assert events, "log written"
    log2 = FileEventLog(tmp_path / "copy.jsonl")
    for e in events:
        log2.append(e)
    assert load_events(tmp_path / "copy.jsonl") == events
