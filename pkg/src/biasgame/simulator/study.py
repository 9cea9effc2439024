"""Desk-scale replay of the annotation study against the real service logic.

Synthetic players touch the system only through the platform's public
operations: register, tutorial, rounds, submissions, feedback collection.
Phases follow the study protocol: tutorial, then direct-feedback rounds over
the baseline pool, then delayed-feedback rounds over the new pool. Topic
assignment is round-robin so per-topic draw counts stay balanced and every
sentence clears the five-annotation floor.

A (config, population, seed) triple determines the run bit-for-bit.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from ..aggregation.rules import SENTENCE_VOTE_THRESHOLD, compute_sentence_label
from ..aggregation.store import contributes
from ..aggregation.models import Mode, Status
from ..content.models import Origin, SentenceLabel
from ..content.store import pool_ratio_warning
from ..engine.economy import EconomyConfig
from ..engine.models import DemographicProfile, EnglishLevel, Gender
from ..errors import InfeasibleConfig
from ..metrics.alpha import bootstrap_alpha
from ..metrics.comparison import agreement_breakdown, confusion_from_labels, classification_metrics
from ..metrics.report import metrics_report
from ..service.clock import VirtualClock
from ..service.events import EventLog
from ..service.platform import Platform
from .annotator import AnnotatorModel, uniform_population
from .pool import (
    NewSentenceSpec,
    baseline_topic_names,
    generate_baseline_csv,
    generate_new_sentences,
)


@dataclass(frozen=True)
class StudyConfig:
    players: int = 100
    rounds_per_player: int = 3
    sentences_per_round: int = 10
    baseline_size: int = 370
    new_size: int = 150
    seed: int = 0
    bootstrap_b: int = 1000
    level: float = 0.95

    @property
    def pool_size(self) -> int:
        return self.baseline_size + self.new_size

    @property
    def delayed_rounds(self) -> int:
        return 1 if self.new_size > 0 else 0

    @property
    def direct_rounds(self) -> int:
        return self.rounds_per_player - self.delayed_rounds

    def validate(self) -> None:
        draws = self.players * self.rounds_per_player * self.sentences_per_round
        need = SENTENCE_VOTE_THRESHOLD * self.pool_size
        if draws < need:
            raise InfeasibleConfig(
                f"{self.players}x{self.rounds_per_player}x{self.sentences_per_round} = {draws} "
                f"< {need} annotations required for the five-per-sentence floor"
            )
        if self.direct_rounds < 0:
            raise InfeasibleConfig("rounds_per_player must cover the delayed phase")
        if self.baseline_size > 0:
            direct_draws = self.players * self.direct_rounds * self.sentences_per_round
            if direct_draws < SENTENCE_VOTE_THRESHOLD * self.baseline_size:
                raise InfeasibleConfig("direct phase cannot cover the baseline pool five times")
            if self.baseline_size < self.direct_rounds * self.sentences_per_round:
                raise InfeasibleConfig("baseline pool smaller than one player's direct draws")
        if self.new_size > 0:
            delayed_draws = self.players * self.delayed_rounds * self.sentences_per_round
            if delayed_draws < SENTENCE_VOTE_THRESHOLD * self.new_size:
                raise InfeasibleConfig("delayed phase cannot cover the new pool five times")


@dataclass
class StudyRun:
    platform: Platform
    report: dict
    gold_labels: dict[str, SentenceLabel]
    gold_words: dict[str, frozenset[int]]
    dataset_lines: list[str] = field(default_factory=list)
    baseline_alphas: tuple[float, ...] = ()


def _demographics(i: int) -> DemographicProfile:
    genders = [Gender.WOMAN, Gender.MAN, Gender.DIVERSE, Gender.UNDISCLOSED]
    educations = [
        "High school graduate", "Some college", "Associate degree",
        "Bachelor's degree", "Graduate work",
    ]
    freqs = ["Every day", "Several times per day", "Several times per week", "Several times per month"]
    return DemographicProfile(
        gender=genders[i % len(genders)],
        age=20 + (i % 45),
        education=educations[i % len(educations)],
        english=EnglishLevel.PROFICIENT,
        leaning=(i % 21) - 10,
        news_frequency=freqs[i % len(freqs)],
        outlets=(),
    )


def _seed_pool(platform: Platform, config: StudyConfig,
               pool_csv: str | None, new_specs: list[NewSentenceSpec] | None,
               gold_file: dict | None):
    """Create topics and sentences; return gold maps keyed by sentence id."""
    baseline_csv = pool_csv if pool_csv is not None else generate_baseline_csv(
        config.baseline_size, min_topics=config.direct_rounds)
    specs = new_specs if new_specs is not None else generate_new_sentences(
        config.new_size, min_topics=config.delayed_rounds)

    quota = max(platform.config.daily_quota, config.sentences_per_round)
    topic_names = baseline_topic_names(config.baseline_size, config.direct_rounds) if config.baseline_size else []
    for name in topic_names:
        platform.create_topic(name, unlocked_by_default=True, topic_id=name, daily_quota=quota)
    for spec in specs:
        if spec.topic not in platform.content.topics:
            platform.create_topic(spec.topic, unlocked_by_default=True, topic_id=spec.topic, daily_quota=quota)

    if config.baseline_size:
        report = platform.import_baseline(baseline_csv)
        if report.rejected:
            raise InfeasibleConfig(f"pool file rejected {len(report.rejected)} baseline rows")

    gold_labels: dict[str, SentenceLabel] = {}
    gold_words: dict[str, frozenset[int]] = {}
    for s in platform.content.sentences.values():
        if s.origin is Origin.BASELINE:
            gold_labels[s.id] = s.baseline_label
            gold_words[s.id] = s.baseline_biased_words

    gold_by_text = dict(gold_file or {})
    for spec in specs:
        s = platform.ingest_sentence(spec.text, spec.topic, spec.article_url, spec.outlet, spec.outlet_leaning)
        override = gold_by_text.get(" ".join(spec.text.split()))
        if override is not None:
            label = SentenceLabel(override["label"])
            words = tuple(override.get("biased_words", ()))
        else:
            label, words = spec.gold_label, spec.gold_words
        indices = frozenset(
            t.index for t in s.tokens if t.surface in set(words)
        )
        gold_labels[s.id] = label
        gold_words[s.id] = indices
    return gold_labels, gold_words


def run_study(
    config: StudyConfig | None = None,
    population: list[AnnotatorModel] | None = None,
    log: EventLog | None = None,
    economy: EconomyConfig | None = None,
    pool_csv: str | None = None,
    new_specs: list[NewSentenceSpec] | None = None,
    gold_file: dict | None = None,
    stop_after_players: int | None = None,
) -> StudyRun:
    config = config or StudyConfig()
    config.validate()
    if population is None:
        population = uniform_population(config.players, 1.0, seed=config.seed)
    if len(population) != config.players:
        raise InfeasibleConfig(f"population size {len(population)} != players {config.players}")

    clock = VirtualClock()
    platform = Platform(config=economy, seed=config.seed, clock=clock, log=log)
    gold_labels, gold_words = _seed_pool(platform, config, pool_csv, new_specs, gold_file)

    warnings = []
    ratio = pool_ratio_warning(platform.content.sentences.values())
    if ratio:
        warnings.append(ratio)

    base_topics = sorted({
        s.topic for s in platform.content.sentences.values() if s.origin is Origin.BASELINE
    })
    fresh_topics = sorted({
        s.topic for s in platform.content.sentences.values() if s.origin is Origin.NEW
    })
    if config.direct_rounds > 0 and config.direct_rounds > len(base_topics):
        raise InfeasibleConfig("not enough baseline topics for distinct direct rounds")
    if config.delayed_rounds > 0 and config.delayed_rounds > len(fresh_topics):
        raise InfeasibleConfig("not enough new-sentence topics for the delayed phase")

    player_ids: list[str] = []
    n_players = config.players if stop_after_players is None else min(config.players, stop_after_players)
    for i in range(n_players):
        model = population[i]
        clock.tick(1)
        player = platform.register(_demographics(i))
        player_ids.append(player.id)

        # phase 1: tutorial, auto-answered from curated labels at model accuracy
        for level in range(1, platform.tutorial.final_level + 1):
            view = platform.tutorial_level_view(level)
            answers = []
            for sv in view["sentences"]:
                ts = platform.tutorial.level(level).sentences[
                    [x["ref"] for x in view["sentences"]].index(sv["ref"])
                ]
                label, marks = model.decide(sv["ref"], ts.label, ts.biased_indices, ts.tokens)
                answers.append((sv["ref"], label, marks))
            clock.tick(1)
            platform.submit_tutorial(player.id, level, answers)

        # phases 2 and 3: direct rounds over the baseline pool, then delayed
        plan: list[str] = []
        for r in range(config.direct_rounds):
            plan.append(base_topics[(i * config.direct_rounds + r) % len(base_topics)])
        for r in range(config.delayed_rounds):
            plan.append(fresh_topics[(i * config.delayed_rounds + r) % len(fresh_topics)])
        for topic in plan:
            clock.tick(1)
            rnd = platform.start_round(player.id, Mode.PUBLISH, topic)
            for sid in list(rnd.sentence_ids):
                s = platform.content.sentences[sid]
                label, marks = model.decide(sid, gold_labels[sid], gold_words[sid], s.tokens)
                clock.tick(1)
                platform.submit_sentence(rnd.id, sid, label, marks)

    # everyone returns to the paper section once labels have formed
    for pid in player_ids:
        clock.tick(1)
        platform.collect_feedback(pid)

    report = build_report(platform, config, gold_labels, warnings)
    run = StudyRun(platform=platform, report=report, gold_labels=gold_labels, gold_words=gold_words)
    run.dataset_lines = [
        json.dumps(rec.to_json_dict(), ensure_ascii=False)
        for rec in platform.export_dataset()
    ]
    data = platform.reliability_data(origin=Origin.BASELINE)
    if data is not None:
        try:
            run.baseline_alphas = bootstrap_alpha(
                data, b=config.bootstrap_b, seed=config.seed, level=config.level).alphas
        except Exception:
            run.baseline_alphas = ()
    return run


def player_label_map(platform: Platform, origin: Origin | None = None) -> dict[str, SentenceLabel]:
    """Majority labels where definite, keyed by sentence id."""
    out: dict[str, SentenceLabel] = {}
    for sid, st in platform.agg.label_states.items():
        sentence = platform.content.sentences.get(sid)
        if sentence is None or (origin is not None and sentence.origin is not origin):
            continue
        label = compute_sentence_label(st.biased_votes, st.not_biased_votes)
        if label is not None:
            out[sid] = label
    return out


def _comparison_block(platform: Platform, gold: dict[str, SentenceLabel], origin: Origin | None) -> dict | None:
    player = player_label_map(platform, origin)
    keys = sorted(set(player) & set(gold))
    if not keys:
        return None
    g = {k: gold[k] for k in keys}
    p = {k: player[k] for k in keys}
    confusion = confusion_from_labels(g, p)
    breakdown = agreement_breakdown(g, p)
    return {
        "sentences": len(keys),
        "confusion": {"tp": confusion.tp, "fn": confusion.fn, "fp": confusion.fp, "tn": confusion.tn},
        "metrics": classification_metrics(confusion).to_json_dict(),
        "agreement": breakdown.to_json_dict(),
    }


def build_report(platform: Platform, config: StudyConfig,
                 gold_labels: dict[str, SentenceLabel] | None = None,
                 warnings: list[str] | None = None) -> dict:
    """Evaluation report over a populated store; deterministic field order."""
    counts = {
        sid: platform.agg.annotation_count(sid)
        for sid in sorted(platform.content.sentences)
    }
    n_annotations = sum(1 for a in platform.agg.annotations.values() if contributes(a))
    established = sum(
        1 for sid in platform.content.sentences
        if platform.agg.label_states.get(sid) is not None
        and platform.agg.label_states[sid].status is Status.ESTABLISHED
    )
    report = {
        "config": asdict(config),
        "totals": {
            "players": len(platform.players),
            "sentences": len(platform.content.sentences),
            "annotations": n_annotations,
            "established": established,
            "min_annotations": min(counts.values()) if counts else 0,
            "max_annotations": max(counts.values()) if counts else 0,
        },
        "per_sentence_counts": counts,
        "alpha": {},
        "expert_comparison": None,
        "economy": platform.economy_totals(),
        "warnings": warnings or [],
    }
    for name, origin in (("all", None), ("baseline", Origin.BASELINE), ("new", Origin.NEW)):
        data = platform.reliability_data(origin=origin)
        report["alpha"][name] = metrics_report(
            data, b=config.bootstrap_b, seed=config.seed, level=config.level)
    if gold_labels:
        report["expert_comparison"] = {
            "all": _comparison_block(platform, gold_labels, None),
            "baseline": _comparison_block(platform, gold_labels, Origin.BASELINE),
            "new": _comparison_block(platform, gold_labels, Origin.NEW),
        }
    return report
