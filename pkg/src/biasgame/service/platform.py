"""The game platform: validates commands, appends events, applies state.

Every state change flows through exactly one path: a public command method
validates inputs and resolves nondeterminism (selection, ids, timestamps),
appends a fact event to the log, then applies it. Replaying the log through
the same apply functions reconstructs bit-identical label states and player
economies, which is the durability contract.

Commands hold a re-entrant lock, so per-player and per-sentence updates are
serialized; queries read the latest applied state.
"""
from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone
from typing import Iterable

from ..aggregation.models import Annotation, FeedbackKind, Mode, PaperEntry, Phase, ResolvedFeedback
from ..aggregation.store import AggregationStore
from ..content.models import Leaning, Origin, Sentence, SentenceLabel, Topic
from ..content.store import ContentStore, ImportReport
from ..content.stopwords import DEFAULT_STOPWORDS
from ..engine.economy import EconomyConfig, level_for_xp
from ..engine.models import (
    DemographicProfile,
    EnglishLevel,
    Gender,
    GroupMission,
    Player,
    Round,
    SentenceOutcome,
    SentenceVerdict,
    TokenVerdict,
    WordFeedback,
)
from ..engine.scoring import combined_accuracy, pending_word_feedback, score_word_submission
from ..engine.tutorial import TutorialContent, load_tutorial
from ..errors import (
    AlreadyOwned,
    AlreadyScored,
    AlreadyTapped,
    DuplicateAnnotation,
    InsufficientContent,
    InsufficientFunds,
    ModeLocked,
    OutOfOrder,
    SelfCritique,
    SentenceSetMismatch,
    StopwordMarked,
    TimeExpired,
    TopicLocked,
    TutorialIncomplete,
    UnknownPlayer,
    UnknownRound,
    UnknownSentence,
    ValidationFailed,
    WrongLevelContent,
)
from ..metrics.reliability import ReliabilityData
from . import events as ev
from .clock import Clock
from .events import Event, EventLog

WORD_MODES = {Mode.PUBLISH, Mode.CRITIQUE, Mode.COOP}
BONUS_MODES = {Mode.CONTEXT, Mode.PUBLISH}


@dataclass
class SubmitResult:
    feedback_kind: FeedbackKind
    feedback: WordFeedback
    reward_currency: int
    reward_xp: int
    round_completed: bool
    round_bonus: int = 0


@dataclass
class TutorialResult:
    level: int
    verdicts: list[bool]
    word_feedback: list[WordFeedback]
    tutorial_complete: bool
    next_level: int | None
    unlocked_modes: list[str] = field(default_factory=list)


@dataclass
class QuickTapResult:
    verdict: TokenVerdict
    timer_delta: float
    currency_delta: int
    timer_remaining: float


class Platform:
    def __init__(
        self,
        config: EconomyConfig | None = None,
        seed: int = 0,
        clock: Clock | None = None,
        log: EventLog | None = None,
        tutorial: TutorialContent | None = None,
        stopwords: frozenset[str] = DEFAULT_STOPWORDS,
        tz: timezone = timezone.utc,
    ):
        self.config = config or EconomyConfig()
        self.clock = clock or Clock()
        self.log = log if log is not None else EventLog()
        self.tutorial = tutorial or load_tutorial(stopwords=stopwords)
        self.tz = tz
        self.content = ContentStore(stopwords=stopwords)
        self.agg = AggregationStore()
        self.players: dict[str, Player] = {}
        self.rounds: dict[str, Round] = {}
        self.mission = GroupMission(goal=self.config.group_mission_goal)
        self.breaking_news: list[str] = []
        self.last_refresh_day: date | None = None
        self._rng = random.Random(seed)
        self._next_player = 1
        self._next_round = 1
        self._lock = threading.RLock()
        # replay any events already present in the log (durable restart)
        pending = list(self.log)
        for event in pending:
            self._apply(event)

    # ------------------------------------------------------------------
    # plumbing

    def _now(self) -> datetime:
        return self.clock.now().astimezone(timezone.utc)

    def _day(self, ts: datetime) -> date:
        return ts.astimezone(self.tz).date()

    def _commit(self, event: Event):
        self.log.append(event)
        return self._apply(event)

    def _apply(self, event: Event):
        handler = getattr(self, f"_apply_{type(event).__name__}")
        return handler(event)

    def _player(self, player_id: str) -> Player:
        try:
            return self.players[player_id]
        except KeyError:
            raise UnknownPlayer(f"no such player: {player_id}") from None

    def _round(self, round_id: str) -> Round:
        try:
            return self.rounds[round_id]
        except KeyError:
            raise UnknownRound(f"no such round: {round_id}") from None

    def _sentence(self, sentence_id: str) -> Sentence:
        try:
            return self.content.sentences[sentence_id]
        except KeyError:
            raise UnknownSentence(f"no such sentence: {sentence_id}") from None

    def topic_unlocked(self, player: Player, topic_id: str) -> bool:
        topic = self.content.get_topic(topic_id)
        return topic.unlocked_by_default or topic_id in player.unlocked_topics

    def _grant(self, player: Player, currency: int, xp: int) -> None:
        player.currency += currency
        player.xp += xp
        player.level = level_for_xp(player.xp, self.config.level_xp_base)
        self._refresh_unlocks(player)

    def _refresh_unlocks(self, player: Player) -> None:
        # unlock chain is monotone: context/publish < quickwords < coop < critique
        if player.assessment_done and Mode.QUICKWORDS not in player.unlocked_modes:
            player.unlocked_modes.add(Mode.QUICKWORDS)
        if Mode.QUICKWORDS in player.unlocked_modes and player.level >= self.config.coop_unlock_level:
            player.unlocked_modes.add(Mode.COOP)
        if Mode.COOP in player.unlocked_modes and player.level >= self.config.critique_unlock_level:
            player.unlocked_modes.add(Mode.CRITIQUE)

    # ------------------------------------------------------------------
    # content commands

    def create_topic(
        self,
        name: str,
        unlocked_by_default: bool = False,
        price: int | None = None,
        daily_quota: int | None = None,
        topic_id: str | None = None,
    ) -> Topic:
        with self._lock:
            tid = topic_id or name.lower().replace(" ", "-")
            if tid in self.content.topics:
                raise AlreadyOwned(f"topic exists: {tid}")
            event = ev.TopicCreated(
                ts=self._now().isoformat(),
                topic_id=tid,
                name=name,
                unlocked_by_default=unlocked_by_default,
                price=self.config.topic_price if price is None else price,
                daily_quota=self.config.daily_quota if daily_quota is None else daily_quota,
            )
            return self._commit(event)

    def _apply_TopicCreated(self, e: ev.TopicCreated) -> Topic:
        return self.content.add_topic(Topic(
            id=e.topic_id, name=e.name, unlocked_by_default=e.unlocked_by_default,
            price=e.price, daily_quota=e.daily_quota,
        ))

    def ingest_sentence(self, text, topic, article_url, outlet, outlet_leaning) -> Sentence:
        with self._lock:
            sid = self.content.next_sentence_id()
            # full validation happens here; the event carries the resolved row
            self.content.build_sentence(sid, text, topic, article_url, outlet, Leaning(outlet_leaning))
            event = ev.SentenceIngested(
                ts=self._now().isoformat(), sentence_id=sid, text=text, topic=topic,
                article_url=article_url, outlet=outlet, outlet_leaning=Leaning(outlet_leaning).value,
                origin=Origin.NEW.value,
            )
            return self._commit(event)

    def import_baseline(self, file) -> ImportReport:
        """Import the baseline CSV; bad rows are rejected, the rest imported.

        Topics named by the file are created on the fly (default-unlocked):
        the import format is the curator's way to introduce content.
        """
        with self._lock:
            rows, rejected = self.content.parse_baseline_rows(file)
            report = ImportReport(imported=0, rejected=rejected)
            for topic in sorted({row["topic"] for row in rows}):
                if topic not in self.content.topics:
                    self._commit(ev.TopicCreated(
                        ts=self._now().isoformat(), topic_id=topic, name=topic,
                        unlocked_by_default=True, price=self.config.topic_price,
                        daily_quota=self.config.daily_quota,
                    ))
            for row in rows:
                event = ev.SentenceIngested(
                    ts=self._now().isoformat(),
                    sentence_id=self.content.next_sentence_id(),
                    text=row["text"],
                    topic=row["topic"],
                    article_url=row["article_url"],
                    outlet=row["outlet"],
                    outlet_leaning=row["outlet_leaning"].value,
                    origin=Origin.BASELINE.value,
                    baseline_label=row["label"].value,
                    baseline_biased_words=tuple(row["biased_word_indices"]),
                )
                self._commit(event)
                report.imported += 1
            return report

    def _apply_SentenceIngested(self, e: ev.SentenceIngested) -> Sentence:
        sentence = self.content.build_sentence(
            e.sentence_id, e.text, e.topic, e.article_url, e.outlet,
            Leaning(e.outlet_leaning), Origin(e.origin),
            SentenceLabel(e.baseline_label) if e.baseline_label else None,
            e.baseline_biased_words,
        )
        return self.content.put(sentence)

    # ------------------------------------------------------------------
    # players

    def register(self, demographics: DemographicProfile) -> Player:
        with self._lock:
            pid = f"p{self._next_player:04d}"
            event = ev.PlayerRegistered(
                ts=self._now().isoformat(), player_id=pid,
                gender=demographics.gender.value, age=demographics.age,
                education=demographics.education, english=demographics.english.value,
                leaning=demographics.leaning, news_frequency=demographics.news_frequency,
                outlets=tuple(demographics.outlets),
            )
            return self._commit(event)

    def _apply_PlayerRegistered(self, e: ev.PlayerRegistered) -> Player:
        profile = DemographicProfile(
            gender=Gender(e.gender), age=e.age, education=e.education,
            english=EnglishLevel(e.english), leaning=e.leaning,
            news_frequency=e.news_frequency, outlets=tuple(e.outlets),
        )
        player = Player(id=e.player_id, demographics=profile)
        self.players[e.player_id] = player
        self._next_player = max(self._next_player, int(e.player_id[1:]) + 1)
        return player

    # ------------------------------------------------------------------
    # tutorial

    def tutorial_level_view(self, level: int) -> dict:
        lv = self.tutorial.level(level)
        return {
            "level": lv.level,
            "objective": lv.objective,
            "dialogue": list(lv.dialogue),
            "plant_stage": min(level, self.tutorial.final_level + 1),
            "sentences": [
                {
                    "ref": s.ref,
                    "text": s.text,
                    "tokens": [
                        {"index": t.index, "surface": t.surface, "is_stopword": t.is_stopword}
                        for t in s.tokens
                    ],
                }
                for s in lv.sentences
            ],
        }

    def submit_tutorial(self, player_id: str, level: int, answers: list[tuple[str, SentenceLabel, Iterable[int]]]) -> TutorialResult:
        """Grade a tutorial level; the level advances regardless of score."""
        with self._lock:
            player = self._player(player_id)
            if player.tutorial_complete:
                raise WrongLevelContent("tutorial already completed")
            if level != player.tutorial_level:
                raise WrongLevelContent(f"expected level {player.tutorial_level}, got {level}")
            lv = self.tutorial.level(level)
            expected = {s.ref for s in lv.sentences}
            got = [ref for ref, _l, _m in answers]
            if set(got) != expected or len(got) != len(expected):
                raise WrongLevelContent("submission must cover the level's ten sentences exactly once")
            event = ev.TutorialSubmitted(
                ts=self._now().isoformat(), player_id=player_id, level=level,
                answers=tuple((ref, label.value, tuple(sorted(marks))) for ref, label, marks in answers),
            )
            return self._commit(event)

    def _apply_TutorialSubmitted(self, e: ev.TutorialSubmitted) -> TutorialResult:
        player = self.players[e.player_id]
        lv = self.tutorial.level(e.level)
        by_ref = {s.ref: s for s in lv.sentences}
        verdicts: list[bool] = []
        feedback: list[WordFeedback] = []
        for ref, label, marks in e.answers:
            s = by_ref[ref]
            hit = SentenceLabel(label) is s.label
            verdicts.append(hit)
            feedback.append(score_word_submission(frozenset(marks), s.biased_indices, s.tokens, hit))
        player.tutorial_level += 1
        complete = player.tutorial_level > self.tutorial.final_level
        unlocked: list[str] = []
        if complete and not player.tutorial_complete:
            player.tutorial_complete = True
            player.unlocked_modes.update({Mode.CONTEXT, Mode.PUBLISH})
            unlocked = [Mode.CONTEXT.value, Mode.PUBLISH.value]
        return TutorialResult(
            level=e.level,
            verdicts=verdicts,
            word_feedback=feedback,
            tutorial_complete=complete,
            next_level=None if complete else player.tutorial_level,
            unlocked_modes=unlocked,
        )

    # ------------------------------------------------------------------
    # rounds

    def _effective_truth_exists(self, sentence_id: str) -> bool:
        return self.agg.effective_truth(self.content.sentences[sentence_id]) is not None

    def start_round(
        self,
        player_id: str,
        mode: Mode,
        topic_id: str | None = None,
        breaking: bool = False,
    ) -> Round:
        with self._lock:
            player = self._player(player_id)
            if not player.tutorial_complete:
                raise TutorialIncomplete("finish the tutorial first")
            active = self.rounds.get(player.active_round) if player.active_round else None
            if active is not None and not active.completed:
                raise OutOfOrder(f"round {active.id} is still active")
            ts = self._now()
            day = self._day(ts)
            n = self.config.round_size

            if mode is Mode.ASSESSMENT:
                if player.assessment_done:
                    raise ModeLocked("assessment already completed")
                pool = self.content.eligible_assessment_pool(
                    player.seen_sentences, self._effective_truth_exists)
                if len(pool) < self.config.assessment_size:
                    raise InsufficientContent("not enough ground-truthed sentences for assessment")
                pool_sorted = sorted(pool, key=lambda s: s.id)
                chosen = self._rng.sample(pool_sorted, self.config.assessment_size)
                sentence_ids = tuple(s.id for s in chosen)
                topic_id = None
            elif breaking:
                if mode is not Mode.PUBLISH:
                    raise ValidationFailed("mode", "breaking news runs in publish mode")
                if Mode.PUBLISH not in player.unlocked_modes:
                    raise ModeLocked("publish is locked")
                if player.last_breaking_news_day == day:
                    raise AlreadyScored("breaking news already completed today")
                unseen = [sid for sid in self.breaking_news if sid not in player.seen_sentences]
                if not unseen:
                    raise InsufficientContent("no unseen breaking news sentences")
                sentence_ids = tuple(unseen)
                topic_id = None
            else:
                if mode not in player.unlocked_modes:
                    raise ModeLocked(f"{mode.value} is locked")
                if topic_id is None:
                    raise ValidationFailed("topic", "topic is required")
                if not self.topic_unlocked(player, topic_id):
                    raise TopicLocked(f"topic {topic_id} is locked")
                among = None
                if mode is Mode.CRITIQUE:
                    among = self._critique_candidates(player_id)
                picked = self.content.pick(
                    player_id, player.seen_sentences, topic_id, n,
                    self._rng, self.agg.annotation_count, day, among=among,
                )
                if mode is Mode.COOP:
                    partner_list = self._coop_waiting_list(player, topic_id)
                    if partner_list is not None:
                        picked = [self.content.sentences[sid] for sid in partner_list]
                sentence_ids = tuple(s.id for s in picked)

            shown: tuple[tuple[str, str], ...] = ()
            if mode is Mode.CRITIQUE:
                shown = tuple(
                    (sid, self._pick_author(sid, player_id)) for sid in sentence_ids
                )
            event = ev.RoundStarted(
                ts=ts.isoformat(), round_id=f"r{self._next_round:05d}", player_id=player_id,
                mode=mode.value, topic_id=topic_id, sentence_ids=sentence_ids,
                breaking=breaking, shown=shown,
            )
            return self._commit(event)

    def _critique_candidates(self, player_id: str) -> set[str]:
        seen_by_others: set[str] = set()
        for (pid, sid), a in self.agg.annotations.items():
            if pid != player_id and a.sentence_label is not None:
                seen_by_others.add(sid)
        return seen_by_others

    def _pick_author(self, sentence_id: str, player_id: str) -> str:
        authors = sorted(
            pid for (pid, sid), a in self.agg.annotations.items()
            if sid == sentence_id and pid != player_id and a.sentence_label is not None
        )
        if not authors:
            raise InsufficientContent(f"no foreign annotation to critique on {sentence_id}")
        return self._rng.choice(authors)

    def _coop_waiting_list(self, player: Player, topic_id: str) -> tuple[str, ...] | None:
        """Reuse the oldest open co-op sentence list this player can still play."""
        for r in self.rounds.values():
            if (
                r.mode is Mode.COOP
                and not r.coop_settled
                and r.player_id != player.id
                and r.topic_id == topic_id
                and not any(sid in player.seen_sentences for sid in r.sentence_ids)
            ):
                return tuple(r.sentence_ids)
        return None

    def _apply_RoundStarted(self, e: ev.RoundStarted) -> Round:
        player = self.players[e.player_id]
        mode = Mode(e.mode)
        ts = e.when
        r = Round(
            id=e.round_id, player_id=e.player_id, mode=mode, topic_id=e.topic_id,
            sentence_ids=list(e.sentence_ids), started_at=ts, breaking=e.breaking,
        )
        if mode is Mode.QUICKWORDS:
            r.timer_remaining = self.config.quickwords_initial_seconds
            r.last_action_at = ts
        for sid, author in e.shown:
            a = self.agg.annotations[(author, sid)]
            r.shown_annotations[sid] = (author, a.sentence_label, a.marked_tokens)
        if e.topic_id is not None:
            self.content.charge_quota(e.player_id, e.topic_id, self._day(ts), len(e.sentence_ids))
        self.rounds[e.round_id] = r
        player.active_round = e.round_id
        self._next_round = max(self._next_round, int(e.round_id[1:]) + 1)
        return r

    # ------------------------------------------------------------------
    # sentence submission (context/publish/coop/assessment)

    def submit_sentence(
        self,
        round_id: str,
        sentence_id: str,
        label: SentenceLabel | None,
        marks: Iterable[int] = (),
    ) -> SubmitResult:
        with self._lock:
            r = self._round(round_id)
            if r.mode in (Mode.QUICKWORDS, Mode.CRITIQUE):
                raise ValidationFailed("mode", f"use the {r.mode.value} endpoint for this round")
            self._validate_submission(r, sentence_id)
            if label is None:
                raise ValidationFailed("label", "sentence label is required")
            marks = frozenset(marks)
            if r.mode not in WORD_MODES and marks:
                raise ValidationFailed("marked_tokens", f"{r.mode.value} rounds take no word marks")
            sentence = self._sentence(sentence_id)
            self.agg.validate_marks(sentence, marks)
            if self.agg.has_annotated(r.player_id, sentence_id) and r.mode is not Mode.ASSESSMENT:
                raise DuplicateAnnotation(f"{r.player_id} already annotated {sentence_id}")
            event = ev.SentenceSubmitted(
                ts=self._now().isoformat(), round_id=round_id, sentence_id=sentence_id,
                label=label.value, marks=tuple(sorted(marks)),
            )
            return self._commit(event)

    def _validate_submission(self, r: Round, sentence_id: str) -> None:
        if r.completed:
            raise AlreadyScored(f"round {r.id} is finished")
        if sentence_id in r.outcomes or sentence_id in r.closed_sentences:
            raise AlreadyScored(f"{sentence_id} already scored in round {r.id}")
        if r.current_sentence != sentence_id:
            raise OutOfOrder(f"expected {r.current_sentence}, got {sentence_id}")

    def _apply_SentenceSubmitted(self, e: ev.SentenceSubmitted) -> SubmitResult:
        r = self.rounds[e.round_id]
        player = self.players[r.player_id]
        sentence = self.content.sentences[e.sentence_id]
        label = SentenceLabel(e.label) if e.label else None
        marks = frozenset(e.marks)
        ts = e.when

        truth = self.agg.effective_truth(sentence)
        phase = Phase.DIRECT if truth is not None else Phase.DELAYED
        annotation = Annotation(
            player_id=r.player_id, sentence_id=e.sentence_id, sentence_label=label,
            marked_tokens=marks, mode=r.mode, phase=phase, timestamp=ts,
        )
        if r.mode is Mode.ASSESSMENT:
            # stored but never counted; assessment reuses ground-truthed sentences
            if not self.agg.has_annotated(r.player_id, e.sentence_id):
                self.agg.annotations[(r.player_id, e.sentence_id)] = annotation
            first_est = False
            kind = FeedbackKind.DIRECT
        else:
            prior = self.agg.label_states.get(e.sentence_id)
            prior_ever = prior.ever_established if prior else False
            _st, kind, _became = self.agg.record(annotation, sentence, player.tutorial_complete)
            first_est = (
                not prior_ever
                and self.agg.label_states[e.sentence_id].ever_established
                and sentence.origin is not Origin.BASELINE
            )
        player.seen_sentences.add(e.sentence_id)
        if first_est:
            self.mission.advance()

        mult = self.config.breaking_news_multiplier if r.breaking else 1
        currency = xp = 0
        if kind is FeedbackKind.DIRECT:
            truth_label, truth_tokens = truth
            hit = label is truth_label
            if r.mode in WORD_MODES:
                fb = score_word_submission(marks, truth_tokens, sentence.tokens, hit)
            else:
                fb = WordFeedback(
                    token_verdicts={},
                    sentence_verdict=SentenceVerdict.HIT if hit else SentenceVerdict.MISS,
                    combined_accuracy=combined_accuracy(hit, 0, 0, 0),
                )
            if r.mode in (Mode.CONTEXT, Mode.PUBLISH, Mode.CRITIQUE):
                currency = mult * (self.config.sentence_reward * hit + self.config.word_hit_bonus * fb.word_hits)
                xp = mult * self.config.sentence_xp * hit
            elif r.mode is Mode.COOP:
                currency = xp = 0  # settlement pays on agreement
            player.skill_total += 1
            player.skill_hits += int(hit)
            if r.mode is not Mode.ASSESSMENT:
                self.agg.add_paper_entry(PaperEntry(
                    annotation=annotation, feedback_kind=kind, collected=True,
                    reward_currency=currency, reward_xp=xp, sentence_hit=hit,
                ))
        else:
            fb = pending_word_feedback(marks, sentence.tokens)
            self.agg.add_paper_entry(PaperEntry(annotation=annotation, feedback_kind=kind))

        self._grant(player, currency, xp)
        outcome = SentenceOutcome(
            sentence_id=e.sentence_id, label=label, marks=marks, feedback=fb,
            reward_currency=currency, reward_xp=xp, submitted_at=ts,
        )
        r.outcomes[e.sentence_id] = outcome
        r.cursor += 1
        r.reward_accumulated += currency
        bonus = self._complete_round_if_done(r, ts)
        return SubmitResult(
            feedback_kind=kind, feedback=fb, reward_currency=currency, reward_xp=xp,
            round_completed=r.completed, round_bonus=bonus,
        )

    def _complete_round_if_done(self, r: Round, ts: datetime) -> int:
        if r.completed or r.cursor < len(r.sentence_ids):
            return 0
        r.completed = True
        r.completed_at = ts
        player = self.players[r.player_id]
        if player.active_round == r.id:
            player.active_round = None
        bonus = 0
        if r.mode in BONUS_MODES and not r.bonus_granted:
            hits = sum(
                1 for o in r.outcomes.values()
                if o.feedback.sentence_verdict is SentenceVerdict.HIT
            )
            if hits >= self.config.round_bonus_threshold:
                mult = self.config.breaking_news_multiplier if r.breaking else 1
                bonus = mult * self.config.round_bonus
                r.bonus_granted = True
                r.reward_accumulated += bonus
                self._grant(player, bonus, 0)
        if r.breaking:
            self._update_streak(player, self._day(ts))
        if r.mode is Mode.ASSESSMENT and not player.assessment_done:
            player.assessment_done = True
            self._refresh_unlocks(player)
        return bonus

    def _update_streak(self, player: Player, day: date) -> None:
        if player.last_breaking_news_day == day:
            return
        if player.last_breaking_news_day == day - timedelta(days=1):
            player.streak_days += 1
        else:
            player.streak_days = 1
        player.last_breaking_news_day = day

    # ------------------------------------------------------------------
    # quick words

    def _decay_timer(self, r: Round, ts: datetime) -> float:
        elapsed = (ts - r.last_action_at).total_seconds()
        return max(0.0, r.timer_remaining - max(0.0, elapsed))

    def quick_tap(self, round_id: str, sentence_id: str, token_index: int) -> QuickTapResult:
        with self._lock:
            r = self._round(round_id)
            if r.mode is not Mode.QUICKWORDS:
                raise ValidationFailed("mode", "not a quick words round")
            if r.completed:
                raise AlreadyScored(f"round {r.id} is finished")
            if r.current_sentence != sentence_id:
                raise OutOfOrder(f"expected {r.current_sentence}, got {sentence_id}")
            ts = self._now()
            if self._decay_timer(r, ts) <= 0.0:
                raise TimeExpired("the round timer has run out")
            sentence = self._sentence(sentence_id)
            if token_index not in sentence.valid_indices:
                raise ValidationFailed("token_index", f"no token {token_index}")
            if token_index in sentence.stopword_indices:
                raise StopwordMarked("stopwords are not tappable")
            if token_index in r.taps.get(sentence_id, {}):
                raise AlreadyTapped(f"token {token_index} already tapped")
            event = ev.QuickTapped(
                ts=ts.isoformat(), round_id=round_id, sentence_id=sentence_id,
                token_index=token_index,
            )
            return self._commit(event)

    def _apply_QuickTapped(self, e: ev.QuickTapped) -> QuickTapResult:
        r = self.rounds[e.round_id]
        player = self.players[r.player_id]
        sentence = self.content.sentences[e.sentence_id]
        ts = e.when
        timer = self._decay_timer(r, ts)
        truth = self.agg.effective_truth(sentence)
        if truth is None:
            verdict, dt, dc = TokenVerdict.PENDING, 0.0, 0
        elif e.token_index in truth[1]:
            verdict = TokenVerdict.HIT
            dt = self.config.quickwords_hit_seconds
            dc = self.config.quickwords_word_reward
        else:
            verdict = TokenVerdict.WRONG
            dt = -self.config.quickwords_penalty_seconds
            dc = 0
        timer = max(0.0, timer + dt)
        r.taps.setdefault(e.sentence_id, {})[e.token_index] = verdict
        r.timer_remaining = timer
        r.last_action_at = ts
        self._grant(player, dc, 0)
        return QuickTapResult(verdict=verdict, timer_delta=dt, currency_delta=dc, timer_remaining=timer)

    def quick_next(self, round_id: str, sentence_id: str) -> dict:
        """Close the current quick words sentence and move on (or finish)."""
        with self._lock:
            r = self._round(round_id)
            if r.mode is not Mode.QUICKWORDS:
                raise ValidationFailed("mode", "not a quick words round")
            if r.completed:
                raise AlreadyScored(f"round {r.id} is finished")
            if r.current_sentence != sentence_id:
                raise OutOfOrder(f"expected {r.current_sentence}, got {sentence_id}")
            event = ev.QuickSentenceClosed(
                ts=self._now().isoformat(), round_id=round_id, sentence_id=sentence_id,
            )
            return self._commit(event)

    def _apply_QuickSentenceClosed(self, e: ev.QuickSentenceClosed) -> dict:
        r = self.rounds[e.round_id]
        player = self.players[r.player_id]
        sentence = self.content.sentences[e.sentence_id]
        ts = e.when
        r.timer_remaining = self._decay_timer(r, ts)
        r.last_action_at = ts
        taps = r.taps.get(e.sentence_id, {})
        marks = frozenset(taps)
        truth = self.agg.effective_truth(sentence)
        annotation = Annotation(
            player_id=r.player_id, sentence_id=e.sentence_id, sentence_label=None,
            marked_tokens=marks, mode=Mode.QUICKWORDS,
            phase=Phase.DIRECT if truth is not None else Phase.DELAYED, timestamp=ts,
        )
        prior = self.agg.label_states.get(e.sentence_id)
        prior_ever = prior.ever_established if prior else False
        _st, kind, _became = self.agg.record(annotation, sentence, player.tutorial_complete)
        if (
            not prior_ever
            and self.agg.label_states[e.sentence_id].ever_established
            and sentence.origin is not Origin.BASELINE
        ):
            self.mission.advance()
        player.seen_sentences.add(e.sentence_id)
        if kind is FeedbackKind.DIRECT:
            # per-tap rewards were already paid; archive the outcome
            paid = sum(
                self.config.quickwords_word_reward
                for v in taps.values() if v is TokenVerdict.HIT
            )
            self.agg.add_paper_entry(PaperEntry(
                annotation=annotation, feedback_kind=kind, collected=True,
                reward_currency=paid, reward_xp=0, sentence_hit=None,
            ))
        else:
            self.agg.add_paper_entry(PaperEntry(annotation=annotation, feedback_kind=kind))
        r.closed_sentences.add(e.sentence_id)
        r.cursor += 1
        finished = r.timer_remaining <= 0.0 or r.cursor >= len(r.sentence_ids)
        if finished and not r.completed:
            r.completed = True
            r.completed_at = ts
            if player.active_round == r.id:
                player.active_round = None
        summary = {
            "finished": finished,
            "timer_remaining": r.timer_remaining,
            "next_sentence": r.current_sentence if not finished else None,
            "tapped": {
                sid: {str(i): v.value for i, v in sorted(tapped.items())}
                for sid, tapped in r.taps.items()
            },
        }
        return summary

    # ------------------------------------------------------------------
    # critique

    def submit_critique(
        self,
        round_id: str,
        sentence_id: str,
        agree: bool,
        edited_label: SentenceLabel | None = None,
        edited_marks: Iterable[int] = (),
    ) -> SubmitResult:
        with self._lock:
            r = self._round(round_id)
            if r.mode is not Mode.CRITIQUE:
                raise ValidationFailed("mode", "not a critique round")
            self._validate_submission(r, sentence_id)
            shown = r.shown_annotations.get(sentence_id)
            if shown is None:
                raise UnknownSentence(f"{sentence_id} is not in this round")
            author, shown_label, shown_marks = shown
            if author == r.player_id:
                raise SelfCritique("cannot rate your own annotation")
            if agree:
                label, marks = shown_label, shown_marks
            else:
                if edited_label is None:
                    raise ValidationFailed("label", "disagreeing requires edited labels")
                label, marks = edited_label, frozenset(edited_marks)
            sentence = self._sentence(sentence_id)
            self.agg.validate_marks(sentence, frozenset(marks))
            if self.agg.has_annotated(r.player_id, sentence_id):
                raise DuplicateAnnotation(f"{r.player_id} already annotated {sentence_id}")
            event = ev.CritiqueSubmitted(
                ts=self._now().isoformat(), round_id=round_id, sentence_id=sentence_id,
                agree=agree, label=label.value, marks=tuple(sorted(marks)),
            )
            return self._commit(event)

    def _apply_CritiqueSubmitted(self, e: ev.CritiqueSubmitted) -> SubmitResult:
        # the endorsed or edited labels enter aggregation as this player's own
        submit_event = ev.SentenceSubmitted(
            ts=e.ts, round_id=e.round_id, sentence_id=e.sentence_id,
            label=e.label, marks=e.marks,
        )
        return self._apply_SentenceSubmitted(submit_event)

    # ------------------------------------------------------------------
    # co-op settlement

    def find_settlable_partner(self, round_id: str) -> str | None:
        """Oldest completed, unsettled co-op round over the same sentence list."""
        r = self._round(round_id)
        key = tuple(sorted(r.sentence_ids))
        candidates = [
            other for other in self.rounds.values()
            if other.mode is Mode.COOP and other.id != r.id and not other.coop_settled
            and other.completed and other.player_id != r.player_id
            and tuple(sorted(other.sentence_ids)) == key
        ]
        if not candidates:
            return None
        return min(candidates, key=lambda x: x.id).id

    def coop_settle(self, round_a_id: str, round_b_id: str) -> dict:
        """Settle two completed co-op rounds over the same sentence list."""
        with self._lock:
            a, b = self._round(round_a_id), self._round(round_b_id)
            if not (a.completed and b.completed):
                raise OutOfOrder("both rounds must be completed")
            if a.coop_settled or b.coop_settled:
                raise AlreadyScored("round already settled")
            if a.mode is not Mode.COOP or b.mode is not Mode.COOP:
                raise ValidationFailed("mode", "both rounds must be co-op")
            if a.player_id == b.player_id:
                raise SelfCritique("co-op needs two players")
            if sorted(a.sentence_ids) != sorted(b.sentence_ids):
                raise SentenceSetMismatch("rounds cover different sentence lists")
            event = ev.CoopSettled(ts=self._now().isoformat(), round_a=a.id, round_b=b.id)
            return self._commit(event)

    def _apply_CoopSettled(self, e: ev.CoopSettled) -> dict:
        a, b = self.rounds[e.round_a], self.rounds[e.round_b]
        pa, pb = self.players[a.player_id], self.players[b.player_id]
        agreements = 0
        for sid in a.sentence_ids:
            oa, ob = a.outcomes[sid], b.outcomes[sid]
            if oa.label is ob.label and oa.marks == ob.marks:
                agreements += 1
        reward = agreements * self.config.coop_agreement_reward
        self._grant(pa, reward, 0)
        self._grant(pb, reward, 0)
        faster = min(a, b, key=lambda r: (r.total_time(), r.id))
        self._grant(self.players[faster.player_id], self.config.coop_speed_bonus, 0)
        a.coop_settled = True
        b.coop_settled = True
        a.reward_accumulated += reward + (self.config.coop_speed_bonus if faster is a else 0)
        b.reward_accumulated += reward + (self.config.coop_speed_bonus if faster is b else 0)
        return {
            "agreements": agreements,
            "reward_each": reward,
            "faster_player": faster.player_id,
            "speed_bonus": self.config.coop_speed_bonus,
        }

    # ------------------------------------------------------------------
    # purchases and daily refresh

    def purchase(self, player_id: str, item: str, topic_id: str) -> Player:
        with self._lock:
            player = self._player(player_id)
            topic = self.content.get_topic(topic_id)
            if item == "topic":
                if self.topic_unlocked(player, topic_id):
                    raise AlreadyOwned(f"topic {topic_id} already unlocked")
                price = topic.price
            elif item == "quota_refill":
                if not self.topic_unlocked(player, topic_id):
                    raise TopicLocked(f"topic {topic_id} is locked")
                price = self.config.quota_refill_price
            else:
                raise ValidationFailed("item", f"unknown item {item!r}")
            if player.currency < price:
                raise InsufficientFunds(f"price {price}, balance {player.currency}")
            event = ev.Purchased(
                ts=self._now().isoformat(), player_id=player_id, item=item, topic_id=topic_id,
            )
            return self._commit(event)

    def _apply_Purchased(self, e: ev.Purchased) -> Player:
        player = self.players[e.player_id]
        topic = self.content.topics[e.topic_id]
        if e.item == "topic":
            player.currency -= topic.price
            player.unlocked_topics.add(e.topic_id)
        else:
            player.currency -= self.config.quota_refill_price
            self.content.add_refill(
                e.player_id, e.topic_id, self._day(e.when), self.config.quota_refill_amount,
            )
        return player

    def daily_refresh(self, breaking_ids: Iterable[str] | None = None) -> dict:
        """Reset the day: refill breaking news, zero out broken streaks.

        Idempotent per day; a curator may inject breaking sentence ids.
        """
        with self._lock:
            ts = self._now()
            day = self._day(ts)
            if self.last_refresh_day == day and breaking_ids is None:
                return {"day": day.isoformat(), "breaking_news": list(self.breaking_news), "refreshed": False}
            if breaking_ids is None:
                pool = sorted(self.content.sentences)
                keyed = [(self.agg.annotation_count(sid), self._rng.random(), sid) for sid in pool]
                keyed.sort()
                chosen = tuple(sid for _c, _r, sid in keyed[: self.config.round_size])
            else:
                chosen = tuple(breaking_ids)
                for sid in chosen:
                    self._sentence(sid)
            event = ev.DailyRefreshed(ts=ts.isoformat(), day=day.isoformat(), breaking_ids=chosen)
            return self._commit(event)

    def _apply_DailyRefreshed(self, e: ev.DailyRefreshed) -> dict:
        day = date.fromisoformat(e.day)
        self.breaking_news = list(e.breaking_ids)
        self.last_refresh_day = day
        for player in self.players.values():
            last = player.last_breaking_news_day
            if player.streak_days and (last is None or (day - last).days > 1):
                player.streak_days = 0
        return {"day": e.day, "breaking_news": list(e.breaking_ids), "refreshed": True}

    # ------------------------------------------------------------------
    # delayed feedback

    def collect_feedback(self, player_id: str, sentence_id: str | None = None) -> list[ResolvedFeedback]:
        """Drain resolvable delayed feedback; pending sentences stay queued."""
        with self._lock:
            self._player(player_id)
            resolvable = self.agg.resolvable_sentences(player_id)
            if sentence_id is not None:
                resolvable = [sid for sid in resolvable if sid == sentence_id]
            results = []
            for sid in resolvable:
                event = ev.FeedbackCollected(
                    ts=self._now().isoformat(), player_id=player_id, sentence_id=sid,
                )
                results.append(self._commit(event))
            return results

    def _apply_FeedbackCollected(self, e: ev.FeedbackCollected) -> ResolvedFeedback:
        player = self.players[e.player_id]
        entry = self.agg.paper[e.player_id][e.sentence_id]
        st = self.agg.label_states[e.sentence_id]
        truth_label, truth_tokens = st.resolved_label, st.resolved_biased_tokens
        a = entry.annotation
        cfg = self.config
        word_hits = len(a.marked_tokens & truth_tokens)
        if a.sentence_label is None:
            hit = None
            base_c = cfg.quickwords_word_reward * word_hits
            base_xp = 0
        else:
            hit = a.sentence_label is truth_label
            if a.mode is Mode.CONTEXT:
                base_c = cfg.sentence_reward * hit
            elif a.mode is Mode.COOP:
                base_c = 0  # co-op pays on agreement at settlement, not against truth
            else:
                base_c = cfg.sentence_reward * hit + cfg.word_hit_bonus * word_hits
            base_xp = 0 if a.mode is Mode.COOP else cfg.sentence_xp * hit
        currency = cfg.delayed_multiplier * base_c
        xp = cfg.delayed_multiplier * base_xp
        entry.collected = True
        entry.reward_currency = currency
        entry.reward_xp = xp
        entry.sentence_hit = hit
        if hit is not None:
            player.skill_total += 1
            player.skill_hits += int(hit)
        self._grant(player, currency, xp)
        return ResolvedFeedback(
            sentence_id=e.sentence_id, annotation=a, resolved_label=truth_label,
            resolved_biased_tokens=truth_tokens, sentence_hit=hit, word_hits=word_hits,
            reward_currency=currency, reward_xp=xp,
        )

    # ------------------------------------------------------------------
    # queries

    def paper_section(self, player_id: str, unresolved: bool | None = None) -> dict:
        self._player(player_id)
        resolvable = set(self.agg.resolvable_sentences(player_id))
        entries = []
        for entry in self.agg.paper_entries(player_id):
            sid = entry.annotation.sentence_id
            if entry.feedback_kind is FeedbackKind.DIRECT or entry.collected:
                status = "hit" if entry.sentence_hit else ("miss" if entry.sentence_hit is False else "resolved")
            elif sid in resolvable:
                status = "resolvable"
            else:
                status = "pending"
            if unresolved and status not in ("pending", "resolvable"):
                continue
            entries.append({
                "sentence_id": sid,
                "mode": entry.annotation.mode.value,
                "status": status,
                "collected": entry.collected,
                "reward_currency": entry.reward_currency,
                "reward_xp": entry.reward_xp,
            })
        entries.sort(key=lambda x: x["sentence_id"])
        return {"new_feedback": bool(resolvable), "entries": entries}

    def topics_view(self, player_id: str) -> list[dict]:
        player = self._player(player_id)
        day = self._day(self._now())
        out = []
        for tid in sorted(self.content.topics):
            topic = self.content.topics[tid]
            unlocked = self.topic_unlocked(player, tid)
            out.append({
                "id": tid,
                "name": topic.name,
                "unlocked": unlocked,
                "price": topic.price,
                "quota_remaining": self.content.quota_remaining(player_id, tid, day) if unlocked else 0,
            })
        return out

    def export_dataset(self, min_annotations=None, topics=None, min_skill=None, include_baseline=True):
        return self.agg.export_records(
            self.content.sentences,
            min_annotations=min_annotations,
            topics=topics,
            min_skill=min_skill,
            include_baseline=include_baseline,
            skill_of=lambda pid: self.players[pid].skill if pid in self.players else 0.0,
        )

    def reliability_data(self, origin: Origin | None = None) -> ReliabilityData | None:
        """Annotator x sentence vote matrix (tutorial/assessment/word-only excluded)."""
        units: list[str] = []
        raters: list[str] = []
        ratings: dict[tuple[str, str], int] = {}
        unit_seen: set[str] = set()
        rater_seen: set[str] = set()
        for (pid, sid), a in sorted(self.agg.annotations.items()):
            if a.mode is Mode.ASSESSMENT or a.phase is Phase.TUTORIAL or a.sentence_label is None:
                continue
            sentence = self.content.sentences.get(sid)
            if sentence is None or (origin is not None and sentence.origin is not origin):
                continue
            if sid not in unit_seen:
                unit_seen.add(sid)
                units.append(sid)
            if pid not in rater_seen:
                rater_seen.add(pid)
                raters.append(pid)
            ratings[(pid, sid)] = 1 if a.sentence_label is SentenceLabel.BIASED else 0
        if not ratings:
            return None
        return ReliabilityData(units=units, raters=raters, ratings=ratings)

    def economy_totals(self) -> dict:
        return {
            "players": len(self.players),
            "total_currency": sum(p.currency for p in self.players.values()),
            "total_xp": sum(p.xp for p in self.players.values()),
            "min_currency": min((p.currency for p in self.players.values()), default=0),
            "total_skill_hits": sum(p.skill_hits for p in self.players.values()),
            "total_skill_total": sum(p.skill_total for p in self.players.values()),
            "mission_progress": self.mission.progress,
            "mission_goal": self.mission.goal,
        }
