"""Annotation intake, label state maintenance, and dataset export.

Labels are recomputed on every contributing annotation. Tutorial-phase and
assessment-mode annotations are stored for provenance but never touch the
counts. The raw annotation set is the source of truth: incremental state can
always be recomputed from it, which is what the min_skill export filter does.
"""
from __future__ import annotations

from typing import Callable, Iterable, Iterator

from ..content.models import Origin, Sentence, SentenceLabel
from ..errors import DuplicateAnnotation, StopwordMarked, TutorialIncomplete, ValidationFailed
from .models import Annotation, DatasetRecord, FeedbackKind, LabelState, Mode, PaperEntry, Phase, Status
from .rules import compute_sentence_label, compute_word_label


def contributes(a: Annotation) -> bool:
    """Whether an annotation participates in label formation."""
    return a.phase is not Phase.TUTORIAL and a.mode is not Mode.ASSESSMENT


class AggregationStore:
    def __init__(self):
        self.label_states: dict[str, LabelState] = {}
        self.annotations: dict[tuple[str, str], Annotation] = {}
        self.paper: dict[str, dict[str, PaperEntry]] = {}
        self._word_only_counts: dict[str, int] = {}

    # -- lookups ----------------------------------------------------------

    def state(self, sentence_id: str) -> LabelState:
        if sentence_id not in self.label_states:
            self.label_states[sentence_id] = LabelState(sentence_id=sentence_id)
        return self.label_states[sentence_id]

    def annotation_count(self, sentence_id: str) -> int:
        """Contributing annotations on a sentence (votes plus word-only marks)."""
        st = self.label_states.get(sentence_id)
        votes = st.annotator_count if st is not None else 0
        return votes + self._word_only_counts.get(sentence_id, 0)

    def has_annotated(self, player_id: str, sentence_id: str) -> bool:
        return (player_id, sentence_id) in self.annotations

    def effective_truth(self, sentence: Sentence) -> tuple[SentenceLabel, frozenset[int]] | None:
        """The operative ground truth used for feedback, if any.

        Baseline label for baseline sentences; the resolved label once
        established; the retained label through a tie reversion.
        """
        if sentence.origin is Origin.BASELINE:
            return sentence.baseline_label, sentence.baseline_biased_words
        st = self.label_states.get(sentence.id)
        if st is None:
            return None
        if st.status is Status.ESTABLISHED:
            return st.resolved_label, st.resolved_biased_tokens
        if st.tie_flagged and st.last_resolved_label is not None:
            return st.last_resolved_label, st.last_resolved_tokens
        return None

    # -- recording --------------------------------------------------------

    def validate_marks(self, sentence: Sentence, marks: frozenset[int]) -> None:
        invalid = marks - sentence.valid_indices
        if invalid:
            raise ValidationFailed("marked_tokens", f"invalid token indices: {sorted(invalid)}")
        stop = marks & sentence.stopword_indices
        if stop:
            raise StopwordMarked(f"stopword indices not annotatable: {sorted(stop)}")

    def record(
        self,
        annotation: Annotation,
        sentence: Sentence,
        tutorial_complete: bool,
    ) -> tuple[LabelState, FeedbackKind, bool]:
        """Store an annotation and fold it into the sentence's label state.

        Returns (state, feedback kind, became_established). The feedback kind
        is direct exactly when a ground truth existed before this annotation.
        """
        if not tutorial_complete:
            raise TutorialIncomplete("annotations are collected only after the tutorial")
        key = (annotation.player_id, annotation.sentence_id)
        if key in self.annotations:
            raise DuplicateAnnotation(f"{annotation.player_id} already annotated {annotation.sentence_id}")
        self.validate_marks(sentence, annotation.marked_tokens)

        kind = FeedbackKind.DIRECT if self.effective_truth(sentence) is not None else FeedbackKind.DELAYED
        self.annotations[key] = annotation

        st = self.state(sentence.id)
        became_established = False
        if contributes(annotation):
            if annotation.sentence_label is None:
                self._word_only_counts[sentence.id] = self._word_only_counts.get(sentence.id, 0) + 1
            if annotation.sentence_label is SentenceLabel.BIASED:
                st.biased_votes += 1
            elif annotation.sentence_label is SentenceLabel.NOT_BIASED:
                st.not_biased_votes += 1
            for idx in annotation.marked_tokens:
                st.word_marks[idx] = st.word_marks.get(idx, 0) + 1
            was_established = st.status is Status.ESTABLISHED
            self._recompute(st, sentence)
            became_established = st.status is Status.ESTABLISHED and not was_established
        return st, kind, became_established

    def _recompute(self, st: LabelState, sentence: Sentence) -> None:
        st.annotator_count = st.biased_votes + st.not_biased_votes
        if sentence.origin is Origin.BASELINE:
            st.status = Status.ESTABLISHED
            st.resolved_label = sentence.baseline_label
            st.resolved_biased_tokens = sentence.baseline_biased_words
            st.last_resolved_label = sentence.baseline_label
            st.last_resolved_tokens = sentence.baseline_biased_words
            st.ever_established = True
        else:
            label = compute_sentence_label(st.biased_votes, st.not_biased_votes)
            if label is not None:
                st.status = Status.ESTABLISHED
                st.resolved_label = label
                st.resolved_biased_tokens = frozenset(
                    idx for idx, marks in st.word_marks.items()
                    if compute_word_label(marks, st.annotator_count)
                )
                st.last_resolved_label = label
                st.last_resolved_tokens = st.resolved_biased_tokens
                st.tie_flagged = False
                st.ever_established = True
            else:
                # below threshold, or a tie created by further votes: revert to
                # pending but keep the retained label for feedback
                if st.status is Status.ESTABLISHED:
                    st.tie_flagged = True
                st.status = Status.PENDING
                st.resolved_label = None
                st.resolved_biased_tokens = frozenset()
        st.version += 1

    # -- paper section / delayed feedback ---------------------------------

    def add_paper_entry(self, entry: PaperEntry) -> None:
        self.paper.setdefault(entry.annotation.player_id, {})[entry.annotation.sentence_id] = entry

    def paper_entries(self, player_id: str) -> list[PaperEntry]:
        return list(self.paper.get(player_id, {}).values())

    def resolvable_sentences(self, player_id: str) -> list[str]:
        """Queued delayed entries whose sentence is established now."""
        out = []
        for sid, entry in self.paper.get(player_id, {}).items():
            if entry.feedback_kind is FeedbackKind.DELAYED and not entry.collected:
                st = self.label_states.get(sid)
                if st is not None and st.status is Status.ESTABLISHED:
                    out.append(sid)
        return out

    def has_new_feedback(self, player_id: str) -> bool:
        return bool(self.resolvable_sentences(player_id))

    # -- recomputation and export ------------------------------------------

    def recompute_counts(
        self,
        sentence_id: str,
        keep: Callable[[str], bool] | None = None,
    ) -> tuple[int, int, dict[int, int]]:
        """Brute-force counts from raw annotations, optionally filtered by player."""
        biased = not_biased = 0
        marks: dict[int, int] = {}
        for (player_id, sid), a in self.annotations.items():
            if sid != sentence_id or not contributes(a):
                continue
            if keep is not None and not keep(player_id):
                continue
            if a.sentence_label is SentenceLabel.BIASED:
                biased += 1
            elif a.sentence_label is SentenceLabel.NOT_BIASED:
                not_biased += 1
            for idx in a.marked_tokens:
                marks[idx] = marks.get(idx, 0) + 1
        return biased, not_biased, marks

    def export_records(
        self,
        sentences: dict[str, Sentence],
        min_annotations: int | None = None,
        topics: Iterable[str] | None = None,
        min_skill: float | None = None,
        include_baseline: bool = True,
        skill_of: Callable[[str], float] | None = None,
    ) -> Iterator[DatasetRecord]:
        """Stream dataset records for established sentences, ordered by id.

        With min_skill set, votes from players below the threshold are dropped
        and labels recomputed from the raw annotations before export.
        """
        topic_set = set(topics) if topics is not None else None
        keep = None
        if min_skill is not None:
            if skill_of is None:
                raise ValueError("min_skill filtering requires a skill_of callable")
            keep = lambda pid: skill_of(pid) >= min_skill  # noqa: E731

        for sid in sorted(sentences):
            sentence = sentences[sid]
            if not include_baseline and sentence.origin is Origin.BASELINE:
                continue
            if topic_set is not None and sentence.topic not in topic_set:
                continue

            if keep is None:
                st = self.label_states.get(sid)
                if st is None:
                    if sentence.origin is not Origin.BASELINE:
                        continue
                    b = nb = 0
                    marks = {}
                else:
                    if st.status is not Status.ESTABLISHED and sentence.origin is not Origin.BASELINE:
                        continue
                    b, nb, marks = st.biased_votes, st.not_biased_votes, dict(st.word_marks)
            else:
                b, nb, marks = self.recompute_counts(sid, keep)

            n = b + nb
            if min_annotations is not None and n < min_annotations:
                continue

            majority = compute_sentence_label(b, nb)
            if majority is not None:
                label = majority
                support = max(b, nb) / n
            elif sentence.origin is Origin.BASELINE:
                label = sentence.baseline_label
                agreeing = b if label is SentenceLabel.BIASED else nb
                support = agreeing / n if n else 0.0
            else:
                continue

            biased_words = tuple(
                (idx, sentence.tokens[idx].surface)
                for idx in sorted(marks)
                if compute_word_label(marks[idx], n)
            )
            yield DatasetRecord(
                text=sentence.text,
                label=label,
                biased_words=biased_words,
                topic=sentence.topic,
                article_url=sentence.article_url,
                outlet=sentence.outlet,
                outlet_leaning=sentence.outlet_leaning.value,
                annotator_count=n,
                label_support=support,
                origin=sentence.origin.value,
            )
