"""Expert-comparison arithmetic, including the published confusion matrix."""
import pytest

from biasgame.content.models import SentenceLabel
from biasgame.errors import KeyMismatch
from biasgame.metrics.comparison import (
    ConfusionMatrix,
    agreement_breakdown,
    classification_metrics,
    confusion_from_labels,
)

B, N = SentenceLabel.BIASED, SentenceLabel.NOT_BIASED


def test_published_confusion_matrix():
    m = classification_metrics(ConfusionMatrix(tp=213, fn=95, fp=10, tn=202))
    assert m.accuracy == pytest.approx(0.798, abs=0.0005)
    assert m.precision == pytest.approx(0.955, abs=0.0005)
    assert m.recall == pytest.approx(0.692, abs=0.0005)


def test_undefined_metrics_are_none_not_zero():
    m = classification_metrics(ConfusionMatrix(tp=0, fn=0, fp=0, tn=10))
    assert m.accuracy == 1.0
    assert m.precision is None
    assert m.recall is None


def test_symmetric_all_ones():
    m = classification_metrics(ConfusionMatrix(1, 1, 1, 1))
    assert (m.accuracy, m.precision, m.recall) == (0.5, 0.5, 0.5)


def test_empty_matrix_rejected():
    with pytest.raises(ValueError):
        ConfusionMatrix(0, 0, 0, 0)


def test_confusion_from_labels():
    expert = {"a": B, "b": B, "c": N, "d": N}
    player = {"a": B, "b": N, "c": B, "d": N}
    m = confusion_from_labels(expert, player)
    assert (m.tp, m.fn, m.fp, m.tn) == (1, 1, 1, 1)
    with pytest.raises(KeyMismatch):
        confusion_from_labels(expert, {"a": B})


def make_maps(total, matches, a_biased_b_not, a_not_b_biased):
    """Deterministic label-map pair with the exact agreement structure."""
    assert matches + a_biased_b_not + a_not_b_biased == total
    a, b = {}, {}
    k = 0
    for _ in range(matches):
        a[f"s{k}"] = B
        b[f"s{k}"] = B
        k += 1
    for _ in range(a_biased_b_not):
        a[f"s{k}"] = B
        b[f"s{k}"] = N
        k += 1
    for _ in range(a_not_b_biased):
        a[f"s{k}"] = N
        b[f"s{k}"] = B
        k += 1
    return a, b


def test_reannotation_agreement_figures():
    # 370 sentences, 289 matches, 74 of 81 diffs expert-biased/player-not
    expert, player = make_maps(370, 289, 74, 7)
    r = agreement_breakdown(expert, player)
    assert r.match_count == 289 and r.diff_count == 81
    assert round(r.rate * 100, 2) == 78.11
    assert r.a_biased_b_not.count == 74
    assert round(r.a_biased_b_not.fraction_of_diffs * 100, 2) == 91.36
    assert round(r.a_not_b_biased.fraction_of_diffs * 100, 2) == 8.64


def test_new_sentence_agreement_figures():
    # 150 sentences, 126 matches, 21 of 24 diffs expert-biased/player-not
    expert, player = make_maps(150, 126, 21, 3)
    r = agreement_breakdown(expert, player)
    assert round(r.rate * 100, 1) == 84.0
    assert round(r.a_biased_b_not.fraction_of_diffs * 100, 1) == 87.5
    assert round(r.a_not_b_biased.fraction_of_diffs * 100, 1) == 12.5


def test_identical_maps():
    expert, player = make_maps(10, 10, 0, 0)
    r = agreement_breakdown(expert, player)
    assert r.rate == 1.0 and r.diff_count == 0
    assert r.a_biased_b_not.fraction_of_diffs == 0.0


def test_key_mismatch():
    with pytest.raises(KeyMismatch):
        agreement_breakdown({"a": B}, {"b": B})
