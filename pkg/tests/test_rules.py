from hypothesis import given, strategies as st

from biasgame.aggregation.rules import compute_sentence_label, compute_word_label
from biasgame.content.models import SentenceLabel


def test_majority_at_threshold():
    assert compute_sentence_label(3, 2) is SentenceLabel.BIASED
    assert compute_sentence_label(2, 3) is SentenceLabel.NOT_BIASED


def test_below_five_pending():
    assert compute_sentence_label(2, 2) is None
    assert compute_sentence_label(4, 0) is None
    assert compute_sentence_label(0, 0) is None


def test_draw_pending():
    assert compute_sentence_label(3, 3) is None
    assert compute_sentence_label(6, 6) is None


def test_word_two_player_rule():
    assert compute_word_label(2, 5) is True
    assert compute_word_label(1, 5) is False


def test_word_ratio_rule():
    assert compute_word_label(2, 12) is False  # 16.7% < 25%
    assert compute_word_label(3, 12) is True


def test_word_rules_agree_at_eight():
    # derived boundary: both branches return the same at n = 8
    for m in range(0, 9):
        small = m >= 2
        ratio = m / 8 >= 0.25
        assert small == ratio
        assert compute_word_label(m, 8) is small


def test_word_exhaustive_piecewise():
    for n in range(1, 17):
        for m in range(0, n + 1):
            expected = (m >= 2) if n < 8 else (m / n >= 0.25)
            assert compute_word_label(m, n) is expected, (m, n)


@given(st.integers(0, 40), st.integers(0, 40))
def test_sentence_label_total_and_strict(b, nb):
    label = compute_sentence_label(b, nb)
    if b + nb < 5 or b == nb:
        assert label is None
    elif b > nb:
        assert label is SentenceLabel.BIASED
    else:
        assert label is SentenceLabel.NOT_BIASED


@given(st.integers(1, 30))
def test_word_label_monotone_in_marks(n):
    results = [compute_word_label(m, n) for m in range(0, n + 1)]
    # once biased, stays biased as marks grow
    assert results == sorted(results)
