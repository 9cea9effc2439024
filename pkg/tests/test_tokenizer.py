import pytest
from hypothesis import given, strategies as st

from biasgame.content.tokenizer import tokenize
from biasgame.errors import EmptyText


def surfaces(text):
    return [t.surface for t in tokenize(text)]


def test_simple_sentence():
    assert surfaces("We have on beautiful law.") == ["We", "have", "on", "beautiful", "law"]


def test_internal_apostrophe_kept():
    assert surfaces("Trump's speech") == ["Trump's", "speech"]


def test_curly_apostrophe_kept():
    assert surfaces("Trump’s speech") == ["Trump’s", "speech"]


def test_trailing_apostrophe_dropped():
    assert surfaces("the players' union") == ["the", "players", "union"]


def test_whitespace_only_raises():
    with pytest.raises(EmptyText):
        tokenize("   ")
    with pytest.raises(EmptyText):
        tokenize("")


def test_punctuation_runs_discarded():
    assert surfaces("Wait -- what?! (Really.)") == ["Wait", "what", "Really"]


def test_digits_are_tokens():
    assert surfaces("12 people in 2020") == ["12", "people", "in", "2020"]


def test_indices_dense_from_zero():
    tokens = tokenize("One two, three; four!")
    assert [t.index for t in tokens] == [0, 1, 2, 3]


def test_stopword_flag():
    tokens = {t.surface: t.is_stopword for t in tokenize("The bizarre law")}
    assert tokens["The"] is True
    assert tokens["bizarre"] is False


@given(st.text(min_size=1, max_size=200))
def test_deterministic_and_dense(text):
    if not text.strip():
        with pytest.raises(EmptyText):
            tokenize(text)
        return
    first = tokenize(text)
    second = tokenize(text)
    assert first == second
    assert [t.index for t in first] == list(range(len(first)))
    # surfaces appear in order within the original text
    pos = 0
    for t in first:
        found = text.find(t.surface, pos)
        assert found >= 0
        pos = found + len(t.surface)
