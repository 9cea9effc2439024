"""Pure engine kernels: word scoring, accuracy, level curve, config file."""
import pytest

from biasgame.content.tokenizer import tokenize
from biasgame.engine.economy import EconomyConfig, level_for_xp, load_economy_config
from biasgame.engine.models import SentenceVerdict, TokenVerdict
from biasgame.engine.scoring import combined_accuracy, pending_word_feedback, score_word_submission
from biasgame.engine.tutorial import load_tutorial
from biasgame.errors import ConfigError

TEXT = "Trump recently said in his characteristically bizarre syntax and diction."
TOKENS = tokenize(TEXT)
IDX = {t.surface: t.index for t in TOKENS}


def test_word_verdicts_fig_style():
    # truth: bizarre + characteristically; marks: bizarre + recently
    truth = frozenset({IDX["bizarre"], IDX["characteristically"]})
    marks = frozenset({IDX["bizarre"], IDX["recently"]})
    fb = score_word_submission(marks, truth, TOKENS, sentence_hit=False)
    assert fb.token_verdicts[IDX["bizarre"]] is TokenVerdict.HIT
    assert fb.token_verdicts[IDX["recently"]] is TokenVerdict.WRONG
    assert fb.token_verdicts[IDX["characteristically"]] is TokenVerdict.MISSED
    assert fb.sentence_verdict is SentenceVerdict.MISS
    assert fb.word_hits == 1 and fb.wrong_marks == 1
    # (0 sentence + 1 hit) / (1 + 2 truth + 1 wrong)
    assert fb.combined_accuracy == pytest.approx(0.25)


def test_stopword_between_biased_neighbors_reads_ok():
    text = "The plan will wreck and gut the clinics."
    tokens = tokenize(text)
    idx = {t.surface: t.index for t in tokens}
    truth = frozenset({idx["wreck"], idx["gut"]})
    fb = score_word_submission(frozenset(), truth, tokens, sentence_hit=True)
    assert fb.token_verdicts[idx["and"]] is TokenVerdict.STOPWORD_ADJACENT_OK
    assert fb.token_verdicts[idx["The"]] is TokenVerdict.UNTOUCHED


def test_combined_accuracy_perfect_cases():
    assert combined_accuracy(True, 0, 0, 0) == 1.0
    assert combined_accuracy(True, 3, 3, 0) == 1.0
    fb = score_word_submission(frozenset(), frozenset(), TOKENS, sentence_hit=True)
    assert fb.combined_accuracy == 1.0


def test_pending_feedback_all_marked_pending():
    marks = frozenset({IDX["bizarre"]})
    fb = pending_word_feedback(marks, TOKENS)
    assert fb.sentence_verdict is SentenceVerdict.PENDING
    assert fb.token_verdicts[IDX["bizarre"]] is TokenVerdict.PENDING
    assert fb.combined_accuracy is None


def test_level_curve():
    assert level_for_xp(0) == 1
    assert level_for_xp(99) == 1
    assert level_for_xp(100) == 2
    assert level_for_xp(299) == 2
    assert level_for_xp(300) == 3
    assert level_for_xp(600) == 4
    # largest n with xp >= 100*n*(n-1)/2
    for xp in range(0, 2000, 37):
        n = level_for_xp(xp)
        assert xp >= 100 * n * (n - 1) // 2
        assert xp < 100 * (n + 1) * n // 2


def test_economy_config_file_roundtrip(tmp_path):
    path = tmp_path / "econ.cfg"
    path.write_text("sentence_reward = 12\nround_bonus=45  # comment\n\n# full line comment\n")
    cfg = load_economy_config(path)
    assert cfg.sentence_reward == 12
    assert cfg.round_bonus == 45
    assert cfg.word_hit_bonus == EconomyConfig().word_hit_bonus


def test_economy_config_refuses_unknown_keys(tmp_path):
    path = tmp_path / "econ.cfg"
    path.write_text("not_a_key = 3\n")
    with pytest.raises(ConfigError):
        load_economy_config(path)


def test_economy_config_defaults_file_loads():
    from importlib import resources
    with resources.as_file(
        resources.files("biasgame.engine.data").joinpath("economy_defaults.cfg")
    ) as p:
        cfg = load_economy_config(p)
    assert cfg == EconomyConfig()


def test_tutorial_content_shape():
    content = load_tutorial()
    assert content.final_level == 4
    for lv in content.levels:
        assert len(lv.sentences) == 10
        assert lv.dialogue
        biased = sum(1 for s in lv.sentences if s.label.value == "biased")
        assert 1 <= biased <= 9
        for s in lv.sentences:
            assert s.biased_indices <= {t.index for t in s.tokens}
            for i in s.biased_indices:
                assert not s.tokens[i].is_stopword
