import re

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.exceptions import NotFittedError

from toxdetect.errors import ConfigError
from toxdetect.text import (
    OOV_INDEX,
    PAD_INDEX,
    TextEncoder,
    build_vocabulary,
    encode,
    normalize,
    pad,
    tokenize,
)


class TestNormalize:
    def test_leet_digits(self):
        assert normalize("g00d") == "good"
        assert normalize("h4te u 2") == "hate u 2"
        assert normalize("l337") == "leet"

    def test_empty(self):
        assert normalize("") == ""

    def test_kitchen_sink(self):
        assert normalize("Hello,   WORLD!! @user123 see http://x.y") == "hello world see"

    def test_urls_and_mentions_removed(self):
        assert normalize("go to https://a.b/c?d=1 now") == "go to now"
        assert normalize("www.example.com said so") == "said so"
        assert normalize("hey @Someone_Else hey") == "hey hey"

    def test_pure_numbers_untouched(self):
        # the digit map only fires inside tokens that contain a letter
        assert normalize("in 2015 we saw 10 cases") == "in 2015 we saw 10 cases"

    def test_apostrophe_kept(self):
        assert normalize("Don't DO that") == "don't do that"

    def test_punctuation_to_space(self):
        assert normalize("a-b_c.d") == "a b c d"

    @given(st.text(max_size=200))
    @settings(max_examples=300, deadline=None)
    def test_idempotent(self, s):
        once = normalize(s)
        assert normalize(once) == once

    @given(st.text(max_size=200))
    @settings(max_examples=300, deadline=None)
    def test_token_charset(self, s):
        for tok in tokenize(normalize(s)):
            assert re.fullmatch(r"[a-z0-9']+", tok), tok


class TestTokenize:
    def test_basic(self):
        assert tokenize("have a nice day") == ["have", "a", "nice", "day"]

    def test_empty(self):
        assert tokenize("") == []

    def test_extra_spaces(self):
        assert tokenize(" a  b ") == ["a", "b"]


class TestVocabulary:
    def test_rank_and_ties(self):
        # a and b tie at 2, a occurs first
        vocab = build_vocabulary([["a", "b", "a"], ["b", "c"]], max_size=4)
        assert vocab.lookup("a") == 2
        assert vocab.lookup("b") == 3
        assert "c" not in vocab
        assert len(vocab) == 4

    def test_reserved_slots(self):
        vocab = build_vocabulary([], max_size=100)
        assert vocab.tokens == ("<pad>", "<oov>")
        assert vocab.lookup("<pad>") == PAD_INDEX
        assert vocab.lookup("<oov>") == OOV_INDEX

    def test_min_count(self):
        vocab = build_vocabulary([["a", "b", "a"], ["b", "c"]], max_size=100, min_count=2)
        assert set(vocab.tokens) == {"<pad>", "<oov>", "a", "b"}

    def test_max_size_too_small(self):
        with pytest.raises(ConfigError):
            build_vocabulary([["a"]], max_size=1)

    @given(
        st.lists(st.lists(st.sampled_from("abcdefg"), max_size=8), max_size=20),
        st.integers(min_value=2, max_value=6),
    )
    @settings(max_examples=100, deadline=None)
    def test_size_bound(self, corpus, max_size):
        vocab = build_vocabulary(corpus, max_size=max_size)
        assert 2 <= len(vocab) <= max_size
        assert vocab.tokens[0] == "<pad>" and vocab.tokens[1] == "<oov>"


class TestEncodePad:
    def setup_method(self):
        self.vocab = build_vocabulary([["a", "b", "a"], ["b", "c"]], max_size=4)

    def test_encode(self):
        assert encode(["a", "b"], self.vocab) == [2, 3]
        assert encode(["zzz"], self.vocab) == [OOV_INDEX]
        assert encode([], self.vocab) == []

    def test_pad_short(self):
        assert pad([2, 3], 4) == [0, 0, 2, 3]

    def test_pad_truncates_head(self):
        assert pad([2, 3, 4, 5, 6], 3) == [4, 5, 6]

    def test_pad_exact(self):
        assert pad([2, 3, 4], 3) == [2, 3, 4]

    @given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=120))
    @settings(max_examples=200, deadline=None)
    def test_pad_length(self, maxlen, n):
        assert len(pad(list(range(n)), maxlen)) == maxlen


class TestTextEncoder:
    def test_fit_transform(self):
        enc = TextEncoder(maxlen=5, vocab_size=50)
        X = enc.fit(["a b a", "b c"]).transform(["a b", "q"])
        assert X.shape == (2, 5)
        assert X.dtype == np.int32
        assert X[0].tolist() == [0, 0, 0, 2, 3]
        assert X[1].tolist() == [0, 0, 0, 0, 1]

    def test_raw_text_is_normalized(self):
        enc = TextEncoder(maxlen=3, vocab_size=50).fit(["good day"])
        a = enc.transform(["G00D day!!"])
        b = enc.transform(["good day"])
        assert (a == b).all()

    def test_unfitted(self):
        with pytest.raises(NotFittedError):
            TextEncoder().transform(["x"])

    def test_bad_maxlen(self):
        with pytest.raises(ConfigError):
            TextEncoder(maxlen=0).fit(["x"])

    def test_empty_batch(self):
        enc = TextEncoder(maxlen=4).fit(["a b"])
        assert enc.transform([]).shape == (0, 4)
