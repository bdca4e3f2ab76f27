import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from snowpredict.baselines import EOS, NgramTable, mle_predict, trigram_score


class TestMle:
    def test_majority(self):
        assert mle_predict(("a", "b"), {"a": 10, "b": 90}) == "b"

    def test_tie_is_lexicographic(self):
        assert mle_predict(("sell", "make"), {"make": 50, "sell": 50}) == "make"

    def test_singleton(self):
        assert mle_predict(("only",), {}) == "only"

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            mle_predict((), {})


# Hand-worked backoff arithmetic on a 12-token corpus (discount 0.5):
#
#   s1 = a b a c a b        s2 = b a c a b a
#
# unigrams (forms + EOS): a=6 b=4 c=2 EOS=2, N=14, V=4
#   p1(a) = (6+1)/18 = 7/18          p1(d) = 1/18   (unseen floor)
# bigrams: (a,b)=3 (b,a)=3 (a,c)=2 (c,a)=2 (BOS,a)=1 (BOS,b)=1 (b,EOS)=1 (a,EOS)=1
#   after a: total 6, kinds 3;  after c: total 2, kinds 1;  after b: total 4, kinds 2
#   p2(b|a) = (3-.5)/6 + (.5*3/6)(5/18)  = 5/12 + 5/72  = 35/72
#   p2(a|c) = (2-.5)/2 + (.5*1/2)(7/18)  = 3/4  + 7/72  = 61/72
#   p2(d|a) = 0        + (.5*3/6)(1/18)  =         1/72
#   p2(a|b) = (3-.5)/4 + (.5*2/4)(7/18)  = 5/8  + 7/72  = 13/18
# trigrams after (a,b): (a,b,a)=2 (a,b,EOS)=1, total 3, kinds 2
#   p3(a|a,b) = (2-.5)/3 + (.5*2/3)(13/18) = 1/2 + 13/54 = 20/27
TINY = [list("abacab"), list("bacaba")]


class TestBackoffOracle:
    def table(self):
        return NgramTable.build(TINY, discount=0.5)

    @pytest.mark.parametrize(
        "word,context,expected",
        [
            ("a", ("a", "b"), Fraction(20, 27)),
            ("b", ("x", "a"), Fraction(35, 72)),  # unseen trigram context -> bigram
            ("a", ("x", "c"), Fraction(61, 72)),
            ("d", ("x", "a"), Fraction(1, 72)),  # unseen word backs off to floor
        ],
    )
    def test_hand_computed_values(self, word, context, expected):
        assert self.table().prob(word, context) == pytest.approx(float(expected), abs=1e-12)

    def test_unigram_floor(self):
        table = self.table()
        assert table.unigram_prob("a") == pytest.approx(7 / 18)
        assert table.unigram_prob("zzz") == pytest.approx(1 / 18)

    def test_unseen_everything_backs_off_to_unigram(self):
        table = self.table()
        assert table.prob("a", ("q", "q")) == pytest.approx(7 / 18)

    def test_score_is_log_probability(self):
        table = self.table()
        assert trigram_score("a", ("a", "b"), table) == pytest.approx(math.log(20 / 27))

    def test_all_mass_on_one_continuation_dominates(self):
        table = NgramTable.build([list("xyxyxy")], discount=0.5)
        assert table.prob("y", ("y", "x")) > table.prob("x", ("y", "x"))


corpora = st.lists(
    st.lists(st.sampled_from("abcde"), min_size=1, max_size=8), min_size=1, max_size=6
)


@given(corpora, st.sampled_from(["a", "b", "c", "q"]), st.sampled_from(["a", "d", "q"]))
def test_distribution_sums_to_one(sents, prev2, prev1):
    table = NgramTable.build(sents, discount=0.5)
    total = sum(table.prob(word, (prev2, prev1)) for word in table.vocabulary)
    assert abs(total - 1.0) <= 1e-6


def test_candidate_ranking_is_local():
    """Adding sentences that touch neither candidate's contexts leaves the
    candidates' relative order unchanged."""
    base = [list("abacab"), list("bacaba")]
    table = NgramTable.build(base, discount=0.5)
    before = table.prob("a", ("a", "b")) > table.prob("c", ("a", "b"))
    grown = NgramTable.build(base + [list("xyzxyz")], discount=0.5)
    after = grown.prob("a", ("a", "b")) > grown.prob("c", ("a", "b"))
    assert before == after


def test_file_round_trip(tmp_path):
    table = NgramTable.build(TINY, discount=0.5)
    path = tmp_path / "ngrams.tsv"
    table.save(str(path))
    again = NgramTable.load(str(path))
    assert again.prob("a", ("a", "b")) == table.prob("a", ("a", "b"))
    assert again.unigrams == table.unigrams
    assert again.trigrams == table.trigrams


def test_empty_corpus_rejected():
    with pytest.raises(ValueError):
        NgramTable.build([])


def test_eos_is_counted():
    table = NgramTable.build(TINY, discount=0.5)
    assert table.unigrams[EOS] == 2
