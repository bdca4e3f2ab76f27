import pytest
from hypothesis import given, strategies as st

from snowpredict.lexicon import Lexicon, LexiconError


def test_intern_is_idempotent():
    lex = Lexicon()
    assert lex.intern("w:John") == 0
    assert lex.intern("w:John") == 0
    assert len(lex) == 1
    assert lex.count(0) == 2


def test_evaluation_mode_returns_none_for_unseen():
    lex = Lexicon()
    assert lex.intern("w:unseen", allocate=False) is None
    assert len(lex) == 0
    lex.intern("w:seen")
    assert lex.intern("w:seen", allocate=False) == 0
    assert lex.count(0) == 1  # lookups do not bump counts


def test_ids_are_contiguous():
    lex = Lexicon()
    for i in range(100):
        assert lex.intern(f"f{i}") == i


def test_round_trip_id_to_string():
    lex = Lexicon()
    for name in ("a", "b", "c"):
        fid = lex.intern(name)
        assert lex.identity(fid) == name
        assert lex.intern(lex.identity(fid)) == fid


def test_unknown_id_raises():
    with pytest.raises(LexiconError):
        Lexicon().identity(0)


def test_prune_drops_rare_features():
    lex = Lexicon()
    for name in ("a", "b", "a", "c", "a", "b"):
        lex.intern(name)
    pruned = lex.prune(2)
    assert len(pruned) == 2
    assert pruned.intern("a", allocate=False) == 0
    assert pruned.intern("b", allocate=False) == 1
    assert pruned.intern("c", allocate=False) is None


def test_file_round_trip(tmp_path):
    lex = Lexicon()
    for name in ("prox[linear](word)=John", "colloc[linear](word,word)=John-X"):
        lex.intern(name)
    lex.intern("prox[linear](word)=John")
    path = tmp_path / "features.tsv"
    lex.save(str(path))
    again = Lexicon.load(str(path))
    assert list(again.items()) == list(lex.items())


def test_load_rejects_out_of_order_ids(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("1\t1\ta\n")
    with pytest.raises(LexiconError):
        Lexicon.load(str(path))


@given(st.lists(st.text(min_size=1, max_size=8), min_size=1, max_size=40))
def test_bijection_between_names_and_ids(names):
    lex = Lexicon()
    for name in names:
        lex.intern(name)
    assert len(lex) == len(set(names))
    for fid in range(len(lex)):
        assert lex.intern(lex.identity(fid), allocate=False) == fid
