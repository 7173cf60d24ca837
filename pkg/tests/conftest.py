import pathlib

import pytest

from plainterm.ngram_lm import LookupScorer
from plainterm.ontology import PhraseTable
from plainterm.wordfreq import FrequencyTable

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def ranking_table():
    with open(DATA / "ranking_table.tsv") as fh:
        from plainterm.ontology import read_table

        return read_table(fh)


@pytest.fixture
def ranking_lm():
    with open(DATA / "ranking_lm.tsv") as fh:
        return LookupScorer.load(fh)


@pytest.fixture
def ranking_freq():
    from plainterm.wordfreq import load_table

    with open(DATA / "ranking_freq.tsv") as fh:
        return load_table(fh)


@pytest.fixture
def two_stage():
    """Fixture whose best rewrite only becomes reachable after a first pass.

    Group 0 has three alternatives for the same condition; group 1 swaps a
    single adjective. Scores are arranged so pass one picks an intermediate
    wording and pass two improves on it again, then everything is stable.
    """
    table = PhraseTable.from_groups(
        [
            ["hyperlipidemia", "elevated lipids in blood", "excessive fat in blood"],
            ["elevated", "high"],
        ]
    )
    lm = LookupScorer(
        {
            "hyperlipidemia with elevated triglycerides .": -8.0,
            "elevated lipids in blood with elevated triglycerides .": -5.0,
            "excessive fat in blood with elevated triglycerides .": -6.0,
            "hyperlipidemia with high triglycerides .": -7.0,
            "elevated lipids in blood with high triglycerides .": -4.0,
            "excessive fat in blood with high triglycerides .": -2.0,
        }
    )
    freq = FrequencyTable({}, epsilon=1e-10)
    return table, lm, freq


@pytest.fixture
def oscillator():
    """Two alternatives that each score better in the other's sentence.

    Only reachable when the current wording is excluded from ranking; with
    the original kept as a candidate the chooser would stop immediately.
    """
    table = PhraseTable.from_groups([["a", "b"]])
    lm = LookupScorer({"x a .": -1.0, "x b .": -1.0})
    freq = FrequencyTable({}, epsilon=1e-10)
    return table, lm, freq
