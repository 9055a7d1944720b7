import pytest

from minklab.errors import UnknownStatementId
from minklab.statements import STATEMENT_IDS, verify_statement

from conftest import model


@pytest.mark.parametrize("stmt", STATEMENT_IDS)
@pytest.mark.parametrize("q", [4, 5])
def test_small_models(q, stmt):
    rep = verify_statement(model("pgl2", q), stmt, workers=4)
    assert rep.verdict in ("PASS", "SKIPPED"), rep.render_text()


@pytest.mark.parametrize("stmt", ["P2.1", "T2.2", "P3.4", "C3.2"])
def test_q7(stmt, p7):
    assert verify_statement(p7, stmt, workers=4).passed


@pytest.mark.parametrize("stmt", ["T3.1", "P3.5", "P3.6"])
def test_char_two_branches(stmt):
    assert verify_statement(model("pgl2", 8), stmt, workers=4).passed


@pytest.mark.parametrize("stmt", ["P3.5", "P3.6"])
def test_char_two_only_statements_skip_in_odd_char(stmt, p5):
    rep = verify_statement(p5, stmt)
    assert rep.skipped and rep.reason == "hypothesis-not-met"


def test_bundle_reduction_fails_on_nearfield(nf9):
    rep = verify_statement(nf9, "T2.2", workers=4)
    assert rep.failed
    assert {"p", "q", "I", "J", "K"} <= set(rep.witness)


def test_symmetries_are_automorphisms_on_nearfield(nf9):
    # every S_K lies in the group generated by the set, so the statement holds without (S)
    assert verify_statement(nf9, "T2.1", workers=4).passed


def test_unknown_id(p5):
    with pytest.raises(UnknownStatementId):
        verify_statement(p5, "X9.9")


def test_seed_determinism(p5):
    a = verify_statement(p5, "C2.3", seed=3, workers=1)
    b = verify_statement(p5, "C2.3", seed=3, workers=8)
    assert a.as_dict() == b.as_dict()
