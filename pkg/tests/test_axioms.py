import itertools

import numpy as np
import pytest

from minklab.axioms import (
    check_axiom,
    check_hyperbola,
    check_rectangle,
    check_symmetry,
    check_touching,
    replay_witness,
)
from minklab.plane import Plane

from conftest import model, row_shift_mutation, swap_mutation


@pytest.mark.parametrize("q", [3, 4, 5, 7])
def test_miquelian_planes_pass_h_t_s(q):
    P = model("pgl2", q)
    for rep in (check_hyperbola(P), check_touching(P, workers=4), check_symmetry(P, workers=4)):
        assert rep.passed, rep.render_text()
        assert rep.coverage == "exhaustive"


def test_symmetry_on_q9(pgl):
    assert check_symmetry(pgl(9), workers=4).passed


def test_nearfield_separates_s_from_g(nf9):
    assert check_hyperbola(nf9).passed
    assert check_touching(nf9, workers=4).passed
    s = check_symmetry(nf9, workers=4)
    assert s.failed
    w = s.witness
    assert {"K", "L", "p", "S_K(p)"} <= set(w)
    assert replay_witness(nf9, w)
    assert check_rectangle(nf9, mode="closure", workers=4).passed


def test_s3_is_the_smallest_plane():
    P = Plane.from_perms(list(itertools.permutations(range(3))))
    assert check_hyperbola(P).passed
    assert check_touching(P).passed


def test_single_circle_on_3x3_fails_h4():
    rep = check_hyperbola(Plane(3, [[0, 4, 8]]))
    assert rep.failed and rep.witness["axiom"] == "H4"


def test_row_shift_breaks_h3(p5):
    bad = Plane.loads(row_shift_mutation(p5.dumps(), K=0))
    rep = check_hyperbola(bad)
    assert rep.failed and rep.witness["axiom"] == "H3"
    assert replay_witness(bad, rep.witness)
    # the sub-reports after the first failing axiom are not run
    verdicts = [r.verdict for r in rep.sub]
    assert verdicts[verdicts.index("FAIL") + 1:] == ["SKIPPED"] * (len(verdicts) - verdicts.index("FAIL") - 1)


def test_swap_mutations_detected(p5):
    rng = np.random.default_rng(7)
    text = p5.dumps()
    for _ in range(10):
        bad = Plane.loads(swap_mutation(text, rng))
        rep = check_hyperbola(bad)
        if rep.passed:
            rep = check_symmetry(bad)
        assert rep.failed
        assert replay_witness(bad, rep.witness)


def test_deleted_circle_fails_at_h_level(p5):
    perms = np.delete(p5.perms, 5, axis=0)
    bad = Plane.from_perms(perms)
    assert check_hyperbola(bad).failed
    t = check_touching(bad)
    assert t.failed and t.witness["axiom"] == "H4"


def test_touching_cross_checks_derived_planes(p5):
    rep = check_touching(p5, cross_check=5, seed=3)
    assert any(s.statement == "T/derived" and s.passed for s in rep.sub)


@pytest.mark.parametrize("q", [5, 7])
def test_rectangle_closure(q):
    rep = check_rectangle(model("pgl2", q), mode="closure", workers=4)
    assert rep.passed and rep.checked == model("pgl2", q).n_circles ** 2


def test_rectangle_direct_sampled(p5):
    rep = check_rectangle(p5, mode="direct", budget=5000, seed=11)
    assert rep.passed and rep.coverage == "sampled" and rep.seed == 11
    assert check_rectangle(p5, mode="direct", budget=5000, seed=11).checked == rep.checked


def test_check_axiom_dispatch(p4):
    assert [check_axiom(p4, a).verdict for a in "HTSG"] == ["PASS"] * 4
    with pytest.raises(ValueError):
        check_axiom(p4, "X")


def test_replay_rejects_fabricated_witness(p5):
    assert not replay_witness(p5, {"axiom": "S", "K": 0, "L": 1, "p": int(p5.circles[1][0])})
    assert not replay_witness(p5, {"axiom": "H4", "points": [int(x) for x in p5.circles[0][:3]]})
