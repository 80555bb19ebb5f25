import math

import pytest

import advwb


def test_builtin_functions():
    f = advwb.builtin("f")
    assert f.arity == 4
    assert "".join(map(str, f.table)) == "0001110110111000"
    assert f("0011") == 1
    assert f(0) == 0
    assert advwb.parse_truth_table(str(f)) == f
    assert advwb.iterate(f, 2).arity == 16


def test_measures():
    r = advwb.measure_all(advwb.builtin("f"))
    assert (r["deg"], r["approx_deg"], r["s"], r["bs"], r["d_depth"]) == (2, 2, 2, 3, 3)
    skipped = advwb.measure_all(advwb.builtin("parity(13)"), skip=["approx_deg", "bs", "C", "D"])
    assert skipped["deg"] == 13
    assert skipped["d_depth"] is None
    with pytest.raises(advwb.CapacityError):
        advwb.measure_all(advwb.builtin("parity(13)"))
    assert advwb.approx_degree(advwb.builtin("or(5)"), "1/3")["degree"] == 2


def test_schemes():
    s = advwb.builtin_scheme("lemma3_f")
    assert advwb.verify(s)["valid"]
    lr = advwb.loads(s)
    assert lr["bound"].exact == "5/2"
    assert advwb.parse_scheme_json(s.to_json()).pairs == s.pairs
    h = advwb.loads(advwb.builtin_scheme("lemma7_h"))
    assert h["v_max"].value == pytest.approx(2 / math.sqrt(39))


def test_composition():
    g = advwb.builtin_scheme("lemma6_g")
    c = advwb.check_composition(g, g)
    assert c["slice_weights"] and c["weight_products"] and c["load_bound"]
    assert c["bound"].exact == "9/2"
    assert advwb.predicted_bound(advwb.loads(g)["bound"], 2).exact == "9/2"


def test_matchings():
    r = advwb.matchings(1, 1)
    assert r["bijective"] and r["disjoint"] and r["valid_pairs"]
    p = r["params"]
    assert (p["m"], p["m2"], p["l"], p["l2"]) == (3, 3, 1, 2)
    assert len(advwb.matching(1, 2, 3)) == 8


def test_simulator():
    alg = advwb.parity2_algorithm()
    assert [round(advwb.acceptance(alg, x), 9) for x in range(4)] == [0, 1, 1, 0]
    s = advwb.builtin_scheme("lemma3_f")
    t = advwb.progress_trace(advwb.random_algorithm(4, 2, 3, 7), s)
    assert len(t["w"]) == 4
    assert t["drop_bound_holds"]
    assert advwb.query_lower_bound(0.0, 0.5) == pytest.approx(1.0)
