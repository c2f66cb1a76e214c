"""Acceptance suite: one test per criterion, each prints a 'criterion N: PASS/FAIL' line."""

import time
from collections import Counter

import pytest

from qpkit.grass import f_poly_of, monomialize, tree_module
from qpkit.harness import (TABLE_A2, a2_table_rows, fixed_words, fixture_qps, reproduce_a2, verify_theorems)
from qpkit.polycore import parse_polynomial
from qpkit.repeng import direct_sum

RESULTS = {}

# pinned budgets
TABLE_SECONDS = 1.0
CAMPAIGN_SECONDS = 600.0
MIN_INSTANCES = 200
MIN_PAIRS = 100
MIN_ISO_FRACTION = 0.95
MIN_HOMOLOGY_PAIRS = 30

CAMPAIGN = {"seed": 2026, "instances": 240, "pairs": 120, "involution_samples": 40, "iso_trials": 20,
            "n_values": [2, 3, 4], "max_word_len": 6, "truncation": 12}

A3 = [[0, 1, 0], [-1, 0, 1], [0, -1, 0]]
A2 = [[0, 1], [-1, 0]]


def verdict(n, ok, detail=""):
    RESULTS[n] = ok
    print("criterion %d: %s %s" % (n, "PASS" if ok else "FAIL", detail))
    assert ok, detail


@pytest.fixture(scope="module")
def campaign():
    t = time.perf_counter()
    rep = verify_theorems(CAMPAIGN)
    return rep, time.perf_counter() - t


def records(rep, *names):
    return [r for r in rep.records if r.name in names]


def all_pass(recs):
    return bool(recs) and all(r.status == "pass" for r in recs)


def test_criterion_1_table():
    t = time.perf_counter()
    rows = a2_table_rows()
    dt = time.perf_counter() - t
    ok = [r[1:] for r in rows] == TABLE_A2 and len(rows) == 6 and dt < TABLE_SECONDS
    verdict(1, ok, "rows=%d time=%.3fs" % (len(rows), dt))


def test_criterion_2_periodicity():
    # read literally, with u1 and u2 swapped on the right; expected to fail for m = 1..4
    rep = reproduce_a2()
    lit = records(rep, "periodicity")
    bad = [r.instance for r in lit if r.status != "pass"]
    plain = all_pass(records(rep, "periodicity_unswapped"))
    verdict(2, len(lit) == 6 and not bad, "literal failures=%s unswapped_holds=%s" % (bad, plain))


def test_criterion_3_tree_modules():
    _, q3 = fixture_qps()
    Ms = [tree_module(q3, T) for T in ([1, 2], [2, 0], [0, 1])]
    expect = ["1+u3+u2*u3", "1+u1+u1*u3", "1+u2+u1*u2"]
    singles = all(f_poly_of(M) == parse_polynomial(e, 3) for M, e in zip(Ms, expect))
    F = f_poly_of(monomialize(direct_sum([M.rep for M in Ms])))
    prod = f_poly_of(Ms[0]) * f_poly_of(Ms[1]) * f_poly_of(Ms[2])
    c = F.coeff((1, 1, 1))
    verdict(3, singles and F == prod and c == 4, "coeff(u1u2u3)=%d" % c)


def test_criterion_4_g_vectors():
    t = time.perf_counter()
    rep = verify_theorems(dict(CAMPAIGN, checks=["recurrence", "g"]))
    dt = time.perf_counter() - t
    used = [r for r in rep.records if r.name == "instance" and r.status == "pass"]
    g = records(rep, "rep_g")
    ok = len(used) >= MIN_INSTANCES and all_pass(g) and dt < CAMPAIGN_SECONDS
    verdict(4, ok, "instances=%d reps=%d time=%.1fs" % (len(used), len(g), dt))


@pytest.mark.parametrize("name,matrix,depths", [("A2", A2, range(1, 7)), ("A3", A3, range(1, 7))])
def test_criterion_5_f_polynomials(name, matrix, depths):
    counts = Counter()
    for d in depths:
        rep = verify_theorems({"seed": 0, "fixed": {"matrix": matrix, "depth": d}, "checks": ["F"]})
        counts.update(r.status for r in records(rep, "rep_F"))
        assert sum(1 for r in rep.records if r.name == "instance" and r.status == "pass") == len(fixed_words(len(matrix), d))
    ok = counts["fail"] == 0 and counts["pass"] > 0
    RESULTS.setdefault(5, True)
    RESULTS[5] = RESULTS[5] and ok
    print("criterion 5 (%s): %s certified=%d not_certified=%d" % (name, "PASS" if ok else "FAIL",
                                                                    counts["pass"], counts["skip"]))
    assert ok


def test_criterion_6_hom_identity(campaign):
    rep, _ = campaign
    recs = [r for r in records(rep, "hom_identity") if r.status != "skip"]
    verdict(6, len(recs) >= MIN_PAIRS and all_pass(recs), "pairs=%d" % len(recs))


def test_criterion_7_e_invariant(campaign):
    rep, _ = campaign
    lower = records(rep, "e_lower_bound")
    zero = records(rep, "cluster_E_zero")
    kron = records(rep, "kronecker")
    pos = records(rep, "e_zero_positive_g")
    ok = all_pass(lower) and all_pass(zero) and all_pass(kron) and len(kron) == 5 and all(
        r.status == "pass" for r in pos)
    verdict(7, ok, "bound=%d cluster_zero=%d kronecker=%d" % (len(lower), len(zero), len(kron)))


def test_criterion_8_seed_properties(campaign):
    rep, _ = campaign
    names = ("F_shape", "sign_coherence", "g_det", "separation", "transition")
    ok = all(all_pass(records(rep, n)) for n in names)
    verdict(8, ok, " ".join("%s=%d" % (n, len(records(rep, n))) for n in names))


def test_criterion_9_involution(campaign):
    rep, _ = campaign
    mats = records(rep, "mu2_matrix")
    reps = [r for r in records(rep, "mu2_rep") if r.status != "skip"]
    v = Counter(r.witness["verdict"] for r in reps)
    frac = v["isomorphic"] / len(reps) if reps else 0.0
    ok = (all_pass(mats) and all_pass(reps) and v["not_isomorphic"] == 0 and frac >= MIN_ISO_FRACTION
          and all(r.witness["invariants_match"] for r in reps))
    verdict(9, ok, "matrices=%d reps=%d isomorphic=%.2f" % (len(mats), len(reps), frac))


def test_criterion_10_homology(campaign):
    rep, _ = campaign
    pairs = records(rep, "eproj_dimension")
    ok = (len(pairs) >= MIN_HOMOLOGY_PAIRS and all_pass(pairs)
          and all(all_pass(records(rep, n)) for n in ("eproj_exact", "presentation_minimal", "psi_phi_zero")))
    verdict(10, ok, "modules=%d pairs=%d" % (len(records(rep, "eproj_exact")), len(pairs)))
