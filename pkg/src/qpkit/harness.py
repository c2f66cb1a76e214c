"""Verification campaigns: recurrence side against representation side.

Every check appends a CheckRecord; a record with status "fail" marks a
broken identity. Skipped instances (size budget exceeded, 2-cycles created
along the word) are recorded with status "skip" and never count as failures.
"""

from __future__ import annotations

import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable

from .grass import f_poly_of, monomialize, tree_module
from .homology import (JacobianAlgebra, build_sequence, e_proj_dimension, minimal_presentation,
                       phi_psi_compose_zero, projective_module)
from .pathalg import (Potential, Quiver, make_qp, mutate_qp, quiver_from_matrix, random_potential,
                      read_potential)
from .polycore import IntPolynomial, format_polynomial, parse_polynomial
from .repeng import (BackMutation, DegenerateError, cluster_reps, direct_sum, e_invariant, e_invariants,
                     hom_dim, hom_mutation_identity, iso_probe, lower_bound_check, mutate_rep,
                     negative_simple, positive_simple, qp_chain, rep_g_vector, rep_h_vector)
from .seedeng import (check_transition, dominant_monomial_ok, format_word, g_matrix_det, invariants_along,
                      mutate_matrix, principal_extension, reduce_word, sign_coherent)

SCHEMA_VERSION = 1

A2 = ((0, 1), (-1, 0))

# A2 table: B~(t), g_1, g_2, F_1, F_2, h_1, h_2 for t0..t5
TABLE_A2 = [
    (((0, 1), (-1, 0), (1, 0), (0, 1)), (1, 0), (0, 1), "1", "1", (0, 0), (0, 0)),
    (((0, -1), (1, 0), (1, 0), (0, -1)), (1, 0), (0, -1), "1", "u2+1", (0, 0), (0, -1)),
    (((0, 1), (-1, 0), (-1, 0), (0, -1)), (-1, 0), (0, -1), "u1*u2+u1+1", "u2+1", (-1, 0), (0, -1)),
    (((0, -1), (1, 0), (-1, 0), (-1, 1)), (-1, 0), (-1, 1), "u1*u2+u1+1", "u1+1", (-1, 0), (-1, 0)),
    (((0, 1), (-1, 0), (1, -1), (1, 0)), (0, 1), (-1, 1), "1", "u1+1", (0, 0), (-1, 0)),
    (((0, -1), (1, 0), (0, 1), (1, 0)), (0, 1), (1, 0), "1", "1", (0, 0), (0, 0)),
]


@dataclass
class CheckRecord:
    name: str
    instance: str
    status: str            # pass, fail or skip
    witness: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != "fail"


@dataclass
class VerificationReport:
    campaign: str
    seed: int
    config: dict
    records: list = field(default_factory=list)

    def add(self, name, instance, ok, **witness):
        status = ok if isinstance(ok, str) else ("pass" if ok else "fail")
        self.records.append(CheckRecord(name, instance, status, _plain(witness)))

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> list:
        return [r for r in self.records if r.status == "fail"]

    def summary(self) -> dict:
        out: dict = {}
        for r in self.records:
            d = out.setdefault(r.name, {"pass": 0, "fail": 0, "skip": 0})
            d[r.status] += 1
        return out

    def count(self, name: str, status: str = "pass") -> int:
        return sum(1 for r in self.records if r.name == name and r.status == status)


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, IntPolynomial):
        return format_polynomial(x)
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)


# ---------------------------------------------------------------- A2 reproduction

def a2_table_rows() -> list:
    """Computed rows (t, B~, g1, g2, F1, F2, h1, h2) along the word 2,1,2,1,2."""
    states = invariants_along(A2, (1, 0, 1, 0, 1))
    rows = []
    for i, st in enumerate(states):
        rows.append(("t%d" % i, st.Bt, st.g[0], st.g[1], format_polynomial(st.F[0]),
                     format_polynomial(st.F[1]), st.h[0], st.h[1]))
    return rows


TABLE_COLUMNS = ("t", "B~", "g1", "g2", "F1", "F2", "h1", "h2")


def table_tsv(rows) -> bytes:
    def cell(x):
        if isinstance(x, tuple) and x and isinstance(x[0], tuple):
            return ";".join(",".join(map(str, r)) for r in x)
        if isinstance(x, tuple):
            return ",".join(map(str, x))
        return str(x)
    lines = ["\t".join(TABLE_COLUMNS)] + ["\t".join(cell(x) for x in row) for row in rows]
    return ("\n".join(lines) + "\n").encode()


def reproduce_a2() -> VerificationReport:
    rep = VerificationReport("a2", 0, {})
    rows = a2_table_rows()
    for row, expect in zip(rows, TABLE_A2):
        got = row[1:]
        diff = [c for c, (x, y) in enumerate(zip(got, expect)) if x != y]
        rep.add("a2_table", row[0], not diff, row=list(row), mismatched_columns=diff)
    # periodicity over ten steps of the alternating word
    states = invariants_along(A2, (1, 0) * 5)
    for m in range(6):
        a, b = states[m + 5], states[m]
        g_ok = all(a.g[l] == b.g[1 - l] for l in range(2))
        f_swapped = all(a.F[l] == b.F[1 - l].permute_variables((1, 0)) for l in range(2))
        f_plain = all(a.F[l] == b.F[1 - l] for l in range(2))
        rep.add("periodicity", "m=%d" % m, g_ok and f_swapped,
                g=[a.g, b.g], F=[[format_polynomial(f) for f in a.F], [format_polynomial(f) for f in b.F]])
        # equal cluster variables with equal g-vectors force equal F-polynomials
        rep.add("periodicity_unswapped", "m=%d" % m, g_ok and f_plain)
    Bt5, Bt0 = states[5].Bt, states[0].Bt
    # a bare column swap of B~(t0) is not skew-symmetric on top; record it as a note only
    rep.add("column_swap", "t5", "skip", literal_match=Bt5 == tuple((r[1], r[0]) for r in Bt0))
    relabel = tuple((r[1], r[0]) for r in (Bt0[1], Bt0[0])) + tuple((r[1], r[0]) for r in Bt0[2:])
    rep.add("vertex_relabel", "t5", Bt5 == relabel)
    return rep


# ---------------------------------------------------------------- configuration

DEFAULT_CONFIG = {
    "seed": 1,
    "instances": 40,
    "n_values": [2, 3, 4],
    "max_word_len": 6,
    "truncation": 12,
    "potential_degree": 4,
    "entry_bound": 2,
    "max_terms": 20000,
    "dim_budget": 30,
    "pairs": 40,
    "iso_trials": 20,
    "involution_samples": 20,
    "fixed": None,
    "checks": ["recurrence", "g", "h", "F", "E", "transition", "separation", "pairs", "involution",
               "homology", "fixtures"],
}


def load_config(obj) -> dict:
    cfg = dict(DEFAULT_CONFIG)
    if obj:
        unknown = set(obj) - set(DEFAULT_CONFIG)
        if unknown:
            raise ValueError("unknown config keys: %s" % sorted(unknown))
        cfg.update(obj)
    if max(cfg["n_values"]) > 4 or min(cfg["n_values"]) < 1:
        raise ValueError("rank must lie in 1..4")
    limit = min(6, cfg["truncation"] // 2)
    if cfg["max_word_len"] > limit:
        raise ValueError("word length exceeds min(6, N/2)")
    fixed = cfg["fixed"]
    if fixed:
        B = tuple(map(tuple, fixed["matrix"]))
        quiver_from_matrix(B)
        if not 1 <= len(B) <= 4:
            raise ValueError("rank must lie in 1..4")
        if not 0 <= fixed.get("depth", 0) <= limit:
            raise ValueError("depth exceeds min(6, N/2)")
        words = fixed_words(len(B), fixed.get("depth", 0))
        cfg["instances"] = len(words)
    unknown = set(cfg["checks"]) - set(DEFAULT_CONFIG["checks"])
    if unknown:
        raise ValueError("unknown checks: %s" % sorted(unknown))
    return cfg


def fixed_words(n: int, depth: int) -> list:
    """All reduced words of exactly the given length (their prefixes cover shorter ones)."""
    words = [()]
    for _ in range(depth):
        words = [w + (k,) for w in words for k in range(n) if not w or w[-1] != k]
    return words


# ---------------------------------------------------------------- instances

def random_matrix(rng: random.Random, n: int, bound: int) -> tuple:
    B = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = rng.randint(-bound, bound)
            B[i][j], B[j][i] = x, -x
    return tuple(map(tuple, B))


def random_word(rng: random.Random, n: int, max_len: int) -> tuple:
    w: list = []
    if n == 1:
        return (0,) if max_len else ()
    for _ in range(rng.randint(1, max_len)):
        k = rng.randrange(n)
        while w and w[-1] == k:
            k = rng.randrange(n)
        w.append(k)
    return tuple(w)


@dataclass
class Instance:
    idx: int
    B: tuple
    S: Potential
    word: tuple

    @property
    def label(self) -> str:
        return "#%d B=%s w=%s" % (self.idx, [list(r) for r in self.B], format_word(self.word))


def make_instance(cfg: dict, idx: int) -> Instance:
    fixed = cfg.get("fixed")
    if fixed:
        B = tuple(map(tuple, fixed["matrix"]))
        Q = quiver_from_matrix(B)
        S = read_potential(fixed.get("potential", ""), Q, cfg["truncation"])
        return Instance(idx, B, S, fixed_words(len(B), fixed.get("depth", 0))[idx])
    rng = random.Random(cfg["seed"] * 1000003 + idx)
    n = rng.choice(cfg["n_values"])
    B = random_matrix(rng, n, cfg["entry_bound"])
    Q = quiver_from_matrix(B)
    S = random_potential(Q, cfg["potential_degree"], rng.randrange(2 ** 32), N=cfg["truncation"])
    return Instance(idx, B, S, random_word(rng, n, cfg["max_word_len"]))


def _dims_of(F: IntPolynomial) -> tuple:
    return tuple(max(e[j] for e in F.exponents()) for j in range(F.nvars))


# ---------------------------------------------------------------- one instance

def run_instance(cfg: dict, idx: int) -> dict:
    """All per-instance checks; returns records plus a small pool for the pair checks."""
    inst = make_instance(cfg, idx)
    rep = VerificationReport("instance", cfg["seed"], {})
    checks = set(cfg["checks"])
    B, word, n = inst.B, inst.word, len(inst.B)
    try:
        states = invariants_along(B, word, max_terms=cfg["max_terms"])
    except OverflowError as e:
        rep.add("instance", inst.label, "skip", reason=str(e))
        return {"records": rep.records, "pool": [], "seeds": []}
    budget = max(sum(_dims_of(f)) for st in states for f in st.F)
    if budget > cfg["dim_budget"]:
        rep.add("instance", inst.label, "skip", reason="dimension budget %d exceeded (%d)" % (cfg["dim_budget"], budget))
        return {"records": rep.records, "pool": [], "seeds": []}
    try:
        chain = qp_chain(B, inst.S, word)
    except DegenerateError as e:
        rep.add("instance", inst.label, "skip", reason="degenerate: %s" % e)
        return {"records": rep.records, "pool": [], "seeds": []}
    rep.add("instance", inst.label, True)
    seeds_out = []
    if "recurrence" in checks:
        for j, st in enumerate(states):
            gs = list(st.g)
            neg = [format_polynomial(f) for f in st.F if not f.has_nonnegative_coefficients()]
            ok = all(f.constant_term() == 1 and dominant_monomial_ok(f) for f in st.F)
            rep.add("F_shape", "%s t%d" % (inst.label, j), ok)
            rep.add("sign_coherence", "%s t%d" % (inst.label, j), sign_coherent(gs), g=gs)
            rep.add("g_det", "%s t%d" % (inst.label, j), abs(g_matrix_det(gs)) == 1)
            if neg:
                rep.add("negative_F_coefficients", "%s t%d" % (inst.label, j), "skip", polys=neg)
            seeds_out.append((B, [list(g) for g in st.g], [format_polynomial(f) for f in st.F]))
    if "transition" in checks:
        rng = random.Random(idx)
        k = rng.randrange(n)
        try:
            s1 = invariants_along(mutate_matrix(B, k), reduce_word((k,) + word), max_terms=cfg["max_terms"])[-1]
            s0 = states[-1]
            for l in range(n):
                ok, diff = check_transition(s0.g[l], s0.h[l], s1.h[l], B, k, s1.g[l])
                rep.add("transition", "%s k=%d l=%d" % (inst.label, k + 1, l + 1), ok, diff=diff)
        except OverflowError as e:
            rep.add("transition", inst.label, "skip", reason=str(e))
    pool = cluster_reps(chain, rng_seed=idx)
    out_pool = []
    for (j, l), M in sorted(pool.items()):
        st = states[j]
        where = "%s t%d l=%d" % (inst.label, j, l + 1)
        if "g" in checks:
            g = rep_g_vector(M)
            rep.add("rep_g", where, g == st.g[l], rep_g=g, recurrence_g=st.g[l])
        if "h" in checks:
            h = rep_h_vector(M)
            rep.add("h_vector", where, h == st.h[l], rep_h=h, recurrence_h=st.h[l])
        if "F" in checks:
            bm = monomialize(M)
            if bm is None:
                rep.add("rep_F", where, "skip", reason="not basis-monomial")
            else:
                try:
                    F = f_poly_of(bm)
                    rep.add("rep_F", where, F == st.F[l], rep_F=F, recurrence_F=st.F[l])
                except ValueError as e:
                    rep.add("rep_F", where, "skip", reason=str(e))
        if "E" in checks:
            try:
                E, bound, slack = lower_bound_check(M)
                rep.add("cluster_E_zero", where, E == 0 and bound == 0, E=E, bound=bound)
            except AssertionError as e:
                rep.add("cluster_E_zero", where, False, error=str(e))
        if j == len(word):
            out_pool.append(M)
    return {"records": rep.records, "pool": [(inst.idx, l) for l in range(n)], "seeds": seeds_out}


def _run_instances(cfg, indices, threads):
    if threads <= 1:
        return [run_instance(cfg, i) for i in indices]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(run_instance, [cfg] * len(indices), indices))


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("QPKIT_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------- pair checks

def _instance_pool(cfg, idx):
    """Cluster reps at the far vertex, positive simples and one direct sum, over the root QP."""
    inst = make_instance(cfg, idx)
    chain = qp_chain(inst.B, inst.S, inst.word)
    qp = chain.qps[0]
    n = len(inst.B)
    reps = cluster_reps(chain, rng_seed=idx)
    cluster = [reps[(len(inst.word), l)] for l in range(n)]
    simples = [positive_simple(qp, i) for i in range(n)]
    return inst, qp, cluster, simples


def _monomial_g(g, inst: Instance) -> bool:
    """True if g is a nonnegative integer combination of the g-vectors of one seed on the chain."""
    from . import linalg as la
    for st in invariants_along(inst.B, inst.word):
        G = la.from_columns([list(v) for v in st.g], len(g))
        c = la.inverse(G) * la.from_columns([list(g)], len(g))
        if all(c[i, 0] >= 0 and c[i, 0].q == 1 for i in range(c.nrows())):
            return True
    return False


def pair_checks(cfg, good: list, report: VerificationReport, threads: int = 1):
    rng = random.Random(cfg["seed"] * 7 + 1)
    want = cfg["pairs"]
    done = 0
    attempts = 0
    while done < want and good and attempts < 20 * want:
        attempts += 1
        idx = rng.choice(good)
        inst, qp, cluster, simples = _instance_pool(cfg, idx)
        n = qp.quiver.n
        cands = cluster + simples + [direct_sum([rng.choice(cluster), rng.choice(simples)])]
        M, N = rng.choice(cands), rng.choice(cands)
        if M.total_dim + N.total_dim > 2 * cfg["dim_budget"]:
            continue
        ks = [k for k in range(n) if not qp.quiver.has_two_cycle_at(k)]
        if not ks:
            continue
        k = rng.choice(ks)
        mut = mutate_qp(qp, k)
        if mut.degenerate:
            report.add("hom_identity", inst.label, "skip", reason="mutation at %d creates 2-cycles" % (k + 1))
            continue
        ok, data = hom_mutation_identity(M, N, k, rng_seed=attempts, mutation=mut)
        report.add("hom_identity", "%s k=%d pair=%d" % (inst.label, k + 1, done), ok, **data)
        for X in (M, N):
            try:
                E, bound, slack = lower_bound_check(X)
                is_cluster = any(X is c for c in cluster)
                ok7 = (E == 0) if is_cluster else True
                report.add("e_lower_bound", "%s pair=%d" % (inst.label, done), ok7, E=E, bound=bound, cluster=is_cluster)
                g = rep_g_vector(X)
                if E == 0 and all(x >= 0 for x in g):
                    report.add("e_zero_positive_g", "%s pair=%d" % (inst.label, done),
                               X.total_dim == 0 and tuple(X.dec) == tuple(g), g=g)
                if E == 0 and not is_cluster and X.total_dim and not _monomial_g(g, inst):
                    report.add("e_zero_candidate", inst.label, "skip", g=g, dims=X.dims)
            except AssertionError as e:
                report.add("e_lower_bound", inst.label, False, error=str(e))
        done += 1


def involution_checks(cfg, good: list, report: VerificationReport):
    rng = random.Random(cfg["seed"] * 11 + 3)
    for s in range(min(cfg["involution_samples"], 10 * len(good))):
        if not good:
            break
        idx = rng.choice(good)
        inst, qp, cluster, simples = _instance_pool(cfg, idx)
        n = qp.quiver.n
        B = inst.B
        k = rng.randrange(n)
        Bt = principal_extension(B)
        report.add("mu2_matrix", "%s k=%d" % (inst.label, k + 1), mutate_matrix(mutate_matrix(Bt, k), k) == Bt)
        if qp.quiver.has_two_cycle_at(k):
            continue
        mut = mutate_qp(qp, k)
        if mut.degenerate:
            report.add("mu2_rep", inst.label, "skip", reason="degenerate")
            continue
        back = BackMutation(mut)
        M = rng.choice(cluster + simples)
        if M.total_dim > cfg["dim_budget"]:
            continue
        M2 = back.apply(mutate_rep(M, k, rng_seed=s, mutation=mut), rng_seed=s + 1)
        others = cluster + simples
        inv_same = (M.dims == M2.dims and M.dec == M2.dec and rep_g_vector(M) == rep_g_vector(M2)
                    and rep_h_vector(M) == rep_h_vector(M2) and e_invariant(M) == e_invariant(M2)
                    and all(hom_dim(M, X) == hom_dim(M2, X) and hom_dim(X, M) == hom_dim(X, M2) for X in others))
        verdict = iso_probe(M, M2, trials=cfg["iso_trials"], rng_seed=s)
        report.add("mu2_rep", "%s k=%d" % (inst.label, k + 1), inv_same and verdict != "not_isomorphic",
                   verdict=verdict, invariants_match=inv_same)


def separation_check(seeds: Iterable, report: VerificationReport):
    """Equal g-vectors for the same B must come with equal F-polynomials."""
    seen: dict = {}
    for B, gs, Fs in seeds:
        for g, F in zip(gs, Fs):
            key = (B, tuple(g))
            if key in seen and seen[key] != F:
                report.add("separation", "B=%s g=%s" % (list(map(list, B)), g), False, F1=seen[key], F2=F)
            seen.setdefault(key, F)
    report.add("separation", "all", not any(r.name == "separation" and r.status == "fail" for r in report.records),
               distinct=len(seen))


# ---------------------------------------------------------------- fixtures

def fixture_qps():
    """The A2 quiver with zero potential and the oriented 3-cycle with S = c*b*a."""
    qa = make_qp(quiver_from_matrix(A2), {}, N=4)
    Q3 = Quiver(3, (("a", 0, 1), ("b", 1, 2), ("c", 2, 0)))
    q3 = make_qp(Q3, {("c", "b", "a"): 1}, N=4)
    return qa, q3


def module_pool(alg: JacobianAlgebra) -> list:
    qp = alg.qp
    n = qp.quiver.n
    pool = [positive_simple(qp, i) for i in range(n)] + [negative_simple(qp, i) for i in range(n)]
    pool += [projective_module(alg, k) for k in range(n)]
    if n == 3:
        pool += [tree_module(qp, T).rep for T in ([1, 2], [2, 0], [0, 1])]
        pool.append(direct_sum([pool[-3], pool[-2], pool[-1]]))
    pool.append(direct_sum([pool[0], pool[n]]))
    return pool


def homology_checks(report: VerificationReport):
    for name, qp in zip(("A2", "3-cycle"), fixture_qps()):
        alg = JacobianAlgebra(qp)
        pool = module_pool(alg)
        for i, M in enumerate(pool):
            where = "%s M%d dims=%s dec=%s" % (name, i, M.dims, M.dec)
            try:
                build_sequence(alg, M)
                report.add("eproj_exact", where, True)
            except AssertionError as e:
                report.add("eproj_exact", where, False, error=str(e))
            pres = minimal_presentation(alg, M, check=False)
            report.add("presentation_minimal", where, pres.minimal, P1=pres.P1_mult, P0=pres.P0_mult)
            report.add("psi_phi_zero", where, phi_psi_compose_zero(M))
            for j, N in enumerate(pool):
                try:
                    d = e_proj_dimension(alg, M, N, pres)
                    report.add("eproj_dimension", "%s M%d N%d" % (name, i, j), True, dim=d)
                except AssertionError as e:
                    report.add("eproj_dimension", "%s M%d N%d" % (name, i, j), False, error=str(e))


def kronecker_rep(n: int):
    """M_n on the Kronecker quiver: one arrow acts by the identity, the other by a nilpotent Jordan block."""
    from . import linalg as la
    Q = quiver_from_matrix(((0, -2), (2, 0)))
    qp = make_qp(Q, {}, N=12)
    ids = Q.ids
    J = la.zeros(n, n)
    for i in range(n - 1):
        J[i, i + 1] = 1
    from .repeng import DecoratedRep
    return DecoratedRep(qp, (n, n), {ids[0]: la.identity(n), ids[1]: J})


def fixture_checks(report: VerificationReport):
    for n in range(1, 6):
        M = kronecker_rep(n)
        E, bound, slack = lower_bound_check(M)
        report.add("kronecker", "n=%d" % n, E == n and rep_g_vector(M) == (n, -n) and hom_dim(M, M) == n,
                   E=E, g=rep_g_vector(M), hom=hom_dim(M, M), bound=bound)
    qa, q3 = fixture_qps()
    Ms = [tree_module(q3, T) for T in ([1, 2], [2, 0], [0, 1])]
    F = f_poly_of(monomialize(direct_sum([m.rep for m in Ms])))
    prod = f_poly_of(Ms[0]) * f_poly_of(Ms[1]) * f_poly_of(Ms[2])
    report.add("tree_modules", "M1+M2+M3", F == prod and F.coeff((1, 1, 1)) == 4
               and f_poly_of(Ms[0]) == parse_polynomial("1+u3+u2*u3", 3), coeff=F.coeff((1, 1, 1)))
    # rank one: g = +-1 and F in {1, u1+1}
    st = invariants_along(((0,),), (0,))
    report.add("rank_one", "word=1", st[1].g[0] == (-1,) and format_polynomial(st[1].F[0]) == "u1+1")


# ---------------------------------------------------------------- campaign

def verify_theorems(config: dict | None = None) -> VerificationReport:
    cfg = load_config(config)
    report = VerificationReport("verify", cfg["seed"], cfg)
    threads = thread_count()
    results = _run_instances(cfg, list(range(cfg["instances"])), threads)
    good = []
    seeds = []
    for res in results:
        report.records.extend(res["records"])
        if res["pool"]:
            good.append(res["pool"][0][0])
        seeds.extend(res["seeds"])
    checks = set(cfg["checks"])
    if "separation" in checks:
        separation_check(seeds, report)
    if "pairs" in checks:
        pair_checks(cfg, good, report)
    if "involution" in checks:
        involution_checks(cfg, good, report)
    if "homology" in checks:
        homology_checks(report)
    if "fixtures" in checks:
        fixture_checks(report)
    return report


# ---------------------------------------------------------------- serialization

TSV_COLUMNS = ("name", "instance", "status", "witness")


def emit(report: VerificationReport, fmt: str = "json") -> bytes:
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "campaign": report.campaign, "seed": report.seed,
               "config": report.config, "ok": report.ok, "summary": report.summary(),
               "records": [asdict(r) for r in report.records]}
        return (json.dumps(doc, indent=1, sort_keys=True) + "\n").encode()
    if fmt == "tsv":
        lines = ["# schema_version=%d campaign=%s seed=%d" % (SCHEMA_VERSION, report.campaign, report.seed),
                 "\t".join(TSV_COLUMNS)]
        for r in report.records:
            lines.append("\t".join([r.name, r.instance, r.status, json.dumps(r.witness, sort_keys=True)]))
        return ("\n".join(lines) + "\n").encode()
    raise ValueError("unknown format %r" % fmt)


def read_report(data: bytes) -> VerificationReport:
    doc = json.loads(data)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError("unsupported schema version %r" % doc.get("schema_version"))
    rep = VerificationReport(doc["campaign"], doc["seed"], doc["config"])
    rep.records = [CheckRecord(**r) for r in doc["records"]]
    return rep
