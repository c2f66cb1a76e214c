"""Decorated representations of quivers with potentials.

Arrow a acts by a matrix of shape dims[h(a)] x dims[t(a)]. The decoration V
is carried as dimensions only.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from flint import fmpq, fmpq_mat

from . import linalg as la
from .pathalg import (PathVector, Potential, QPData, QPMutation, Quiver, RightEquivalence,
                      apply_equivalence, composite_id, cyclic_normal_form, eliminate_pairs,
                      h_matrix, is_trivial, make_qp, mutate_qp, premutate_qp, quiver_from_matrix,
                      rename_potential, reversed_id)


class RelationError(ValueError):
    pass


class DegenerateError(RuntimeError):
    """A 2-cycle blocks a mutation along the requested word."""


class DecoratedRep:
    def __init__(self, qp: QPData, dims: Sequence[int], maps: Mapping[str, fmpq_mat] | None = None,
                 dec: Sequence[int] | None = None):
        Q = qp.quiver
        self.qp = qp
        self.dims = tuple(int(d) for d in dims)
        self.dec = tuple(int(d) for d in dec) if dec is not None else (0,) * Q.n
        if len(self.dims) != Q.n or len(self.dec) != Q.n:
            raise ValueError("dimension vectors must have length %d" % Q.n)
        self.maps = {}
        maps = maps or {}
        for a in Q.arrows:
            m = maps.get(a.id)
            if m is None:
                m = la.zeros(self.dims[a.head], self.dims[a.tail])
            if (m.nrows(), m.ncols()) != (self.dims[a.head], self.dims[a.tail]):
                raise ValueError("arrow %s: matrix shape %s does not fit dims" % (a.id, la.shape(m)))
            self.maps[a.id] = m
        extra = set(maps) - set(self.maps)
        if extra:
            raise ValueError("unknown arrows %s" % sorted(extra))
        self._cache: dict = {}

    @property
    def Q(self) -> Quiver:
        return self.qp.quiver

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_negative(self) -> bool:
        return self.total_dim == 0

    def path_matrix(self, p: tuple) -> fmpq_mat:
        if is_trivial(p):
            return la.identity(self.dims[p[0]])
        m = self._cache.get(p)
        if m is None:
            if len(p) == 1:
                m = self.maps[p[0]]
            else:
                m = la.mul(self.maps[p[0]], self.path_matrix(p[1:]))
            self._cache[p] = m
        return m

    def evaluate(self, v: PathVector, tail: int, head: int) -> fmpq_mat:
        out = la.zeros(self.dims[head], self.dims[tail])
        for p, c in v.terms.items():
            out += self.path_matrix(p) * c
        return out

    def __repr__(self):
        return "DecoratedRep(dims=%s, dec=%s)" % (self.dims, self.dec)


def negative_simple(qp: QPData, l: int) -> DecoratedRep:
    return DecoratedRep(qp, (0,) * qp.quiver.n, {}, tuple(1 if i == l else 0 for i in range(qp.quiver.n)))


def positive_simple(qp: QPData, l: int) -> DecoratedRep:
    return DecoratedRep(qp, tuple(1 if i == l else 0 for i in range(qp.quiver.n)))


def direct_sum(reps: Sequence[DecoratedRep]) -> DecoratedRep:
    qp = reps[0].qp
    Q = qp.quiver
    dims = tuple(sum(r.dims[i] for r in reps) for i in range(Q.n))
    dec = tuple(sum(r.dec[i] for r in reps) for i in range(Q.n))
    maps = {a.id: la.block_diag([r.maps[a.id] for r in reps]) for a in Q.arrows}
    return DecoratedRep(qp, dims, maps, dec)


def same_quiver(M: DecoratedRep, N: DecoratedRep) -> bool:
    return M.Q == N.Q


# ---------------------------------------------------------------- triangle maps

@dataclass
class Triangle:
    alpha: fmpq_mat   # M_in(k) -> M(k)
    beta: fmpq_mat    # M(k) -> M_out(k)
    gamma: fmpq_mat   # M_out(k) -> M_in(k)
    ins: list
    outs: list


def triangle(rep: DecoratedRep, k: int) -> Triangle:
    Q = rep.Q
    ins, outs = Q.in_arrows(k), Q.out_arrows(k)
    d = rep.dims
    alpha = la.hstack([rep.maps[a.id] for a in ins], nrows=d[k]) if ins else la.zeros(d[k], 0)
    beta = la.vstack([rep.maps[b.id] for b in outs], ncols=d[k]) if outs else la.zeros(0, d[k])
    H = h_matrix(rep.qp.potential, k)
    rows = []
    for p, a in enumerate(ins):
        blocks = [rep.evaluate(H[p][q], b.head, a.tail) for q, b in enumerate(outs)]
        rows.append(la.hstack(blocks, nrows=d[a.tail]) if outs else la.zeros(d[a.tail], 0))
    out_dim = sum(d[b.head] for b in outs)
    gamma = la.vstack(rows, ncols=out_dim) if ins else la.zeros(0, out_dim)
    return Triangle(alpha, beta, gamma, ins, outs)


def triangle_maps(rep: DecoratedRep) -> list:
    return [triangle(rep, k) for k in range(rep.Q.n)]


def loewy_length(rep: DecoratedRep, cap: int | None = None) -> int:
    """Smallest L with every path of length L acting as zero (stops early at cap)."""
    Q = rep.Q
    offs = [0]
    for d in rep.dims:
        offs.append(offs[-1] + d)
    # subspaces X_j = m^j M as blocks per vertex
    X = [la.identity(d) for d in rep.dims]
    L = 0
    while any(x.ncols() for x in X):
        L += 1
        if cap is not None and L > cap:
            return L
        nxt = []
        for i in range(Q.n):
            parts = [la.mul(rep.maps[a.id], X[a.tail]) for a in Q.arrows if a.head == i]
            parts = [p for p in parts if p.ncols()]
            if parts:
                nxt.append(la.image(la.hstack(parts)))
            else:
                nxt.append(la.zeros(rep.dims[i], 0))
        X = nxt
    return L


def is_nilpotent(rep: DecoratedRep, N: int | None = None) -> bool:
    N = rep.qp.N if N is None else N
    return loewy_length(rep, cap=N) <= N


def check_relations(rep: DecoratedRep, nilpotency: bool = True) -> bool:
    for k in range(rep.Q.n):
        t = triangle(rep, k)
        if not la.is_zero(la.mul(t.alpha, t.gamma)) or not la.is_zero(la.mul(t.gamma, t.beta)):
            return False
    return is_nilpotent(rep) if nilpotency else True


def _require(rep):
    if not check_relations(rep, nilpotency=False):
        raise RelationError("representation violates the Jacobian relations")


def rep_g_vector(rep: DecoratedRep, check: bool = True) -> tuple:
    if check:
        _require(rep)
    g = []
    for k in range(rep.Q.n):
        t = triangle(rep, k)
        ker = t.gamma.ncols() - la.rank(t.gamma)
        g.append(ker - rep.dims[k] + rep.dec[k])
    return tuple(g)


def rep_h_vector(rep: DecoratedRep) -> tuple:
    return tuple(-(rep.dims[k] - la.rank(triangle(rep, k).beta)) for k in range(rep.Q.n))


# ---------------------------------------------------------------- Hom spaces

def _hom_system(M: DecoratedRep, N: DecoratedRep):
    Q = M.Q
    offs = [0]
    for i in range(Q.n):
        offs.append(offs[-1] + N.dims[i] * M.dims[i])
    rows = []
    for a in Q.arrows:
        h, t = a.head, a.tail
        Am, An = M.maps[a.id], N.maps[a.id]
        am = [[(s, Am[s, c]) for s in range(M.dims[h]) if Am[s, c] != 0] for c in range(M.dims[t])]
        an = [[(s, An[r, s]) for s in range(N.dims[t]) if An[r, s] != 0] for r in range(N.dims[h])]
        # (phi_h a_M - a_N phi_t)[r, c] = 0
        for r in range(N.dims[h]):
            for c in range(M.dims[t]):
                row = {}
                for s, x in am[c]:
                    j = offs[h] + r * M.dims[h] + s
                    row[j] = row.get(j, 0) + x
                for s, x in an[r]:
                    j = offs[t] + s * M.dims[t] + c
                    row[j] = row.get(j, 0) - x
                row = {j: x for j, x in row.items() if x != 0}
                if row:
                    rows.append(row)
    nvars = offs[-1]
    A = la.zeros(len(rows), nvars)
    for i, row in enumerate(rows):
        for j, x in row.items():
            A[i, j] = x
    return A, offs


def hom_dim(M: DecoratedRep, N: DecoratedRep) -> int:
    if M.Q != N.Q:
        raise ValueError("representations live on different quivers")
    A, offs = _hom_system(M, N)
    return offs[-1] - la.rank(A)


def hom_space(M: DecoratedRep, N: DecoratedRep):
    """(dimension, basis) with each basis element a tuple of per-vertex matrices N(i) x M(i)."""
    if M.Q != N.Q:
        raise ValueError("representations live on different quivers")
    A, offs = _hom_system(M, N)
    K = la.kernel(A)
    basis = []
    for c in range(K.ncols()):
        comps = []
        for i in range(M.Q.n):
            m = la.zeros(N.dims[i], M.dims[i])
            for r in range(N.dims[i]):
                for s in range(M.dims[i]):
                    m[r, s] = K[offs[i] + r * M.dims[i] + s, c]
            comps.append(m)
        basis.append(tuple(comps))
    return K.ncols(), basis


# ---------------------------------------------------------------- E-invariants

def e_inj(M: DecoratedRep, N: DecoratedRep, gN: Sequence[int] | None = None) -> int:
    gN = rep_g_vector(N) if gN is None else gN
    return hom_dim(M, N) + sum(d * g for d, g in zip(M.dims, gN))


def e_invariants(M: DecoratedRep, N: DecoratedRep) -> tuple:
    a, b = e_inj(M, N), e_inj(N, M)
    return a, b, a + b


def e_invariant(M: DecoratedRep) -> int:
    return e_inj(M, M)


def dual_qp(qp: QPData) -> QPData:
    Qop = qp.quiver.opposite()
    terms = {tuple(reversed(c)): v for c, v in qp.potential.terms.items()}
    return QPData(Qop, Potential(Qop, qp.N, terms), qp.N)


def dual_rep(rep: DecoratedRep, qp_op: QPData | None = None) -> DecoratedRep:
    qp_op = dual_qp(rep.qp) if qp_op is None else qp_op
    return DecoratedRep(qp_op, rep.dims, {a: m.transpose() for a, m in rep.maps.items()}, rep.dec)


def lower_bound_check(rep: DecoratedRep) -> tuple:
    """(E, bound, slack); raises AssertionError if E < bound or the E = 0 consequences fail."""
    E = e_invariant(rep)
    bound = 0
    props_ok = True
    for k in range(rep.Q.n):
        t = triangle(rep, k)
        rb = la.rank(t.beta)
        null_beta = rep.dims[k] - rb
        ker_gamma = t.gamma.ncols() - la.rank(t.gamma)
        bound += null_beta * (ker_gamma - rb) + rep.dims[k] * rep.dec[k]
        if rep.dims[k] and rep.dec[k]:
            props_ok = False
        if null_beta and rb != ker_gamma:
            props_ok = False
    if E < bound:
        raise AssertionError("E-invariant %d below the lower bound %d" % (E, bound))
    if E == 0 and not props_ok:
        raise AssertionError("E = 0 but the vanishing properties fail")
    return E, bound, E - bound


# ---------------------------------------------------------------- premutation

def _coords(basis: fmpq_mat, vecs: fmpq_mat) -> fmpq_mat:
    return la.solve_in_basis(basis, vecs)


def _sub_complement(sub: fmpq_mat, space: fmpq_mat, rng) -> fmpq_mat:
    """Basis vectors completing sub inside space (both given by independent columns)."""
    c = _coords(space, sub)
    comp = la.complement(c, rng)
    return la.mul(space, comp)


def premutate_rep(rep: DecoratedRep, k: int, rng_seed: int = 0, target: QPData | None = None,
                  check: bool = True) -> DecoratedRep:
    qp = rep.qp
    Q = qp.quiver
    if Q.has_two_cycle_at(k):
        raise ValueError("2-cycle through vertex %d" % (k + 1))
    if check:
        _require(rep)
    target = premutate_qp(qp, k) if target is None else target
    rng = random.Random(rng_seed)
    t = triangle(rep, k)
    alpha, beta, gamma = t.alpha, t.beta, t.gamma
    d_out, d_in = gamma.ncols(), gamma.nrows()
    ker_g = la.kernel(gamma)
    im_b = la.image(beta)
    C1 = _sub_complement(im_b, ker_g, rng)                  # ker gamma / im beta
    D = la.complement(ker_g, rng) if ker_g.ncols() < d_out else la.zeros(d_out, 0)
    im_g = la.image(gamma)
    ker_a = la.kernel(alpha)
    C2 = _sub_complement(im_g, ker_a, rng)                  # ker alpha / im gamma
    d1, d2, d3, d4 = C1.ncols(), im_g.ncols(), C2.ncols(), rep.dec[k]
    new_dim = d1 + d2 + d3 + d4
    # -pi rho: C1 coordinates of v in the basis [im beta | C1 | D]
    frame = la.hstack([im_b, C1, D], nrows=d_out)
    inv_frame = la.inverse(frame)
    pr = la.get_block(inv_frame, im_b.ncols(), im_b.ncols() + d1, 0, d_out)
    g_coords = _coords(im_g, gamma) if d2 else la.zeros(0, d_out)
    abar = la.vstack([-pr, -g_coords, la.zeros(d3 + d4, d_out)], ncols=d_out)
    bbar = la.hstack([la.zeros(d_in, d1), im_g, C2, la.zeros(d_in, d4)], nrows=d_in)
    # new decoration at k
    ker_b = la.kernel(beta)
    im_a = la.image(alpha)
    inter = ker_b.ncols() + im_a.ncols() - la.rank(la.hstack([ker_b, im_a], nrows=rep.dims[k]))
    new_dec_k = ker_b.ncols() - inter
    dims = list(rep.dims)
    dims[k] = new_dim
    dec = list(rep.dec)
    dec[k] = new_dec_k
    maps = {}
    for a in Q.arrows:
        if a.tail != k and a.head != k:
            maps[a.id] = rep.maps[a.id]
    for b in t.outs:
        for a in t.ins:
            maps[composite_id(b.id, a.id)] = la.mul(rep.maps[b.id], rep.maps[a.id])
    col = 0
    for b in t.outs:
        w = rep.dims[b.head]
        maps[reversed_id(b.id)] = la.get_block(abar, 0, new_dim, col, col + w)
        col += w
    row = 0
    for a in t.ins:
        w = rep.dims[a.tail]
        maps[reversed_id(a.id)] = la.get_block(bbar, row, row + w, 0, new_dim)
        row += w
    out = DecoratedRep(target, dims, maps, dec)
    if check:
        _check_premutation(rep, out, k, t, abar, bbar, ker_g, im_b, C1, im_g, ker_a)
    return out


def _same_span(A: fmpq_mat, B: fmpq_mat) -> bool:
    ra, rb = la.rank(A), la.rank(B)
    if ra != rb:
        return False
    if ra == 0:
        return True
    return la.rank(la.hstack([A, B])) == ra


def _check_premutation(rep, out, k, t, abar, bbar, ker_g, im_b, C1, im_g, ker_a):
    """The mutated triangle satisfies the kernel and image identities."""
    d1, d2 = C1.ncols(), im_g.ncols()
    n_new = abar.nrows()
    d_in = bbar.nrows()
    errors = []
    if not _same_span(la.kernel(abar), im_b):
        errors.append("ker abar != im beta")
    first_two = la.get_block(la.identity(n_new), 0, n_new, 0, d1 + d2)
    if not _same_span(la.image(abar), first_two):
        errors.append("im abar != first two summands")
    kb = la.kernel(bbar)
    expect = la.hstack([la.get_block(la.identity(n_new), 0, n_new, 0, d1),
                        la.get_block(la.identity(n_new), 0, n_new, n_new - rep.dec[k], n_new)], nrows=n_new)
    if not _same_span(kb, expect):
        errors.append("ker bbar mismatch")
    if not _same_span(la.image(bbar), ker_a):
        errors.append("im bbar != ker alpha")
    nt = triangle(out, k)
    # the new gamma, read in the old block order, equals beta alpha
    ba = la.mul(t.beta, t.alpha)
    perm_rows = _block_perm([reversed_id(b.id) for b in t.outs], [x.id for x in nt.ins], out, "tail")
    perm_cols = _block_perm([reversed_id(a.id) for a in t.ins], [x.id for x in nt.outs], out, "head")
    if la.mul(la.mul(perm_rows, nt.gamma), perm_cols.transpose()) != ba:
        errors.append("gamma bar != beta alpha")
    if errors:
        raise AssertionError("premutation postconditions failed: " + "; ".join(errors))


def _block_perm(order_old, order_new, rep, end):
    """Permutation matrix taking blocks listed in order_new to order_old."""
    Q = rep.Q

    def width(aid):
        a = Q.arrow(aid)
        return rep.dims[a.tail if end == "tail" else a.head]

    offs_new = {}
    o = 0
    for aid in order_new:
        offs_new[aid] = o
        o += width(aid)
    P = la.zeros(o, o)
    r = 0
    for aid in order_old:
        w = width(aid)
        for i in range(w):
            P[r + i, offs_new[aid] + i] = 1
        r += w
    return P


# ---------------------------------------------------------------- twisting and mutation

def twist(rep: DecoratedRep, images: RightEquivalence, qp: QPData, keep: Sequence[str] | None = None,
          rename: Mapping[str, str] | None = None, zero_check: Sequence[str] = ()) -> DecoratedRep:
    """Arrow c of rep's quiver acts by images(c) evaluated on rep.

    Arrows listed in zero_check must act as zero; the result keeps the arrows in
    keep (renamed by rename) and lives over qp.
    """
    Q = rep.Q
    rename = rename or {}
    keep = Q.ids if keep is None else keep
    new_maps = {}
    for cid in set(keep) | set(zero_check):
        a = Q.arrow(cid)
        m = rep.evaluate(images.image(cid), a.tail, a.head)
        if cid in zero_check:
            if not la.is_zero(m):
                raise AssertionError("trivial arrow %s acts nonzero after twisting" % cid)
        if cid in keep:
            new_maps[rename.get(cid, cid)] = m
    return DecoratedRep(qp, rep.dims, new_maps, rep.dec)


def mutate_rep(rep: DecoratedRep, k: int, rng_seed: int = 0, mutation: QPMutation | None = None,
               check: bool = True) -> DecoratedRep:
    """Mutation through premutation and the reduction of the premutated potential."""
    mutation = mutate_qp(rep.qp, k) if mutation is None else mutation
    if mutation.source.quiver != rep.Q:
        raise ValueError("mutation data does not belong to this representation")
    pre = premutate_rep(rep, k, rng_seed, target=mutation.premutated, check=check)
    trivial = [x for pr in mutation.pairs for x in pr]
    keep = [a for a in mutation.premutated.quiver.ids if a not in set(trivial)]
    out = twist(pre, mutation.phi_inverse, mutation.qp, keep=keep, rename=mutation.relabel,
                zero_check=trivial)
    if check:
        _require(out)
    return out


class BackMutation:
    """Exact inverse direction of one QP mutation: reps of the mutated QP back onto the source QP.

    The second premutation of the premutated QP is right-equivalent to the
    source plus trivial 2-cycles through an explicit substitution; that
    substitution is built here once and reused for every representation.
    """

    def __init__(self, mutation: QPMutation):
        self.mutation = mutation
        src = mutation.source
        k = mutation.k
        Q = src.quiver
        N = src.N
        pre = mutation.premutated
        self.double = premutate_qp(pre, k)
        QQ = self.double.quiver
        ins, outs = Q.in_arrows(k), Q.out_arrows(k)
        pairs = []
        chi = {}
        for b in outs:
            for a in ins:
                x = composite_id(b.id, a.id)
                y = composite_id(reversed_id(a.id), reversed_id(b.id))
                pairs.append((x, y))
                path = (reversed_id(reversed_id(b.id)), reversed_id(reversed_id(a.id)))
                chi[x] = PathVector(QQ, N, {(x,): 1, path: -1})
        chi_eq = RightEquivalence(QQ, N, chi)
        S1 = apply_equivalence(chi_eq, self.double.potential)
        S2, psi = eliminate_pairs(S1, pairs, chi_eq)
        flip = RightEquivalence(QQ, N, {reversed_id(reversed_id(a.id)):
                                        PathVector(QQ, N, {(reversed_id(reversed_id(a.id)),): -1}) for a in ins})
        S3 = apply_equivalence(flip, S2)
        self.psi = flip.compose(psi)
        self.pairs = pairs
        self.rename = {reversed_id(reversed_id(a.id)): a.id for a in ins + outs}
        trivial = {z for pr in pairs for z in pr}
        red = {c: v for c, v in S3.terms.items() if not any(z in trivial for z in c)}
        renamed = {tuple(self.rename.get(z, z) for z in c): v for c, v in red.items()}
        if Potential(Q, N, renamed) != src.potential:
            raise AssertionError("double premutation does not return to the source potential")
        expect_triv = {cyclic_normal_form(pr): 1 for pr in pairs}
        triv = {c: v for c, v in S3.terms.items() if any(z in trivial for z in c)}
        if triv != expect_triv:
            raise AssertionError("unexpected trivial part after elimination")
        self.keep = [a for a in QQ.ids if a not in trivial]
        self.trivial = sorted(trivial)
        self._psi_inv = None
        self._inv_relabel = {v: u for u, v in mutation.relabel.items()}

    @property
    def psi_inverse(self) -> RightEquivalence:
        if self._psi_inv is None:
            self._psi_inv = self.psi.inverse()
        return self._psi_inv

    def apply(self, rep: DecoratedRep, rng_seed: int = 0, check: bool = True) -> DecoratedRep:
        m = self.mutation
        if rep.Q != m.qp.quiver:
            raise ValueError("representation is not over the mutated QP")
        pre = m.premutated
        trivial1 = {z for pr in m.pairs for z in pr}
        maps = {self._inv_relabel[a]: mat for a, mat in rep.maps.items()}
        ext = DecoratedRep(pre, rep.dims, maps, rep.dec)   # trivial arrows act as zero
        lifted = twist(ext, m.phi, pre)
        if check:
            _require(lifted)
        up = premutate_rep(lifted, m.k, rng_seed, target=self.double, check=check)
        out = twist(up, self.psi_inverse, m.source, keep=self.keep, rename=self.rename,
                    zero_check=self.trivial)
        if check:
            _require(out)
        return out


# ---------------------------------------------------------------- cluster representations

@dataclass
class ClusterChain:
    B: tuple
    word: tuple
    qps: list            # QP at t_0 .. t_p
    mutations: list      # QPMutation for each edge
    backs: list          # BackMutation for each edge (built lazily)


def qp_chain(B, S: Potential, word: Sequence[int], N: int | None = None) -> ClusterChain:
    from .seedeng import mutate_matrix
    Q = quiver_from_matrix(B)
    if S.Q != Q:
        S = Potential(Q, S.N, S.terms)
    N = S.N if N is None else N
    qp = QPData(Q, Potential(Q, N, S.terms), N)
    qps, muts = [qp], []
    Bcur = tuple(tuple(r) for r in B)
    for j, k in enumerate(word):
        if qps[-1].quiver.has_two_cycle_at(k):
            raise DegenerateError("2-cycle at vertex %d after prefix %s" % (k + 1, list(word[:j])))
        m = mutate_qp(qps[-1], k)
        Bcur = mutate_matrix(Bcur, k)
        if m.qp.quiver.to_matrix() != Bcur:
            raise DegenerateError("mutated quiver differs from the mutated matrix after prefix %s"
                                  % list(word[:j + 1]))
        muts.append(m)
        qps.append(m.qp)
    return ClusterChain(tuple(map(tuple, B)), tuple(word), qps, muts, [None] * len(muts))


def _back(chain: ClusterChain, j: int) -> BackMutation:
    if chain.backs[j] is None:
        chain.backs[j] = BackMutation(chain.mutations[j])
    return chain.backs[j]


def cluster_reps(chain: ClusterChain, rng_seed: int = 0, check: bool = True) -> dict:
    """All cluster representations along the chain, keyed by (prefix length, ell), over the root QP."""
    p = len(chain.word)
    n = chain.qps[0].quiver.n
    pool = [((p, l), negative_simple(chain.qps[p], l)) for l in range(n)]
    for j in range(p - 1, -1, -1):
        back = _back(chain, j)
        pool = [(key, back.apply(r, rng_seed + 7919 * i + j, check=check)) for i, (key, r) in enumerate(pool)]
        pool += [((j, l), negative_simple(chain.qps[j], l)) for l in range(n)]
    return dict(pool)


def build_cluster_rep(B, S: Potential, word: Sequence[int], ell: int, rng_seed: int = 0,
                      check: bool = True) -> DecoratedRep:
    chain = qp_chain(B, S, word)
    p = len(word)
    rep = negative_simple(chain.qps[p], ell)
    for j in range(p - 1, -1, -1):
        rep = _back(chain, j).apply(rep, rng_seed + j, check=check)
    return rep


# ---------------------------------------------------------------- isomorphism probe and identities

def iso_probe(M: DecoratedRep, N: DecoratedRep, trials: int = 20, rng_seed: int = 0) -> str:
    if M.Q != N.Q:
        raise ValueError("representations live on different quivers")
    if M.dims != N.dims or M.dec != N.dec:
        return "not_isomorphic"
    dmn, basis = hom_space(M, N)
    if dmn != hom_dim(N, M) or dmn != hom_dim(M, M):
        return "not_isomorphic"
    if M.total_dim == 0:
        return "isomorphic"
    rng = random.Random(rng_seed)
    for _ in range(trials):
        coeffs = [rng.randint(-10, 10) for _ in basis]
        ok = True
        for i in range(M.Q.n):
            if not M.dims[i]:
                continue
            f = la.zeros(N.dims[i], M.dims[i])
            for c, b in zip(coeffs, basis):
                if c:
                    f += b[i] * c
            if la.rank(f) != M.dims[i]:
                ok = False
                break
        if ok:
            return "isomorphic"
    return "inconclusive"


def coker_alpha_dim(rep: DecoratedRep, k: int) -> int:
    return rep.dims[k] - la.rank(triangle(rep, k).alpha)


def hom_mutation_identity(M: DecoratedRep, N: DecoratedRep, k: int, rng_seed: int = 0,
                          mutation: QPMutation | None = None):
    """Check both mutation identities for the pair; returns (ok, report)."""
    mutation = mutate_qp(M.qp, k) if mutation is None else mutation
    Mb = mutate_rep(M, k, rng_seed, mutation)
    Nb = mutate_rep(N, k, rng_seed + 1, mutation)
    hN, hNb = rep_h_vector(N)[k], rep_h_vector(Nb)[k]
    hM, hMb = rep_h_vector(M)[k], rep_h_vector(Mb)[k]
    lhs = hom_dim(M, N) + coker_alpha_dim(M, k) * hN
    rhs = hom_dim(Mb, Nb) + coker_alpha_dim(Mb, k) * hNb
    e_diff = e_inj(Mb, Nb) - e_inj(M, N)
    e_pred = hMb * hN - hM * hNb
    report = {"hom_lhs": lhs, "hom_rhs": rhs, "e_diff": e_diff, "e_pred": e_pred,
              "esym": e_invariants(M, N)[2], "esym_mut": e_invariants(Mb, Nb)[2]}
    ok = lhs == rhs and e_diff == e_pred and report["esym"] == report["esym_mut"]
    return ok, report


# ---------------------------------------------------------------- file format

def write_rep(rep: DecoratedRep) -> str:
    lines = ["dims " + " ".join(map(str, rep.dims)), "dec " + " ".join(map(str, rep.dec))]
    for a in rep.Q.arrows:
        m = rep.maps[a.id]
        lines.append("arrow %s %d %d" % (a.id, m.nrows(), m.ncols()))
        lines.extend(la.to_str_rows(m))
    return "\n".join(lines) + "\n"


def read_rep(text: str, qp: QPData) -> DecoratedRep:
    lines = [l.strip() for l in text.splitlines() if l.strip() and not l.strip().startswith("#")]
    dims = dec = None
    maps = {}
    i = 0
    while i < len(lines):
        parts = lines[i].split()
        if parts[0] == "dims":
            dims = [int(x) for x in parts[1:]]
        elif parts[0] == "dec":
            dec = [int(x) for x in parts[1:]]
        elif parts[0] == "arrow":
            aid, r, c = parts[1], int(parts[2]), int(parts[3])
            m = la.zeros(r, c)
            for rr in range(r):
                i += 1
                vals = lines[i].split()
                if len(vals) != c:
                    raise ValueError("row of arrow %s has %d entries, expected %d" % (aid, len(vals), c))
                for cc, v in enumerate(vals):
                    m[rr, cc] = fmpq(*[int(x) for x in v.split("/")])
            maps[aid] = m
        else:
            raise ValueError("unexpected line %r" % lines[i])
        i += 1
    if dims is None:
        raise ValueError("missing dims line")
    return DecoratedRep(qp, dims, maps, dec)
