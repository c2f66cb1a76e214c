"""Projective presentations over finite-dimensional Jacobian algebras.

Modules are DecoratedReps over the algebra's QP. The projective P_k has the
basis paths with tail k; arrows act by left multiplication followed by
reduction modulo the Jacobian ideal. Module maps are stored vertex by vertex.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from flint import fmpq_mat

from . import linalg as la
from .pathalg import (JacobianBasis, QPData, cyclic_derivative, is_trivial, jacobian_quotient_basis,
                      path_head, path_mul, path_tail)
from .repeng import DecoratedRep, check_relations, dual_rep, hom_dim, rep_g_vector, triangle


class UncertifiedAlgebra(ValueError):
    """The truncated quotient is not known to be the whole Jacobian algebra."""


class JacobianAlgebra:
    def __init__(self, qp: QPData, basis: JacobianBasis | None = None):
        self.qp = qp
        self.jb = jacobian_quotient_basis(qp) if basis is None else basis
        if not self.jb.certificate:
            raise UncertifiedAlgebra("Jacobian ideal does not contain the paths of length %d" % (qp.N - 1))
        Q = qp.quiver
        # component e_i P e_k: basis paths from k to i
        self.component = {}
        for p in self.jb.basis:
            self.component.setdefault((path_head(Q, p), path_tail(Q, p)), []).append(p)
        self._proj: dict = {}

    @property
    def Q(self):
        return self.qp.quiver

    @property
    def dim(self) -> int:
        return len(self.jb.basis)

    def paths(self, head: int, tail: int) -> list:
        return self.component.get((head, tail), [])

    def reduce(self, terms: dict) -> dict:
        return self.jb.reduce(terms)

    def product(self, p: tuple, q: tuple) -> dict:
        """Coordinates of p*q (q applied first)."""
        r = path_mul(self.Q, p, q)
        if r is None:
            return {}
        return self.reduce({r: 1})


def projective_module(alg: JacobianAlgebra, k: int) -> DecoratedRep:
    if k in alg._proj:
        return alg._proj[k]
    Q = alg.Q
    dims = [len(alg.paths(i, k)) for i in range(Q.n)]
    maps = {}
    for a in Q.arrows:
        src, dst = alg.paths(a.tail, k), alg.paths(a.head, k)
        idx = {p: i for i, p in enumerate(dst)}
        m = la.zeros(len(dst), len(src))
        for c, p in enumerate(src):
            for q, x in alg.product((a.id,), p).items():
                m[idx[q], c] = x
        maps[a.id] = m
    P = DecoratedRep(alg.qp, dims, maps)
    alg._proj[k] = P
    return P


# ---------------------------------------------------------------- free modules P_k (x) U

@dataclass
class FreeModule:
    """Direct sum of P_k (x) C^{m} over a list of (k, m) summands, with an explicit basis.

    The basis at vertex i lists (summand index, path from k to i, j) for j < m.
    """

    alg: JacobianAlgebra
    summands: list
    basis: list = field(default_factory=list)
    index: list = field(default_factory=list)

    def __post_init__(self):
        n = self.alg.Q.n
        self.basis = [[] for _ in range(n)]
        for s, (k, m) in enumerate(self.summands):
            for i in range(n):
                for p in self.alg.paths(i, k):
                    for j in range(m):
                        self.basis[i].append((s, p, j))
        self.index = [{b: r for r, b in enumerate(bs)} for bs in self.basis]

    def dims(self) -> tuple:
        return tuple(len(b) for b in self.basis)

    def vector(self, i: int, coords: dict) -> list:
        """coords maps (summand, path, j) to a coefficient."""
        v = [0] * len(self.basis[i])
        for key, c in coords.items():
            v[self.index[i][key]] += c
        return v

    def as_rep(self) -> DecoratedRep:
        Q = self.alg.Q
        maps = {}
        for a in Q.arrows:
            m = la.zeros(len(self.basis[a.head]), len(self.basis[a.tail]))
            for c, (s, p, j) in enumerate(self.basis[a.tail]):
                for q, x in self.alg.product((a.id,), p).items():
                    m[self.index[a.head][(s, q, j)], c] += x
            maps[a.id] = m
        return DecoratedRep(self.alg.qp, self.dims(), maps)


def _module_map(alg, src: FreeModule, tgt_dims, column_of) -> list:
    """Per-vertex matrices; column_of(s, j, p, i) is the image of p (x) e_j from summand s."""
    Q = alg.Q
    mats = []
    for i in range(Q.n):
        m = la.zeros(tgt_dims[i], len(src.basis[i]))
        for c, (s, p, j) in enumerate(src.basis[i]):
            col = column_of(s, j, p, i)
            for r, x in enumerate(col):
                if x != 0:
                    m[r, c] = x
        mats.append(m)
    return mats


# ---------------------------------------------------------------- the exact sequence

@dataclass
class CanonicalSequence:
    X2: FreeModule        # sum over arrows b of P_{t(b)} (x) M(h(b))
    X1: FreeModule        # sum over arrows a of P_{h(a)} (x) M(t(a))
    X0: FreeModule        # sum over vertices k of P_k (x) M(k)
    psi: list
    phi: list
    ev: list


def delta_split(S, a: str, b: str) -> list:
    """Terms (coef, u, v) of Delta_a(d_b S) with u on the left and v on the right."""
    Q = S.Q
    D = cyclic_derivative(S, b)
    out = []
    for p, c in D.terms.items():
        for i, x in enumerate(p):
            if x != a:
                continue
            u = p[:i] if i else (Q.arrow(a).head,)
            v = p[i + 1:] if i + 1 < len(p) else (Q.arrow(a).tail,)
            out.append((c, u, v))
    return out


def build_sequence(alg: JacobianAlgebra, M: DecoratedRep, check: bool = True) -> CanonicalSequence:
    Q = alg.Q
    if check and not check_relations(M):
        raise ValueError("module violates the Jacobian relations")
    arrows = Q.arrows
    X0 = FreeModule(alg, [(k, M.dims[k]) for k in range(Q.n)])
    X1 = FreeModule(alg, [(a.head, M.dims[a.tail]) for a in arrows])
    X2 = FreeModule(alg, [(b.tail, M.dims[b.head]) for b in arrows])

    def ev_col(s, j, p, i):
        # p (x) e_j in P_s (x) M(s) -> p_M e_j
        m = M.path_matrix(p)
        return [m[r, j] for r in range(M.dims[i])]

    ev = _module_map(alg, X0, M.dims, ev_col)

    def phi_col(s, j, p, i):
        a = arrows[s]
        out = {}
        for q, x in alg.product(p, (a.id,)).items():
            key = (a.tail, q, j)
            out[key] = out.get(key, 0) + x
        am = M.maps[a.id]
        for r in range(M.dims[a.head]):
            if am[r, j] != 0:
                key = (a.head, p, r)
                out[key] = out.get(key, 0) - am[r, j]
        return X0.vector(i, out)

    phi = _module_map(alg, X1, X0.dims(), phi_col)

    splits = {(a.id, b.id): delta_split(alg.qp.potential, a.id, b.id) for a in arrows for b in arrows}

    def psi_col(s, j, p, i):
        b = arrows[s]
        out = {}
        for ai, a in enumerate(arrows):
            for c, u, v in splits[(a.id, b.id)]:
                vm = M.path_matrix(v)
                pu = alg.product(p, u)
                if not pu:
                    continue
                for r in range(M.dims[a.tail]):
                    y = vm[r, j]
                    if y == 0:
                        continue
                    for q, x in pu.items():
                        key = (ai, q, r)
                        out[key] = out.get(key, 0) + c * x * y
        return X1.vector(i, out)

    psi = _module_map(alg, X2, X1.dims(), psi_col)
    seq = CanonicalSequence(X2, X1, X0, psi, phi, ev)
    if check:
        check_sequence(seq, M)
    return seq


def _exact_at(f: fmpq_mat, g: fmpq_mat) -> bool:
    """im f == ker g for composable f then g."""
    if not la.is_zero(la.mul(g, f)):
        return False
    return la.rank(f) == g.ncols() - la.rank(g)


def check_sequence(seq: CanonicalSequence, M: DecoratedRep) -> None:
    for i in range(len(M.dims)):
        ev, phi, psi = seq.ev[i], seq.phi[i], seq.psi[i]
        if la.rank(ev) != M.dims[i]:
            raise AssertionError("evaluation map not surjective at vertex %d" % (i + 1))
        if not _exact_at(phi, ev):
            raise AssertionError("sequence not exact at the degree-0 term, vertex %d" % (i + 1))
        if not _exact_at(psi, phi):
            raise AssertionError("sequence not exact at the degree-1 term, vertex %d" % (i + 1))


# ---------------------------------------------------------------- Phi and Psi on Hom spaces

def phi_psi_compose_zero(M: DecoratedRep) -> bool:
    """Psi(Phi(xi)) = 0 for a basis of Hom_R(M, M)."""
    Q = M.Q
    S = M.qp.potential
    splits = {(a.id, b.id): delta_split(S, a.id, b.id) for a in Q.arrows for b in Q.arrows}
    for i in range(Q.n):
        d = M.dims[i]
        for r in range(d):
            for c in range(d):
                # xi is the matrix unit E_rc at vertex i
                eta = {}
                for a in Q.arrows:
                    e = la.zeros(M.dims[a.head], M.dims[a.tail])
                    if a.head == i:
                        for col in range(M.dims[a.tail]):
                            e[r, col] += M.maps[a.id][c, col]
                    if a.tail == i:
                        for row in range(M.dims[a.head]):
                            e[row, c] -= M.maps[a.id][row, r]
                    eta[a.id] = e
                for b in Q.arrows:
                    acc = la.zeros(M.dims[b.tail], M.dims[b.head])
                    for a in Q.arrows:
                        for coef, u, v in splits[(a.id, b.id)]:
                            acc += la.mul(la.mul(M.path_matrix(u), eta[a.id]), M.path_matrix(v)) * coef
                    if not la.is_zero(acc):
                        return False
    return True


# ---------------------------------------------------------------- minimal presentation

@dataclass
class PresentationData:
    P1_mult: tuple
    P0_mult: tuple
    map_matrix: list          # per-vertex matrices P1(i) -> P0(i)
    P1: FreeModule
    P0: FreeModule
    U1: list                  # per k, basis of U'_k inside M_in(k)
    M0: list                  # per k, basis of M^(0)(k) inside M(k)
    minimal: bool


def _in_coords(M, k):
    """Offsets of the arrow blocks of M_in(k)."""
    offs = {}
    o = 0
    for a in M.Q.in_arrows(k):
        offs[a.id] = o
        o += M.dims[a.tail]
    return offs, o


def minimal_presentation(alg: JacobianAlgebra, M: DecoratedRep, rng_seed: int | None = None,
                         check: bool = True) -> PresentationData:
    Q = alg.Q
    n = Q.n
    if check and not check_relations(M):
        raise ValueError("module violates the Jacobian relations")
    rng = random.Random(rng_seed) if rng_seed is not None else None
    tri = [triangle(M, k) for k in range(n)]
    U1, U2, M0, IA, KA = [], [], [], [], []
    for k in range(n):
        t = tri[k]
        din = t.alpha.ncols()
        ker_a = la.kernel(t.alpha)
        im_g = la.image(t.gamma) if t.gamma.ncols() else la.zeros(din, 0)
        c = la.solve_in_basis(ker_a, im_g)
        U1.append(la.mul(ker_a, la.complement(c, rng)))
        U2.append(la.complement(ker_a, rng))
        im_a = la.image(t.alpha) if din else la.zeros(M.dims[k], 0)
        M0.append(la.complement(im_a, rng))
        IA.append(im_a)
        KA.append(ker_a)
    # X0 = sum P_k (x) M(k), written in the adapted basis [M0 | im alpha] of M(k)
    Kp = FreeModule(alg, [(k, M0[k].ncols()) for k in range(n)])
    Kpp = FreeModule(alg, [(k, IA[k].ncols()) for k in range(n)])
    Pp = FreeModule(alg, [(k, KA[k].ncols()) for k in range(n)])
    Ppp = FreeModule(alg, [(k, U2[k].ncols()) for k in range(n)])
    P1 = FreeModule(alg, [(k, U1[k].ncols()) for k in range(n)])
    adapted = [la.inverse(la.hstack([M0[k], IA[k]], nrows=M.dims[k])) for k in range(n)]

    def phi_on(space_basis, mod):
        """phi applied to p (x) u for u a column of space_basis[k] (inside M_in(k)); returns per-vertex pairs."""
        mats_p, mats_pp = [], []
        for i in range(n):
            A = la.zeros(len(Kp.basis[i]), len(mod.basis[i]))
            Bm = la.zeros(len(Kpp.basis[i]), len(mod.basis[i]))
            for col, (k, p, j) in enumerate(mod.basis[i]):
                u = la.get_block(space_basis[k], 0, space_basis[k].nrows(), j, j + 1)
                offs, _ = _in_coords(M, k)
                terms = []   # (vertex k', path, vector in M(k'))
                for a in Q.in_arrows(k):
                    m = la.get_block(u, offs[a.id], offs[a.id] + M.dims[a.tail], 0, 1)
                    for q, x in alg.product(p, (a.id,)).items():
                        terms.append((a.tail, q, m * x))
                terms.append((k, p, -la.mul(tri[k].alpha, u)))
                for kk, q, vec in terms:
                    co = la.mul(adapted[kk], vec)
                    d0 = M0[kk].ncols()
                    for r in range(co.nrows()):
                        x = co[r, 0]
                        if x == 0:
                            continue
                        if r < d0:
                            A[Kp.index[i][(kk, q, r)], col] += x
                        else:
                            Bm[Kpp.index[i][(kk, q, r - d0)], col] += x
            mats_p.append(A)
            mats_pp.append(Bm)
        return mats_p, mats_pp

    phi1_p, phi1_pp = phi_on(U1, P1)
    phi2_p, phi2_pp = phi_on(U2, Ppp)
    maps = []
    for i in range(n):
        # project onto K' along phi(P''); the K''-part of phi(P'') is invertible
        A2, B2 = phi2_p[i], phi2_pp[i]
        A1, B1 = phi1_p[i], phi1_pp[i]
        if B2.nrows() != B2.ncols() or (B2.nrows() and la.rank(B2) != B2.nrows()):
            raise AssertionError("phi does not map P'' isomorphically onto K'' modulo K'")
        if B2.nrows():
            maps.append(A1 - la.mul(A2, la.mul(la.inverse(B2), B1)))
        else:
            maps.append(A1)
    pres = PresentationData(tuple(U1[k].ncols() for k in range(n)), tuple(M0[k].ncols() for k in range(n)),
                            maps, P1, Kp, U1, M0, False)
    if check:
        _check_presentation(alg, M, pres)
    pres.minimal = _is_minimal(alg, pres)
    if check and not pres.minimal:
        raise AssertionError("presentation is not minimal")
    return pres


def _ev_on_P0(alg, M, pres):
    out = []
    for i in range(alg.Q.n):
        m = la.zeros(M.dims[i], len(pres.P0.basis[i]))
        for c, (k, p, j) in enumerate(pres.P0.basis[i]):
            col = la.mul(M.path_matrix(p), la.get_block(pres.M0[k], 0, M.dims[k], j, j + 1))
            for r in range(M.dims[i]):
                m[r, c] = col[r, 0]
        out.append(m)
    return out


def _check_presentation(alg, M, pres):
    ev = _ev_on_P0(alg, M, pres)
    for i in range(alg.Q.n):
        if la.rank(ev[i]) != M.dims[i]:
            raise AssertionError("P^(0) does not surject onto M at vertex %d" % (i + 1))
        if not _exact_at(pres.map_matrix[i], ev[i]):
            raise AssertionError("minimal presentation not exact at vertex %d" % (i + 1))
    # the map must be a module homomorphism
    R1, R0 = pres.P1.as_rep(), pres.P0.as_rep()
    for a in alg.Q.arrows:
        lhs = la.mul(R0.maps[a.id], pres.map_matrix[a.tail])
        rhs = la.mul(pres.map_matrix[a.head], R1.maps[a.id])
        if lhs != rhs:
            raise AssertionError("presentation map does not commute with arrow %s" % a.id)


def _is_minimal(alg, pres) -> bool:
    """P1/mP1 -> im/m im is an isomorphism; compared by dimension (the map is onto)."""
    n = alg.Q.n
    R0 = pres.P0.as_rep()
    W = [la.image(pres.map_matrix[i]) if pres.map_matrix[i].ncols() else la.zeros(pres.map_matrix[i].nrows(), 0)
         for i in range(n)]
    top = 0
    for i in range(n):
        parts = [la.mul(R0.maps[a.id], W[a.tail]) for a in alg.Q.arrows if a.head == i and W[a.tail].ncols()]
        mW = la.rank(la.hstack(parts)) if parts else 0
        top += W[i].ncols() - mW
    return top == sum(pres.P1_mult)


# ---------------------------------------------------------------- E^proj

def e_proj_formula(M: DecoratedRep, N: DecoratedRep) -> int:
    gstar = rep_g_vector(dual_rep(M), check=False)
    return hom_dim(M, N) + sum(g * d for g, d in zip(gstar, N.dims))


def e_proj_dimension(alg: JacobianAlgebra, M: DecoratedRep, N: DecoratedRep,
                     pres: PresentationData | None = None, check: bool = True) -> int:
    """dim coker(Hom(P0, N) -> Hom(P1, N)) + dim Hom_R(V, N), checked against the closed formula."""
    n = alg.Q.n
    pres = minimal_presentation(alg, M, check=check) if pres is None else pres
    # Hom(P_k (x) U, N) = Hom(U, N(k)); unknowns sigma_k : M0(k) -> N(k), row-major
    offs0 = [0]
    for k in range(n):
        offs0.append(offs0[-1] + N.dims[k] * pres.P0_mult[k])
    offs1 = [0]
    for k in range(n):
        offs1.append(offs1[-1] + N.dims[k] * pres.P1_mult[k])
    Phi = la.zeros(offs1[-1], offs0[-1])
    for k in range(n):
        # generators e_k (x) u_j of P1 at vertex k
        for j in range(pres.P1_mult[k]):
            col_index = pres.P1.index[k][(k, (k,), j)]
            for r0, (kk, p, jj) in enumerate(pres.P0.basis[k]):
                x = pres.map_matrix[k][r0, col_index]
                if x == 0:
                    continue
                pn = N.path_matrix(p)          # N(kk) -> N(k)
                # contribution x * p_N sigma_kk e_jj to tau_k e_j
                for r in range(N.dims[k]):
                    for s in range(N.dims[kk]):
                        y = pn[r, s]
                        if y == 0:
                            continue
                        row = offs1[k] + r * pres.P1_mult[k] + j
                        col = offs0[kk] + s * pres.P0_mult[kk] + jj
                        Phi[row, col] += x * y
    rk = la.rank(Phi)
    coker = offs1[-1] - rk
    if check and offs0[-1] - rk != hom_dim(M, N):
        raise AssertionError("kernel of the induced map differs from Hom(M, N)")
    total = coker + sum(v * d for v, d in zip(M.dec, N.dims))
    if check:
        expect = e_proj_formula(M, N)
        if total != expect:
            raise AssertionError("E^proj dimension %d differs from the formula value %d" % (total, expect))
    return total
