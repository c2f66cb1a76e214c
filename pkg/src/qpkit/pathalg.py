"""Quivers, truncated path algebras and quivers with potentials.

Paths are tuples of arrow ids written right to left: (a1, ..., ad) means ad is
applied first, so t(a_p) == h(a_{p+1}). The trivial path at vertex i is the
one-element tuple (i,) holding an int. Everything lives modulo paths of
length >= N.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

from flint import fmpq

from . import linalg as la


class Arrow(NamedTuple):
    id: str
    tail: int
    head: int


def _valid_id(s: str) -> bool:
    return bool(s) and not any(ch in s for ch in "* \t\n#")


@dataclass(frozen=True)
class Quiver:
    n: int
    arrows: tuple

    def __post_init__(self):
        seen = set()
        arrows = tuple(Arrow(*a) for a in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        for a in arrows:
            if not _valid_id(a.id):
                raise ValueError("invalid arrow id %r" % (a.id,))
            if a.id in seen:
                raise ValueError("duplicate arrow id %r" % a.id)
            seen.add(a.id)
            if not (0 <= a.tail < self.n and 0 <= a.head < self.n):
                raise ValueError("arrow %s has a vertex out of range" % a.id)
            if a.tail == a.head:
                raise ValueError("loop %s is not allowed" % a.id)
        object.__setattr__(self, "_by_id", {a.id: a for a in arrows})

    def arrow(self, aid: str) -> Arrow:
        return self._by_id[aid]

    def __contains__(self, aid) -> bool:
        return aid in self._by_id

    @property
    def ids(self) -> list:
        return [a.id for a in self.arrows]

    def sorted_arrows(self) -> list:
        return sorted(self.arrows, key=lambda a: (a.tail, a.head, a.id))

    def in_arrows(self, k: int) -> list:
        return [a for a in self.sorted_arrows() if a.head == k]

    def out_arrows(self, k: int) -> list:
        return [a for a in self.sorted_arrows() if a.tail == k]

    def arrows_between(self, i: int, j: int) -> list:
        return [a for a in self.sorted_arrows() if a.tail == i and a.head == j]

    def has_two_cycle_at(self, k: int) -> bool:
        outs = {a.head for a in self.arrows if a.tail == k}
        ins = {a.tail for a in self.arrows if a.head == k}
        return bool(outs & ins)

    def two_cycle_pairs(self) -> list:
        pairs = set()
        for a in self.arrows:
            for b in self.arrows:
                if a.tail == b.head and a.head == b.tail:
                    pairs.add((min(a.tail, a.head), max(a.tail, a.head)))
        return sorted(pairs)

    def to_matrix(self) -> tuple:
        """b_ij = #(j -> i) - #(i -> j)."""
        B = [[0] * self.n for _ in range(self.n)]
        for a in self.arrows:
            B[a.head][a.tail] += 1
            B[a.tail][a.head] -= 1
        return tuple(tuple(r) for r in B)

    def rename(self, mapping: Mapping[str, str]) -> "Quiver":
        return Quiver(self.n, tuple(Arrow(mapping.get(a.id, a.id), a.tail, a.head) for a in self.arrows))

    def without(self, ids: Iterable[str]) -> "Quiver":
        drop = set(ids)
        return Quiver(self.n, tuple(a for a in self.arrows if a.id not in drop))

    def opposite(self) -> "Quiver":
        return Quiver(self.n, tuple(Arrow(a.id, a.head, a.tail) for a in self.arrows))

    def same_shape(self, other: "Quiver") -> bool:
        return self.n == other.n and self.to_matrix() == other.to_matrix() and len(self.arrows) == len(other.arrows)


def quiver_from_matrix(B) -> Quiver:
    """[b_ij]_+ arrows from j to i, named a1, a2, ... in (tail, head) order."""
    n = len(B)
    for i in range(n):
        if len(B[i]) != n:
            raise ValueError("matrix must be square")
        for j in range(n):
            if B[i][j] != -B[j][i]:
                raise ValueError("matrix must be skew-symmetric")
    arrows = []
    for j in range(n):
        for i in range(n):
            for _ in range(max(B[i][j], 0)):
                arrows.append(Arrow("a%d" % (len(arrows) + 1), j, i))
    return Quiver(n, tuple(arrows))


# ---------------------------------------------------------------- paths

def is_trivial(p: tuple) -> bool:
    return isinstance(p[0], int)


def path_head(Q: Quiver, p: tuple) -> int:
    return p[0] if is_trivial(p) else Q.arrow(p[0]).head


def path_tail(Q: Quiver, p: tuple) -> int:
    return p[0] if is_trivial(p) else Q.arrow(p[-1]).tail


def path_len(p: tuple) -> int:
    return 0 if is_trivial(p) else len(p)


def path_mul(Q: Quiver, p: tuple, q: tuple):
    """p*q (q first); None if not composable."""
    if is_trivial(p):
        return q if path_head(Q, q) == p[0] else None
    if is_trivial(q):
        return p if path_tail(Q, p) == q[0] else None
    if Q.arrow(p[-1]).tail != Q.arrow(q[0]).head:
        return None
    return p + q


def is_composable(Q: Quiver, p: Sequence[str]) -> bool:
    return all(Q.arrow(p[i]).tail == Q.arrow(p[i + 1]).head for i in range(len(p) - 1))


def format_path(p: tuple) -> str:
    return "e%d" % (p[0] + 1) if is_trivial(p) else "*".join(p)


def parse_path(text: str) -> tuple:
    text = text.strip()
    if text.startswith("e") and text[1:].isdigit():
        return (int(text[1:]) - 1,)
    return tuple(text.split("*"))


class PathVector:
    """Finite linear combination of paths, truncated below length N."""

    __slots__ = ("Q", "N", "terms")

    def __init__(self, Q: Quiver, N: int, terms: Mapping[tuple, object] | None = None):
        self.Q = Q
        self.N = N
        out = {}
        if terms:
            for p, c in terms.items():
                if path_len(p) >= N:
                    continue
                c = fmpq(c) if not isinstance(c, fmpq) else c
                if c != 0:
                    v = out.get(p, 0) + c
                    if v != 0:
                        out[p] = v
                    else:
                        out.pop(p, None)
        self.terms = out

    @classmethod
    def _raw(cls, Q, N, terms):
        v = cls.__new__(cls)
        v.Q, v.N, v.terms = Q, N, terms
        return v

    @classmethod
    def arrow(cls, Q: Quiver, N: int, aid: str) -> "PathVector":
        return cls._raw(Q, N, {(aid,): fmpq(1)} if N > 1 else {})

    @classmethod
    def idempotent(cls, Q: Quiver, N: int, i: int) -> "PathVector":
        return cls._raw(Q, N, {(i,): fmpq(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "PathVector") -> "PathVector":
        out = dict(self.terms)
        for p, c in other.terms.items():
            v = out.get(p, 0) + c
            if v != 0:
                out[p] = v
            else:
                out.pop(p, None)
        return PathVector._raw(self.Q, self.N, out)

    def __neg__(self):
        return PathVector._raw(self.Q, self.N, {p: -c for p, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PathVector":
        c = fmpq(c)
        if c == 0:
            return PathVector._raw(self.Q, self.N, {})
        return PathVector._raw(self.Q, self.N, {p: c * x for p, x in self.terms.items()})

    def __mul__(self, other: "PathVector") -> "PathVector":
        Q, N = self.Q, self.N
        out: dict = {}
        for p, c in self.terms.items():
            lp = path_len(p)
            for q, d in other.terms.items():
                if lp + path_len(q) >= N:
                    continue
                r = path_mul(Q, p, q)
                if r is None:
                    continue
                v = out.get(r, 0) + c * d
                if v != 0:
                    out[r] = v
                else:
                    out.pop(r, None)
        return PathVector._raw(Q, N, out)

    def __eq__(self, other):
        return isinstance(other, PathVector) and self.terms == other.terms

    def min_degree(self) -> int:
        return min((path_len(p) for p in self.terms), default=self.N)

    def homogeneous_part(self, d: int) -> "PathVector":
        return PathVector._raw(self.Q, self.N, {p: c for p, c in self.terms.items() if path_len(p) == d})

    def __repr__(self):
        return "PathVector(%s)" % format_terms(self.terms)


def format_terms(terms: Mapping[tuple, object]) -> str:
    if not terms:
        return "0"
    parts = ["%s*%s" % (c, format_path(p)) if c != 1 else format_path(p)
             for p, c in sorted(terms.items(), key=lambda t: (path_len(t[0]), str(t[0])))]
    return " + ".join(parts)


# ---------------------------------------------------------------- potentials

def cyclic_normal_form(c: tuple) -> tuple:
    return min(c[i:] + c[:i] for i in range(len(c)))


class Potential:
    """Linear combination of cycles, each stored as its least rotation."""

    __slots__ = ("Q", "N", "terms")

    def __init__(self, Q: Quiver, N: int, terms: Mapping[tuple, object] | None = None):
        self.Q = Q
        self.N = N
        out: dict = {}
        for p, c in (terms or {}).items():
            if is_trivial(p) or len(p) >= N:
                continue
            if not is_composable(Q, p) or Q.arrow(p[-1]).tail != Q.arrow(p[0]).head:
                raise ValueError("%s is not a cycle" % format_path(p))
            c = fmpq(c) if not isinstance(c, fmpq) else c
            if c == 0:
                continue
            nf = cyclic_normal_form(p)
            v = out.get(nf, 0) + c
            if v != 0:
                out[nf] = v
            else:
                out.pop(nf, None)
        self.terms = out

    @classmethod
    def from_pathvector(cls, v: PathVector) -> "Potential":
        return cls(v.Q, v.N, {p: c for p, c in v.terms.items() if not is_trivial(p)})

    def as_pathvector(self) -> PathVector:
        return PathVector._raw(self.Q, self.N, dict(self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def degree_part(self, d: int) -> dict:
        return {p: c for p, c in self.terms.items() if len(p) == d}

    def min_degree(self) -> int:
        return min((len(p) for p in self.terms), default=self.N)

    def __eq__(self, other):
        return isinstance(other, Potential) and self.terms == other.terms

    def __add__(self, other):
        t = dict(self.terms)
        for p, c in other.terms.items():
            t[p] = t.get(p, 0) + c
        return Potential(self.Q, self.N, t)

    def __repr__(self):
        return "Potential(%s)" % format_terms(self.terms)


@dataclass(frozen=True)
class QPData:
    quiver: Quiver
    potential: Potential
    N: int

    def is_reduced(self) -> bool:
        return self.potential.min_degree() >= 3


def make_qp(Q: Quiver, terms: Mapping[tuple, object] | None = None, N: int = 10) -> QPData:
    return QPData(Q, Potential(Q, N, terms or {}), N)


def cyclic_derivative(S: Potential, a: str) -> PathVector:
    Q = S.Q
    arr = Q.arrow(a)
    out: dict = {}
    for c, coef in S.terms.items():
        d = len(c)
        for p in range(d):
            if c[p] != a:
                continue
            rest = c[p + 1:] + c[:p]
            if not rest:
                rest = (arr.tail,)
            out[rest] = out.get(rest, 0) + coef
    return PathVector(Q, S.N, out)


def second_derivative(S: Potential, b: str, a: str) -> PathVector:
    """Sum of remainders over cyclic spots where b immediately follows a (b applied after a)."""
    Q = S.Q
    if Q.arrow(a).head != Q.arrow(b).tail:
        raise ValueError("arrows %s, %s do not meet at a common vertex" % (b, a))
    out: dict = {}
    for c, coef in S.terms.items():
        d = len(c)
        for p in range(d):
            if c[p] != b or c[(p + 1) % d] != a:
                continue
            if d == 2:
                rest = (Q.arrow(a).tail,)
            else:
                rest = tuple(c[(p + 2 + i) % d] for i in range(d - 2))
            out[rest] = out.get(rest, 0) + coef
    return PathVector(Q, S.N, out)


def h_matrix(S: Potential, k: int) -> list:
    """Rows: arrows into k; columns: arrows out of k; entries second derivatives."""
    ins = S.Q.in_arrows(k)
    outs = S.Q.out_arrows(k)
    return [[second_derivative(S, b.id, a.id) for b in outs] for a in ins]


# ---------------------------------------------------------------- right-equivalences

class RightEquivalence:
    """Arrow substitution a -> images[a]; arrows not listed map to themselves."""

    def __init__(self, Q: Quiver, N: int, images: Mapping[str, PathVector] | None = None):
        self.Q = Q
        self.N = N
        self.images = {}
        for a, v in (images or {}).items():
            arr = Q.arrow(a)
            for p in v.terms:
                if path_len(p) == 0:
                    raise ValueError("image of %s has a constant term" % a)
                if path_head(Q, p) != arr.head or path_tail(Q, p) != arr.tail:
                    raise ValueError("image of %s is not parallel to it" % a)
            if v.terms != {(a,): 1}:
                self.images[a] = v

    @classmethod
    def identity(cls, Q: Quiver, N: int) -> "RightEquivalence":
        return cls(Q, N)

    def image(self, a: str) -> PathVector:
        v = self.images.get(a)
        return v if v is not None else PathVector.arrow(self.Q, self.N, a)

    def is_identity(self) -> bool:
        return not self.images

    def linear_part(self) -> tuple:
        """(arrow order, matrix L) with L[i][j] the coefficient of arrow j in the image of arrow i."""
        ids = self.Q.ids
        idx = {a: i for i, a in enumerate(ids)}
        L = la.zeros(len(ids), len(ids))
        for a in ids:
            for p, c in self.image(a).terms.items():
                if len(p) == 1:
                    L[idx[a], idx[p[0]]] = c
        return ids, L

    def compose(self, first: "RightEquivalence") -> "RightEquivalence":
        """self o first: a -> self(first(a))."""
        ids = set(self.images) | set(first.images)
        imgs = {a: apply_equivalence(self, first.image(a)) for a in ids}
        return RightEquivalence(self.Q, self.N, imgs)

    def inverse(self) -> "RightEquivalence":
        Q, N = self.Q, self.N
        ids, L = self.linear_part()
        if la.rank(L) != len(ids):
            raise ValueError("linear part is not invertible")
        Linv = la.inverse(L) if ids else L
        higher = {a: PathVector._raw(Q, N, {p: c for p, c in self.image(a).terms.items() if len(p) > 1})
                  for a in ids}
        psi = RightEquivalence(Q, N, {b: _lin_comb(Q, N, ids, Linv, b) for b in ids})
        for _ in range(N):
            r = {a: PathVector.arrow(Q, N, a) - apply_equivalence(psi, higher[a]) for a in ids}
            new_imgs = {}
            for bi, b in enumerate(ids):
                acc = PathVector(Q, N)
                for ai, a in enumerate(ids):
                    c = Linv[bi, ai]
                    if c != 0:
                        acc = acc + r[a].scale(c)
                new_imgs[b] = acc
            new = RightEquivalence(Q, N, new_imgs)
            if all(new.image(b) == psi.image(b) for b in ids):
                return new
            psi = new
        return psi

    def restrict_to(self, Q2: Quiver) -> "RightEquivalence":
        return RightEquivalence(Q2, self.N, {a: PathVector(Q2, self.N, v.terms) for a, v in self.images.items()
                                             if a in Q2})


def _lin_comb(Q, N, ids, Linv, b):
    bi = ids.index(b)
    return PathVector(Q, N, {(a,): Linv[bi, ai] for ai, a in enumerate(ids) if Linv[bi, ai] != 0})


def apply_equivalence(phi: RightEquivalence, v) -> PathVector:
    """Substitute every arrow by its image and expand (Potential in, Potential out)."""
    if isinstance(v, Potential):
        return Potential.from_pathvector(apply_equivalence(phi, v.as_pathvector()))
    Q, N = phi.Q, min(phi.N, v.N)
    if phi.is_identity():
        return PathVector(Q, N, v.terms)
    cache: dict = {}
    out = PathVector(Q, N)
    acc: dict = {}
    for p, c in v.terms.items():
        if is_trivial(p):
            acc[p] = acc.get(p, 0) + c
            continue
        img = _image_of_path(phi, p, cache, N)
        for q, d in img.terms.items():
            val = acc.get(q, 0) + c * d
            if val != 0:
                acc[q] = val
            else:
                acc.pop(q, None)
    out.terms = acc
    return out


def _image_of_path(phi, p, cache, N):
    # suffix products are shared between terms through the cache
    if p in cache:
        return cache[p]
    if len(p) == 1:
        r = phi.image(p[0])
        r = PathVector._raw(phi.Q, N, {q: c for q, c in r.terms.items() if path_len(q) < N})
    else:
        r = phi.image(p[0])
        r = PathVector._raw(phi.Q, N, r.terms) * _image_of_path(phi, p[1:], cache, N)
    cache[p] = r
    return r


# ---------------------------------------------------------------- premutation

def composite_id(b: str, a: str) -> str:
    return "[%s.%s]" % (b, a)


def reversed_id(a: str) -> str:
    return a + "'"


def bracket_cycle(Q: Quiver, c: tuple, k: int) -> tuple:
    """Rotate a cycle away from k and replace each passage b a through k by [b.a]."""
    d = len(c)
    start = next((i for i in range(d) if Q.arrow(c[i]).head != k), None)
    if start is None:
        raise ValueError("cycle lies entirely at vertex %d" % k)
    r = c[start:] + c[:start]
    out = []
    i = 0
    while i < d:
        a = Q.arrow(r[i])
        if a.tail == k:
            # r[i] leaves k, r[i+1] enters it
            out.append(composite_id(r[i], r[i + 1]))
            i += 2
        else:
            out.append(r[i])
            i += 1
    return tuple(out)


def premutate_qp(qp: QPData, k: int) -> QPData:
    Q, N = qp.quiver, qp.N
    if not 0 <= k < Q.n:
        raise ValueError("vertex out of range")
    if Q.has_two_cycle_at(k):
        raise ValueError("2-cycle through vertex %d: mutation undefined" % (k + 1))
    ins = Q.in_arrows(k)
    outs = Q.out_arrows(k)
    arrows = [a for a in Q.arrows if a.tail != k and a.head != k]
    for b in outs:
        for a in ins:
            arrows.append(Arrow(composite_id(b.id, a.id), a.tail, b.head))
    for a in ins:
        arrows.append(Arrow(reversed_id(a.id), k, a.tail))
    for b in outs:
        arrows.append(Arrow(reversed_id(b.id), b.head, k))
    Qt = Quiver(Q.n, tuple(arrows))
    terms: dict = {}
    for c, coef in qp.potential.terms.items():
        bc = bracket_cycle(Q, c, k)
        terms[bc] = terms.get(bc, 0) + coef
    for b in outs:
        for a in ins:
            cyc = (composite_id(b.id, a.id), reversed_id(a.id), reversed_id(b.id))
            terms[cyc] = terms.get(cyc, 0) + 1
    return QPData(Qt, Potential(Qt, N, terms), N)


# ---------------------------------------------------------------- splitting

class TruncationError(RuntimeError):
    pass


def _diagonalise_pair(W: la.Mat):
    """Invertible L, C with L W C = diag(I_r, 0)."""
    p, q = W.nrows(), W.ncols()
    aug = la.hstack([W, la.identity(p)])
    R, pivots = la.rref(aug)
    # E W = G where E is the right block of the rref of [W | I]
    E = la.get_block(R, 0, p, q, q + p)
    G = la.get_block(R, 0, p, 0, q)
    piv = [c for c in pivots if c < q]
    r = len(piv)
    C = la.zeros(q, q)
    for i, c in enumerate(piv):
        C[c, i] = 1
    col = r
    for f in range(q):
        if f in piv:
            continue
        C[f, col] = 1
        for i, c in enumerate(piv):
            C[c, col] = -G[i, f]
        col += 1
    return E, C, r


def split_reduce(qp: QPData):
    """Return (reduced qp, number of trivial 2-cycles, phi, trivial arrow ids).

    phi applied to the potential equals sum x_v y_v + S_red modulo m^N.
    """
    Q, N, S = qp.quiver, qp.N, qp.potential
    deg2 = S.degree_part(2)
    images: dict = {}
    pairs = []
    for (i, j) in Q.two_cycle_pairs():
        X = Q.arrows_between(i, j)
        Y = Q.arrows_between(j, i)
        W = la.zeros(len(X), len(Y))
        for s, x in enumerate(X):
            for t, y in enumerate(Y):
                W[s, t] = deg2.get(cyclic_normal_form((x.id, y.id)), 0)
        if la.rank(W) == 0:
            continue
        E, C, r = _diagonalise_pair(W)
        # x_s -> sum_u E[u,s] x_u, y_t -> sum_v C[t,v] y_v gives E W C
        for s, x in enumerate(X):
            images[x.id] = PathVector(Q, N, {(X[u].id,): E[u, s] for u in range(len(X)) if E[u, s] != 0})
        for t, y in enumerate(Y):
            images[y.id] = PathVector(Q, N, {(Y[v].id,): C[t, v] for v in range(len(Y)) if C[t, v] != 0})
        pairs.extend((X[u].id, Y[u].id) for u in range(r))
    phi = RightEquivalence(Q, N, images)
    cur = apply_equivalence(phi, S)
    cur, phi = eliminate_pairs(cur, pairs, phi)
    trivial = {x for x, _ in pairs} | {y for _, y in pairs}
    Qred = Q.without(trivial)
    red_terms = {c: v for c, v in cur.terms.items() if not any(a in trivial for a in c)}
    reduced = QPData(Qred, Potential(Qred, N, red_terms), N)
    return reduced, len(pairs), phi, pairs


def eliminate_pairs(S: Potential, pairs: Sequence[tuple], phi: RightEquivalence | None = None):
    """Remove every occurrence of the trivial arrows outside the 2-cycles x*y of pairs.

    S must contain each x*y with coefficient 1. Terms z*u with z trivial are
    cancelled by the substitution partner(z) -> partner(z) - u, repeated until
    no such term survives below degree N. Returns (new potential, phi o old phi).
    """
    Q, N = S.Q, S.N
    if phi is None:
        phi = RightEquivalence.identity(Q, N)
    trivial = {x for x, _ in pairs} | {y for _, y in pairs}
    partner = {}
    for x, y in pairs:
        partner[x] = y
        partner[y] = x
    base = {cyclic_normal_form(pr) for pr in pairs}
    cur = S
    for _ in range(N + 1):
        corr: dict = {}
        for c, coef in cur.terms.items():
            if c in base:
                if coef != 1:
                    raise AssertionError("quadratic part not normalised")
                continue
            at = next((i for i, a in enumerate(c) if a in trivial), None)
            if at is None:
                continue
            r = c[at:] + c[:at]
            d = corr.setdefault(partner[r[0]], {})
            d[r[1:]] = d.get(r[1:], 0) + coef
        if not corr:
            return cur, phi
        step = RightEquivalence(Q, N, {a: PathVector.arrow(Q, N, a) - PathVector(Q, N, t) for a, t in corr.items()})
        cur = apply_equivalence(step, cur)
        phi = step.compose(phi)
    raise TruncationError("splitting iteration did not stabilise below degree %d" % N)


# ---------------------------------------------------------------- mutation

@dataclass
class QPMutation:
    """Everything needed to transport representations across one QP mutation."""

    source: QPData
    k: int
    premutated: QPData
    phi: RightEquivalence          # on the premutated quiver
    pairs: list                    # trivial arrow pairs deleted by the reduction
    relabel: dict                  # reduced-quiver id -> final id
    qp: QPData                     # final reduced, relabelled QP
    _phi_inv: RightEquivalence | None = field(default=None, repr=False)

    @property
    def degenerate(self) -> bool:
        return bool(self.qp.quiver.two_cycle_pairs())

    @property
    def phi_inverse(self) -> RightEquivalence:
        if self._phi_inv is None:
            self._phi_inv = self.phi.inverse()
        return self._phi_inv


def canonical_relabel(Q: Quiver) -> dict:
    order = sorted(Q.arrows, key=lambda a: (a.tail, a.head, a.id))
    return {a.id: "a%d" % (i + 1) for i, a in enumerate(order)}


def rename_potential(S: Potential, Q2: Quiver, mapping: Mapping[str, str]) -> Potential:
    return Potential(Q2, S.N, {tuple(mapping.get(a, a) for a in c): v for c, v in S.terms.items()})


def mutate_qp(qp: QPData, k: int, relabel: bool = True) -> QPMutation:
    pre = premutate_qp(qp, k)
    red, _count, phi, pairs = split_reduce(pre)
    mapping = canonical_relabel(red.quiver) if relabel else {a: a for a in red.quiver.ids}
    Q2 = red.quiver.rename(mapping)
    final = QPData(Q2, rename_potential(red.potential, Q2, mapping), qp.N)
    return QPMutation(qp, k, pre, phi, pairs, mapping, final)


# ---------------------------------------------------------------- random potentials and cycles

def enumerate_cycles(Q: Quiver, max_degree: int) -> list:
    """One representative (least rotation) per cyclic class of cycles of length 2..max_degree."""
    found = set()
    out_of: dict = {}
    for a in Q.sorted_arrows():
        out_of.setdefault(a.tail, []).append(a)

    def extend(path_rev, start):
        # path_rev lists arrows in application order
        last = path_rev[-1]
        if len(path_rev) >= 2 and last.head == start:
            cyc = tuple(a.id for a in reversed(path_rev))
            found.add(cyclic_normal_form(cyc))
        if len(path_rev) == max_degree:
            return
        for a in out_of.get(last.head, []):
            extend(path_rev + [a], start)

    for a in Q.sorted_arrows():
        extend([a], a.tail)
    return sorted(found, key=lambda c: (len(c), c))


def random_potential(Q: Quiver, max_degree: int, rng_seed: int, N: int = 10, coeff_range: int = 3) -> Potential:
    if max_degree >= N:
        raise ValueError("max_degree must be below the truncation order")
    rng = random.Random(rng_seed)
    terms = {}
    for c in enumerate_cycles(Q, max_degree):
        v = 0
        while v == 0:
            v = rng.randint(-coeff_range, coeff_range)
        terms[c] = v
    return Potential(Q, N, terms)


# ---------------------------------------------------------------- Jacobian algebra basis

def enumerate_paths(Q: Quiver, max_len: int) -> list:
    """All paths of length <= max_len, trivial ones first."""
    paths = [(i,) for i in range(Q.n)]
    frontier = [(a.id,) for a in Q.sorted_arrows()]
    length = 1
    while frontier and length <= max_len:
        paths.extend(frontier)
        nxt = []
        for p in frontier:
            t = Q.arrow(p[-1]).tail
            for a in Q.sorted_arrows():
                if a.head == t:
                    nxt.append(p + (a.id,))
        frontier = nxt
        length += 1
    return paths


@dataclass
class JacobianBasis:
    qp: QPData
    paths: list            # all paths of length < N
    basis: list            # coset representatives
    certificate: bool
    _rows: list = field(repr=False, default_factory=list)   # (pivot path, {path: coeff})

    def reduce(self, v: Mapping[tuple, object]) -> dict:
        """Coordinates (by basis path) of the class of v."""
        v = {p: fmpq(c) for p, c in v.items() if path_len(p) < self.qp.N and c != 0}
        for piv, row in self._rows:
            c = v.pop(piv, None)
            if c:
                for p, x in row.items():
                    val = v.get(p, 0) - c * x
                    if val != 0:
                        v[p] = val
                    else:
                        v.pop(p, None)
        return v

    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.basis)}

    def multiply(self, p: tuple, q: tuple) -> dict:
        r = path_mul(self.qp.quiver, p, q)
        if r is None:
            return {}
        return self.reduce({r: 1})


def jacobian_quotient_basis(qp: QPData) -> JacobianBasis:
    Q, N, S = qp.quiver, qp.N, qp.potential
    paths = enumerate_paths(Q, N - 1)
    # columns ordered longest first so pivots prefer long paths
    order = sorted(paths, key=lambda p: (-path_len(p), str(p)))
    col = {p: i for i, p in enumerate(order)}
    gens = []
    for a in Q.arrows:
        D = cyclic_derivative(S, a.id)
        if D.is_zero():
            continue
        m = D.min_degree()
        for p in paths:
            if path_tail(Q, p) != a.tail:
                continue
            for q in paths:
                if path_head(Q, q) != a.head or path_len(p) + path_len(q) + m >= N:
                    continue
                left = PathVector._raw(Q, N, {p: fmpq(1)})
                right = PathVector._raw(Q, N, {q: fmpq(1)})
                g = (left * D * right).terms
                if g:
                    gens.append(g)
    rows = []
    if gens:
        M = la.zeros(len(gens), len(order))
        for i, g in enumerate(gens):
            for p, c in g.items():
                M[i, col[p]] = c
        R, pivots = la.rref(M)
        for i, pc in enumerate(pivots):
            row = {order[j]: R[i, j] for j in range(len(order)) if R[i, j] != 0 and j != pc}
            rows.append((order[pc], row))
    pivot_paths = {p for p, _ in rows}
    basis = [p for p in paths if p not in pivot_paths]
    jb = JacobianBasis(qp, paths, basis, False, rows)
    top = [p for p in paths if path_len(p) == N - 1]
    jb.certificate = all(not jb.reduce({p: 1}) for p in top)
    return jb


# ---------------------------------------------------------------- file formats

def read_quiver(text: str) -> Quiver:
    lines = [l.split("#")[0].strip() for l in text.splitlines()]
    lines = [l for l in lines if l]
    if not lines:
        raise ValueError("empty quiver file")
    n = int(lines[0])
    arrows = []
    for l in lines[1:]:
        parts = l.split()
        if len(parts) != 3:
            raise ValueError("bad arrow line %r" % l)
        arrows.append(Arrow(parts[0], int(parts[1]) - 1, int(parts[2]) - 1))
    return Quiver(n, tuple(arrows))


def write_quiver(Q: Quiver) -> str:
    return "\n".join([str(Q.n)] + ["%s %d %d" % (a.id, a.tail + 1, a.head + 1) for a in Q.arrows]) + "\n"


def read_potential(text: str, Q: Quiver, N: int) -> Potential:
    terms = {}
    for l in text.splitlines():
        l = l.split("#")[0].strip()
        if not l:
            continue
        parts = l.split()
        if len(parts) != 2:
            raise ValueError("bad potential line %r" % l)
        coeff = fmpq(*[int(x) for x in parts[0].split("/")])
        p = parse_path(parts[1])
        for a in p:
            if a not in Q:
                raise ValueError("unknown arrow %r" % a)
        terms[p] = terms.get(p, 0) + coeff
    return Potential(Q, N, terms)


def write_potential(S: Potential) -> str:
    items = sorted(S.terms.items(), key=lambda t: (len(t[0]), t[0]))
    return "".join("%s  %s\n" % (c, format_path(p)) for p, c in items)
