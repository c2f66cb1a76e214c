"""Exchange matrices and the g-vector / F-polynomial / h-vector recurrences.

Vertex indices are 0-based in the Python API. Text words are 1-based
("2,1,2" means mutate at the second, then first, then second direction).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from flint import fmpz_mat

from .polycore import IntPolynomial, LaurentExpr, exact_divide, from_flint, to_flint, tropical_eval

Matrix = tuple


def pos(x: int) -> int:
    return x if x > 0 else 0


def as_matrix(rows) -> Matrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def is_skew_symmetric(B) -> bool:
    n = len(B)
    return all(len(r) == n for r in B) and all(B[i][j] == -B[j][i] for i in range(n) for j in range(n))


def principal_part(Bt) -> Matrix:
    n = len(Bt[0]) if Bt else 0
    return as_matrix(Bt[:n])


def mutate_matrix(Bt, k: int) -> Matrix:
    """Matrix mutation in direction k (0-based) of an m x n matrix."""
    m = len(Bt)
    n = len(Bt[0]) if m else 0
    if not 0 <= k < n:
        raise ValueError("mutation direction %d out of range for rank %d" % (k, n))
    out = []
    for i in range(m):
        row = []
        for j in range(n):
            b = Bt[i][j]
            if i == k or j == k:
                row.append(-b)
            else:
                bik, bkj = Bt[i][k], Bt[k][j]
                row.append(b + pos(bik) * pos(bkj) - pos(-bik) * pos(-bkj))
        out.append(tuple(row))
    return tuple(out)


def principal_extension(B) -> Matrix:
    """Stack the n x n identity under B."""
    B = as_matrix(B)
    if not is_skew_symmetric(B):
        raise ValueError("exchange matrix must be skew-symmetric")
    n = len(B)
    return B + tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def parse_word(text: str) -> tuple:
    """'2,1,2' -> (1, 0, 1)."""
    text = text.strip()
    if not text:
        return ()
    try:
        labels = [int(x) for x in text.split(",")]
    except ValueError:
        raise ValueError("word must be comma-separated integers: %r" % text)
    return tuple(x - 1 for x in labels)


def format_word(word: Sequence[int]) -> str:
    return ",".join(str(k + 1) for k in word)


def check_word(word: Sequence[int], n: int) -> tuple:
    word = tuple(word)
    for i, k in enumerate(word):
        if not 0 <= k < n:
            raise ValueError("label %d out of range for rank %d" % (k + 1, n))
        if i and word[i - 1] == k:
            raise ValueError("word repeats label %d at position %d" % (k + 1, i + 1))
    return word


def reduce_word(word: Sequence[int]) -> tuple:
    """Cancel adjacent repeated labels (kk is the identity path in the tree)."""
    out: list = []
    for k in word:
        if out and out[-1] == k:
            out.pop()
        else:
            out.append(k)
    return tuple(out)


@dataclass(frozen=True)
class SeedInvariants:
    g: tuple
    F: tuple
    h: tuple


@dataclass(frozen=True)
class SeedState:
    Bt: Matrix
    inv: SeedInvariants

    @property
    def g(self):
        return self.inv.g

    @property
    def F(self):
        return self.inv.F

    @property
    def h(self):
        return self.inv.h


def h_assignment(B) -> list:
    """Monomials substituted for u_i when computing h-vectors."""
    n = len(B)
    out = []
    for i in range(n):
        v = [pos(-B[j][i]) if j != i else -1 for j in range(n)]
        out.append(tuple(v))
    return out


def h_vector_of(F: IntPolynomial, B) -> tuple:
    return tropical_eval(F, h_assignment(B))


def _initial_state(B) -> SeedState:
    n = len(B)
    g = tuple(tuple(1 if i == l else 0 for i in range(n)) for l in range(n))
    F = tuple(IntPolynomial.one(n) for _ in range(n))
    h = tuple((0,) * n for _ in range(n))
    return SeedState(principal_extension(B), SeedInvariants(g, F, h))


def _size_bound(F, Bt, k, n, sign) -> int:
    """Upper bound on the term count of one side of the exchange numerator."""
    by_count = 1
    box = [0] * n
    for i in range(n):
        e = pos(sign * Bt[i][k])
        if e:
            by_count *= len(F[i]) ** e
            for j, d in enumerate(_degrees(F[i])):
                box[j] += e * d
    by_box = 1
    for d in box:
        by_box *= d + 1
    return min(by_count, by_box)


def _degrees(F: IntPolynomial) -> list:
    return [max(e[j] for e in F.exponents()) for j in range(F.nvars)]


def _step(state: SeedState, k: int, B0, max_terms: int | None = None) -> SeedState:
    n = len(B0)
    Bt = state.Bt
    g = list(state.g)
    F = list(state.F)
    cols = [tuple(B0[i][j] for i in range(n)) for j in range(n)]
    new_g = [-x for x in g[k]]
    for i in range(n):
        c = pos(Bt[i][k])
        if c:
            new_g = [x + c * y for x, y in zip(new_g, g[i])]
        d = pos(Bt[n + i][k])
        if d:
            new_g = [x - d * y for x, y in zip(new_g, cols[i])]
    if max_terms is not None:
        est = _size_bound(F, Bt, k, n, 1) + _size_bound(F, Bt, k, n, -1)
        if est > max_terms:
            raise OverflowError("F-polynomial would exceed %d terms" % max_terms)
    plus = IntPolynomial.monomial(tuple(pos(Bt[n + i][k]) for i in range(n)))
    minus = IntPolynomial.monomial(tuple(pos(-Bt[n + i][k]) for i in range(n)))
    for i in range(n):
        if pos(Bt[i][k]):
            plus = plus * F[i] ** pos(Bt[i][k])
        if pos(-Bt[i][k]):
            minus = minus * F[i] ** pos(-Bt[i][k])
    num = plus + minus
    if max_terms is not None and len(num) > max_terms:
        raise OverflowError("F-polynomial exceeds %d terms" % max_terms)
    F[k] = exact_divide(num, F[k])
    g[k] = tuple(new_g)
    h = list(state.h)
    h[k] = h_vector_of(F[k], B0)
    return SeedState(mutate_matrix(Bt, k), SeedInvariants(tuple(g), tuple(F), tuple(h)))


def invariants_along(B, word: Sequence[int], max_terms: int | None = 10 ** 6) -> list:
    """Seed states at t0, t1, ..., tp along the word (0-based labels)."""
    B = as_matrix(B)
    if not is_skew_symmetric(B):
        raise ValueError("exchange matrix must be skew-symmetric")
    word = check_word(word, len(B))
    states = [_initial_state(B)]
    for k in word:
        states.append(_step(states[-1], k, B, max_terms))
    return states


def check_transition(g: Sequence[int], h: Sequence[int], h_new: Sequence[int], B, k: int,
                     g_new: Sequence[int] | None = None):
    """Compare invariants of one target taken at two adjacent initial vertices.

    g, h are relative to the root with matrix B; g_new, h_new relative to its
    neighbour in direction k. Returns (ok, diff) where diff lists failures.
    """
    n = len(B)
    diff = []
    if g[k] != h[k] - h_new[k]:
        diff.append("g_k=%d but h_k-h'_k=%d" % (g[k], h[k] - h_new[k]))
    if max(h[k], h_new[k]) != 0:
        diff.append("max(h_k, h'_k) = %d" % max(h[k], h_new[k]))
    if g_new is not None:
        expect = []
        for j in range(n):
            if j == k:
                expect.append(-g[k])
            else:
                expect.append(g[j] + pos(B[j][k]) * g[k] - B[j][k] * h[k])
        if tuple(expect) != tuple(g_new):
            diff.append("g' expected %s got %s" % (tuple(expect), tuple(g_new)))
    return not diff, diff


def transition_pairs(B, word: Sequence[int], k: int):
    """Invariants at the end of word, seen from t0 and from its neighbour t1 in direction k.

    Returns (states_from_t0, states_from_t1) where the latter uses mu_k(B) and
    the reduced word (k,) + word.
    """
    B = as_matrix(B)
    s0 = invariants_along(B, word)[-1]
    B1 = mutate_matrix(B, k)
    s1 = invariants_along(B1, reduce_word((k,) + tuple(word)))[-1]
    return s0, s1


@dataclass(frozen=True)
class YSeed:
    """y_i = num_i / den_i with both parts subtraction-free integer polynomials."""

    y: tuple
    B: Matrix

    @classmethod
    def initial(cls, B) -> "YSeed":
        B = as_matrix(B)
        n = len(B)
        return cls(tuple((IntPolynomial.variable(n, i), IntPolynomial.one(n)) for i in range(n)), B)


def _reduce_fraction(num: IntPolynomial, den: IntPolynomial) -> tuple:
    n = num.nvars
    if n == 0:
        return num, den
    P, Q = to_flint(num), to_flint(den)
    G = P.gcd(Q)
    P, Q = P / G, Q / G
    if from_flint(Q, n).leading_term()[1] < 0:
        P, Q = -P, -Q
    return from_flint(P, n), from_flint(Q, n)


def mutate_y_seed(seed: YSeed, k: int) -> YSeed:
    B = seed.B
    n = len(B)
    if not 0 <= k < n:
        raise ValueError("direction out of range")
    pk, qk = seed.y[k]
    new = []
    for i, (p, q) in enumerate(seed.y):
        if i == k:
            new.append((qk, pk))
            continue
        b = B[k][i]
        num, den = p, q
        if pos(b):
            num = num * pk ** pos(b)
            den = den * qk ** pos(b)
        # (y_k + 1)^(-b) = ((pk + qk)/qk)^(-b)
        s = pk + qk
        if b > 0:
            num = num * qk ** b
            den = den * s ** b
        elif b < 0:
            num = num * s ** (-b)
            den = den * qk ** (-b)
        new.append(_reduce_fraction(num, den))
    return YSeed(tuple(new), mutate_matrix(B, k))


def yhat_exponents(B) -> list:
    """Exponent vector of yhat_j = prod_i x_i^{b_ij}."""
    n = len(B)
    return [tuple(B[i][j] for i in range(n)) for j in range(n)]


def cluster_variable_expr(F: IntPolynomial, g: Sequence[int], B) -> LaurentExpr:
    """Coefficient-free cluster variable F(yhat) * x^g as a reduced Laurent expression."""
    n = len(B)
    yh = yhat_exponents(B)
    terms: dict = {}
    for e, c in F.items():
        v = list(g)
        for j, x in enumerate(e):
            if x:
                for i in range(n):
                    v[i] += x * yh[j][i]
        v = tuple(v)
        terms[v] = terms.get(v, 0) + c
    return LaurentExpr.from_laurent_terms(n, terms)


def g_matrix_det(gs: Sequence[Sequence[int]]) -> int:
    if not gs:
        return 1
    return int(fmpz_mat([list(g) for g in gs]).det())


def sign_coherent(gs: Sequence[Sequence[int]]) -> bool:
    n = len(gs[0]) if gs else 0
    for i in range(n):
        col = [g[i] for g in gs]
        if any(x > 0 for x in col) and any(x < 0 for x in col):
            return False
    return True


def dominant_monomial_ok(F: IntPolynomial) -> bool:
    """Constant term 1 and a unique maximal monomial with coefficient 1 divisible by all others."""
    if F.constant_term() != 1:
        return False
    n = F.nvars
    top = tuple(max(e[i] for e in F.exponents()) for i in range(n))
    return F.coeff(top) == 1
