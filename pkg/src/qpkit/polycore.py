"""Integer polynomials, Laurent monomials and the tropical (min, +) semifield.

Polynomials are sparse maps from exponent tuples to nonzero Python ints.
Monomials are plain tuples of ints (negative entries allowed).
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from flint import fmpz_mpoly, fmpz_mpoly_ctx

Monomial = tuple

# products and quotients above this many term pairs go through flint
_FLINT_THRESHOLD = 64


def _ctx(n: int):
    return fmpz_mpoly_ctx.get(("u", n), "deglex")


def to_flint(p: "IntPolynomial") -> fmpz_mpoly:
    return _ctx(p.nvars).from_dict(p.terms)


def from_flint(f: fmpz_mpoly, n: int) -> "IntPolynomial":
    return IntPolynomial._raw(n, {tuple(int(x) for x in e): int(c) for e, c in f.to_dict().items()})


def _grlex_key(e):
    return (sum(e), e)


def tropical_add(a: Sequence[int], b: Sequence[int]) -> tuple:
    """Componentwise minimum of two exponent vectors."""
    if len(a) != len(b):
        raise ValueError("monomial length mismatch: %d vs %d" % (len(a), len(b)))
    return tuple(min(x, y) for x, y in zip(a, b))


def tropical_mul(a: Sequence[int], b: Sequence[int]) -> tuple:
    if len(a) != len(b):
        raise ValueError("monomial length mismatch")
    return tuple(x + y for x, y in zip(a, b))


class IntPolynomial:
    """Sparse polynomial with integer coefficients in variables u1..un."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[tuple, int] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != nvars:
                    raise ValueError("exponent %r has wrong length for %d variables" % (e, nvars))
                if any(x < 0 for x in e):
                    raise ValueError("negative exponent in polynomial term %r" % (e,))
                c = int(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
                    if not clean[e]:
                        del clean[e]
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, nvars: int) -> "IntPolynomial":
        return cls(nvars)

    @classmethod
    def one(cls, nvars: int) -> "IntPolynomial":
        return cls(nvars, {(0,) * nvars: 1})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: int = 1) -> "IntPolynomial":
        return cls(len(exps), {tuple(exps): coeff})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "IntPolynomial":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def _raw(cls, nvars, terms):
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    # basic accessors
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, exps: Sequence[int]) -> int:
        return self._terms.get(tuple(exps), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def sorted_terms(self, descending: bool = True) -> list:
        """Terms in graded lexicographic order."""
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]), reverse=descending)

    def leading_term(self) -> tuple:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms, key=_grlex_key)
        return e, self._terms[e]

    def constant_term(self) -> int:
        return self._terms.get((0,) * self.nvars, 0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def exponents(self) -> list:
        return list(self._terms)

    def has_nonnegative_coefficients(self) -> bool:
        return all(c > 0 for c in self._terms.values())

    # arithmetic
    def _check(self, other):
        if isinstance(other, int):
            return IntPolynomial(self.nvars, {(0,) * self.nvars: other})
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        if other.nvars != self.nvars:
            raise ValueError("variable count mismatch: %d vs %d" % (self.nvars, other.nvars))
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return IntPolynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if self.nvars and len(self._terms) * len(other._terms) > _FLINT_THRESHOLD:
            return from_flint(to_flint(self) * to_flint(other), self.nvars)
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return IntPolynomial._raw(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        if self.nvars and len(self._terms) > 1 and k > 1:
            return from_flint(to_flint(self) ** k, self.nvars)
        result = IntPolynomial.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPolynomial(self.nvars, {(0,) * self.nvars: other})
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # substitution and evaluation
    def permute_variables(self, perm: Sequence[int]) -> "IntPolynomial":
        """Rename u_i to u_{perm[i]}."""
        out = {}
        for e, c in self._terms.items():
            f = [0] * self.nvars
            for i, x in enumerate(e):
                f[perm[i]] += x
            out[tuple(f)] = c
        return IntPolynomial._raw(self.nvars, out)

    def evaluate(self, values: Sequence) -> object:
        total = 0
        for e, c in self._terms.items():
            t = c
            for v, x in zip(values, e):
                if x:
                    t = t * v ** x
            total = total + t
        return total

    def __repr__(self):
        return "IntPolynomial(%d, %s)" % (self.nvars, format_polynomial(self))

    def __str__(self):
        return format_polynomial(self)


def exact_divide(num: IntPolynomial, den: IntPolynomial) -> IntPolynomial:
    """Quotient q with q*den == num; raises ArithmeticError when den does not divide num."""
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if num.nvars != den.nvars:
        raise ValueError("variable count mismatch")
    if num.nvars and len(num) * len(den) > _FLINT_THRESHOLD:
        try:
            q = to_flint(num) / to_flint(den)
        except Exception:
            raise ArithmeticError("inexact polynomial division")
        return from_flint(q, num.nvars)
    return long_divide(num, den)


def long_divide(num: IntPolynomial, den: IntPolynomial) -> IntPolynomial:
    """Grlex long division in pure Python (the small-input path of exact_divide)."""
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    n = num.nvars
    lt_e, lt_c = den.leading_term()
    if len(den) == 1:
        out = {}
        for e, c in num.items():
            q, r = divmod(c, lt_c)
            d = tuple(x - y for x, y in zip(e, lt_e))
            if r or min(d, default=0) < 0:
                raise ArithmeticError("inexact polynomial division")
            out[d] = q
        return IntPolynomial._raw(n, out)

    rem = dict(num.items())
    heap = [(-sum(e), tuple(-x for x in e)) for e in rem]
    heapq.heapify(heap)
    quot = {}
    den_items = list(den.items())
    while rem:
        # pop the grlex-largest live exponent
        while True:
            negdeg, neg_e = heapq.heappop(heap)
            e = tuple(-x for x in neg_e)
            if e in rem:
                break
        # stale duplicates of e may remain in the heap; they are skipped later
        c = rem[e]
        d = tuple(x - y for x, y in zip(e, lt_e))
        q, r = divmod(c, lt_c)
        if r or min(d, default=0) < 0:
            raise ArithmeticError("inexact polynomial division")
        quot[d] = q
        for f, cf in den_items:
            g = tuple(x + y for x, y in zip(d, f))
            v = rem.get(g, 0) - q * cf
            if v:
                if g not in rem:
                    heapq.heappush(heap, (-sum(g), tuple(-x for x in g)))
                rem[g] = v
            else:
                rem.pop(g, None)
    return IntPolynomial._raw(n, quot)


def tropical_eval(F: IntPolynomial, assignment: Sequence[Sequence[int]]) -> tuple:
    """Evaluate F in the tropical semifield, substituting u_i by the monomial assignment[i]."""
    if F.is_zero():
        raise ValueError("the zero polynomial has no tropical value")
    if len(assignment) != F.nvars:
        raise ValueError("assignment length %d != variable count %d" % (len(assignment), F.nvars))
    if F.nvars == 0:
        return ()
    m = len(assignment[0])
    best = None
    for e in F.exponents():
        v = [0] * m
        for i, x in enumerate(e):
            if x:
                a = assignment[i]
                for j in range(m):
                    v[j] += x * a[j]
        best = tuple(v) if best is None else tropical_add(best, v)
    return best


def _in_convex_hull(p: Sequence[int], others: Sequence[Sequence[int]]) -> bool:
    """Exact phase-one simplex: is p a convex combination of the points in others?"""
    if not others:
        return False
    dim = len(p)
    m = len(others)
    rows = dim + 1
    # constraints sum_j lam_j q_j = p, sum_j lam_j = 1, with artificials
    A = [[Fraction(q[i]) for q in others] for i in range(dim)] + [[Fraction(1)] * m]
    b = [Fraction(x) for x in p] + [Fraction(1)]
    for i in range(rows):
        if b[i] < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]
    ncols = m + rows
    T = [A[i] + [Fraction(1) if j == i else Fraction(0) for j in range(rows)] + [b[i]] for i in range(rows)]
    basis = [m + i for i in range(rows)]
    # objective: minimise the artificial sum, i.e. reduced costs = -column sums
    cost = [Fraction(0)] * (ncols + 1)
    for i in range(rows):
        for j in range(m):
            cost[j] -= T[i][j]
        cost[ncols] -= T[i][ncols]
    while True:
        enter = next((j for j in range(ncols) if cost[j] < 0), None)  # Bland's rule
        if enter is None:
            break
        best = None
        for i in range(rows):
            if T[i][enter] > 0:
                ratio = T[i][ncols] / T[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            break
        r = best[1]
        piv = T[r][enter]
        T[r] = [x / piv for x in T[r]]
        for i in range(rows):
            if i != r and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[r])]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, T[r])]
        basis[r] = enter
    return cost[ncols] == 0


def newton_vertices(exps: Iterable[Sequence[int]]) -> list:
    """Exponent vectors that are vertices of the convex hull of exps."""
    pts = sorted(set(tuple(e) for e in exps))
    if len(pts) <= 2:
        return pts
    dim = len(pts[0])
    out = []
    for i, p in enumerate(pts):
        # a unique extremum in some coordinate is a vertex without any LP
        quick = False
        for j in range(dim):
            col = [q[j] for q in pts]
            if (p[j] == max(col) and col.count(p[j]) == 1) or (p[j] == min(col) and col.count(p[j]) == 1):
                quick = True
                break
        if quick or not _in_convex_hull(p, pts[:i] + pts[i + 1:]):
            out.append(p)
    return out


def newton_vertex_filter(F: IntPolynomial) -> IntPolynomial:
    """Sum with coefficient 1 of the monomials of F at vertices of its Newton polytope."""
    if F.is_zero():
        raise ValueError("zero polynomial has no Newton polytope")
    return IntPolynomial(F.nvars, {e: 1 for e in newton_vertices(F.exponents())})


_TERM_RE = re.compile(r"^u(\d+)(?:\^(\d+))?$")


def format_polynomial(F: IntPolynomial) -> str:
    """Text form `c*u1^a1*...` joined by `+`, in descending graded lexicographic order."""
    if F.is_zero():
        return "0"
    parts = []
    for e, c in F.sorted_terms():
        factors = []
        for i, x in enumerate(e):
            if x == 1:
                factors.append("u%d" % (i + 1))
            elif x > 1:
                factors.append("u%d^%d" % (i + 1, x))
        if not factors or abs(c) != 1:
            factors.insert(0, str(abs(c)))
        parts.append(("-" if c < 0 else "") + "*".join(factors))
    return "+".join(parts).replace("+-", "-")


def parse_polynomial(text: str, nvars: int) -> IntPolynomial:
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial text")
    s = s.replace("-", "+-")
    terms: dict = {}
    for chunk in s.split("+"):
        if not chunk:
            continue
        e = [0] * nvars
        coeff = 1
        sign = 1
        if chunk.startswith("-"):
            sign, chunk = -1, chunk[1:]
        for f in chunk.split("*"):
            if re.fullmatch(r"\d+", f):
                coeff *= int(f)
                continue
            m = _TERM_RE.match(f)
            if not m:
                raise ValueError("cannot parse factor %r" % f)
            i = int(m.group(1)) - 1
            if not 0 <= i < nvars:
                raise ValueError("variable u%d out of range" % (i + 1))
            e[i] += int(m.group(2) or 1)
        terms[tuple(e)] = terms.get(tuple(e), 0) + sign * coeff
    return IntPolynomial(nvars, terms)


@dataclass(frozen=True)
class LaurentExpr:
    """numerator / x^denominator with the numerator coprime to the listed variables."""

    numerator: IntPolynomial
    denominator: tuple

    @classmethod
    def from_laurent_terms(cls, nvars: int, terms: Mapping[tuple, int]) -> "LaurentExpr":
        terms = {tuple(e): c for e, c in terms.items() if c}
        if not terms:
            return cls(IntPolynomial.zero(nvars), (0,) * nvars)
        den = tuple(max(0, -min(e[i] for e in terms)) for i in range(nvars))
        num = {tuple(x + d for x, d in zip(e, den)): c for e, c in terms.items()}
        return cls(IntPolynomial(nvars, num), den)

    def laurent_terms(self) -> dict:
        return {tuple(x - d for x, d in zip(e, self.denominator)): c for e, c in self.numerator.items()}

    def denominator_vector(self) -> tuple:
        """d_i = -(lowest exponent of x_i among the Laurent terms)."""
        t = self.laurent_terms()
        n = self.numerator.nvars
        return tuple(-min(e[i] for e in t) for i in range(n))

    def __str__(self):
        den = "*".join(("x%d" % (i + 1)) + ("^%d" % d if d > 1 else "") for i, d in enumerate(self.denominator) if d)
        num = format_polynomial(self.numerator).replace("u", "x")
        return "(%s)/(%s)" % (num, den) if den else num
