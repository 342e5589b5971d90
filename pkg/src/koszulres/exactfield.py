"""Exact arithmetic: prime fields, multivariate polynomials, Artinian monomial
quotient rings, and F_p linear algebra.

Everything downstream reduces to two primitives implemented here:

* normal forms in R = k[x_1..x_n]/I for a monomial ideal I containing a pure
  power of every variable (so R is a finite dimensional k-vector space with
  the standard monomials as basis), and
* exact rank / kernel / echelon computations over F_p, done in numpy with
  modular arithmetic routed through float64 BLAS products whose intermediate
  integers stay below 2**53.

No floating point value ever leaves this module un-reduced; all results are
integers mod p.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class ExactFieldError(ValueError):
    """Invalid algebraic input (bad modulus, non-Artinian ideal, ...)."""


# ---------------------------------------------------------------------------
# prime field
# ---------------------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(m: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond 64-bit moduli we accept."""
    if m < 2:
        return False
    for q in _MR_BASES:
        if m % q == 0:
            return m == q
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """F_p with plain int elements in [0, p)."""

    def __init__(self, p: int = 32003):
        if not is_prime(p):
            raise ExactFieldError(f"{p} is not prime")
        self.p = p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


# ---------------------------------------------------------------------------
# monomials (plain exponent tuples) and polynomials
# ---------------------------------------------------------------------------

Monomial = tuple  # exponent tuple, one entry per variable


def mono_degree(m: Monomial) -> int:
    return sum(m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """Componentwise a <= b."""
    return all(x <= y for x, y in zip(a, b))


def mono_key(m: Monomial):
    """Degree-then-lexicographic order key: x > y > z within a degree."""
    return (mono_degree(m), tuple(-e for e in m))


class Polynomial:
    """Sparse multivariate polynomial over F_p: dict {exponent tuple: coeff}.

    Stored coefficients are nonzero and reduced mod p.  Instances are treated
    as immutable; all operations return fresh objects.
    """

    __slots__ = ("nvars", "p", "terms")

    def __init__(self, nvars: int, p: int, terms: dict | None = None):
        self.nvars = nvars
        self.p = p
        if terms:
            self.terms = {m: c % p for m, c in terms.items() if c % p}
        else:
            self.terms = {}

    @classmethod
    def zero(cls, nvars: int, p: int) -> "Polynomial":
        return cls(nvars, p)

    @classmethod
    def constant(cls, c: int, nvars: int, p: int) -> "Polynomial":
        return cls(nvars, p, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, m: Monomial, nvars: int, p: int, c: int = 1) -> "Polynomial":
        return cls(nvars, p, {tuple(m): c})

    @classmethod
    def variable(cls, v: int, nvars: int, p: int) -> "Polynomial":
        e = [0] * nvars
        e[v] = 1
        return cls(nvars, p, {tuple(e): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def _check(self, other: "Polynomial"):
        if self.nvars != other.nvars or self.p != other.p:
            raise ExactFieldError("polynomial arithmetic across different rings")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return Polynomial(self.nvars, self.p, t)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) - c
        return Polynomial(self.nvars, self.p, t)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, self.p, {m: -c for m, c in self.terms.items()})

    def scale(self, c: int) -> "Polynomial":
        return Polynomial(self.nvars, self.p, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                t[m] = t.get(m, 0) + c1 * c2
        return Polynomial(self.nvars, self.p, t)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.nvars == other.nvars
            and self.p == other.p
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, self.p, frozenset(self.terms.items())))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: mono_key(mc[0]))

    def __repr__(self):
        return f"Polynomial({self.to_string(_DEFAULT_NAMES[: self.nvars])})"

    def to_string(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            if c != 1 or not any(m):
                factors.append(str(c))
            for v, e in enumerate(m):
                if e == 1:
                    factors.append(names[v])
                elif e > 1:
                    factors.append(f"{names[v]}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)


_DEFAULT_NAMES = tuple("xyzwvutsrq") + tuple(f"x{i}" for i in range(10, 40))


def default_names(n: int) -> list[str]:
    if n <= 3:
        return list("xyz"[:n])
    return [f"x{i}" for i in range(1, n + 1)]


# ---------------------------------------------------------------------------
# Artinian monomial quotient ring
# ---------------------------------------------------------------------------


class QuotientRing:
    """R = F_p[x_1..x_n]/I for a monomial ideal I with a pure power of every
    variable among its generators (the Artinian gate).

    The standard monomials (those divisible by no generator) form the ordered
    k-basis; normal form of a monomial is itself or zero, which makes the
    reduction a pure divisibility test.
    """

    def __init__(self, p: int, nvars: int, ideal_gens: Iterable[Monomial],
                 names: Sequence[str] | None = None):
        self.field = PrimeField(p)
        self.p = p
        self.nvars = nvars
        self.names = list(names) if names is not None else default_names(nvars)
        if len(self.names) != nvars:
            raise ExactFieldError("variable name count does not match nvars")
        gens = [tuple(g) for g in ideal_gens]
        for g in gens:
            if len(g) != nvars or any(e < 0 for e in g):
                raise ExactFieldError(f"bad ideal generator exponent vector {g}")
            if not any(g):
                raise ExactFieldError("ideal contains 1; quotient ring is zero")
        self.ideal_gens = self._minimalize(gens)
        self._pure_bounds = self._artinian_bounds()
        self.std_basis = self._compute_std_basis()
        self.basis_index = {m: i for i, m in enumerate(self.std_basis)}
        self.dim = len(self.std_basis)
        self._mult_cache: dict = {}

    @staticmethod
    def _minimalize(gens: list[Monomial]) -> list[Monomial]:
        gens = sorted(set(gens), key=mono_key)
        keep = []
        for g in gens:
            if not any(mono_divides(h, g) for h in keep):
                keep.append(g)
        return keep

    def _artinian_bounds(self) -> list[int]:
        bounds = [None] * self.nvars
        for g in self.ideal_gens:
            support = [v for v, e in enumerate(g) if e]
            if len(support) == 1:
                v = support[0]
                if bounds[v] is None or g[v] < bounds[v]:
                    bounds[v] = g[v]
        for v, b in enumerate(bounds):
            if b is None:
                raise ExactFieldError(
                    f"ideal is not Artinian: no pure power of variable "
                    f"'{self.names[v]}' among the generators"
                )
        return bounds

    def _compute_std_basis(self) -> list[Monomial]:
        ranges = [range(b) for b in self._pure_bounds]
        out = []

        def rec(prefix, v):
            if v == self.nvars:
                m = tuple(prefix)
                if not any(mono_divides(g, m) for g in self.ideal_gens):
                    out.append(m)
                return
            for e in ranges[v]:
                rec(prefix + [e], v + 1)

        rec([], 0)
        out.sort(key=mono_key)
        return out

    def is_standard(self, m: Monomial) -> bool:
        return not any(mono_divides(g, m) for g in self.ideal_gens)

    # -- elements ----------------------------------------------------------

    def zero(self) -> Polynomial:
        return Polynomial.zero(self.nvars, self.p)

    def one(self) -> Polynomial:
        return Polynomial.constant(1, self.nvars, self.p)

    def variable(self, v: int) -> Polynomial:
        return Polynomial.variable(v, self.nvars, self.p)

    def variables(self) -> list[Polynomial]:
        return [self.variable(v) for v in range(self.nvars)]

    def normal_form(self, f: Polynomial) -> Polynomial:
        """Project onto the span of standard monomials (k-linear, idempotent)."""
        if f.nvars != self.nvars:
            raise ExactFieldError("variable count mismatch in normal_form")
        if f.p != self.p:
            raise ExactFieldError("characteristic mismatch in normal_form")
        t = {m: c for m, c in f.terms.items() if self.is_standard(m)}
        return Polynomial(self.nvars, self.p, t)

    def mul_nf(self, f: Polynomial, g: Polynomial) -> Polynomial:
        return self.normal_form(f * g)

    def in_maximal_ideal(self, f: Polynomial) -> bool:
        return self.normal_form(f).constant_term() == 0

    def element_from_vector(self, vec) -> Polynomial:
        t = {m: int(vec[i]) for i, m in enumerate(self.std_basis) if int(vec[i]) % self.p}
        return Polynomial(self.nvars, self.p, t)

    def vector_from_element(self, f: Polynomial) -> np.ndarray:
        nf = self.normal_form(f)
        v = np.zeros(self.dim, dtype=np.int64)
        for m, c in nf.terms.items():
            v[self.basis_index[m]] = c
        return v

    def mult_matrix(self, f: Polynomial) -> np.ndarray:
        """dim x dim matrix of multiplication by f on the standard basis."""
        key = frozenset(f.terms.items())
        cached = self._mult_cache.get(key)
        if cached is not None:
            return cached
        M = np.zeros((self.dim, self.dim), dtype=np.int64)
        for mono, c in f.terms.items():
            for j, b in enumerate(self.std_basis):
                prod = mono_mul(mono, b)
                i = self.basis_index.get(prod)
                if i is not None:
                    M[i, j] = (M[i, j] + c) % self.p
        self._mult_cache[key] = M
        return M

    def __eq__(self, other):
        return (
            isinstance(other, QuotientRing)
            and self.p == other.p
            and self.nvars == other.nvars
            and self.ideal_gens == other.ideal_gens
        )

    def __hash__(self):
        return hash((self.p, self.nvars, tuple(self.ideal_gens)))

    def __repr__(self):
        gens = ", ".join(
            Polynomial.monomial(g, self.nvars, self.p).to_string(self.names)
            for g in self.ideal_gens
        )
        return f"F_{self.p}[{', '.join(self.names)}]/({gens})"


# ---------------------------------------------------------------------------
# matrices over R (sparse) and flattening to F_p
# ---------------------------------------------------------------------------


class RingMatrix:
    """Sparse matrix with Polynomial entries kept in normal form."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: QuotientRing, rows: int, cols: int,
                 entries: dict | None = None, reduce: bool = True):
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self.entries = {}
        if entries:
            for (i, j), f in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise ExactFieldError(f"entry ({i},{j}) outside {rows}x{cols}")
                g = ring.normal_form(f) if reduce else f
                if not g.is_zero():
                    self.entries[(i, j)] = g

    @classmethod
    def zero(cls, ring, rows, cols):
        return cls(ring, rows, cols)

    @classmethod
    def identity(cls, ring, n):
        one = ring.one()
        return cls(ring, n, n, {(i, i): one for i in range(n)}, reduce=False)

    @classmethod
    def repeat_diag(cls, M: "RingMatrix", copies: int) -> "RingMatrix":
        """Block-diagonal sum of `copies` copies of M."""
        entries = {}
        for c in range(copies):
            for (i, j), f in M.entries.items():
                entries[(c * M.rows + i, c * M.cols + j)] = f
        return cls(M.ring, M.rows * copies, M.cols * copies, entries, reduce=False)

    @classmethod
    def from_rows(cls, ring, rows_of_entries):
        rows = len(rows_of_entries)
        cols = len(rows_of_entries[0]) if rows else 0
        e = {}
        for i, row in enumerate(rows_of_entries):
            for j, f in enumerate(row):
                e[(i, j)] = f
        return cls(ring, rows, cols, e)

    def entry(self, i, j) -> Polynomial:
        return self.entries.get((i, j), self.ring.zero())

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: "RingMatrix") -> "RingMatrix":
        assert (self.rows, self.cols) == (other.rows, other.cols)
        e = dict(self.entries)
        for key, f in other.entries.items():
            e[key] = e[key] + f if key in e else f
        return RingMatrix(self.ring, self.rows, self.cols, e, reduce=False)

    def __neg__(self) -> "RingMatrix":
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "RingMatrix":
        return RingMatrix(
            self.ring, self.rows, self.cols,
            {k: f.scale(c) for k, f in self.entries.items()}, reduce=False,
        )

    def __matmul__(self, other: "RingMatrix") -> "RingMatrix":
        """Sparse product; entries re-reduced to normal form."""
        assert self.cols == other.rows, "incompatible RingMatrix product"
        by_row: dict = {}
        for (t, c), f in other.entries.items():
            by_row.setdefault(t, []).append((c, f))
        acc: dict = {}
        for (r, t), f in self.entries.items():
            for c, g in by_row.get(t, ()):
                prod = f * g
                key = (r, c)
                acc[key] = acc[key] + prod if key in acc else prod
        return RingMatrix(self.ring, self.rows, other.cols, acc)

    def entries_in_m(self) -> bool:
        return all(f.constant_term() == 0 for f in self.entries.values())

    def first_unit_entry(self):
        for (i, j), f in sorted(self.entries.items()):
            if f.constant_term() != 0:
                return (i, j)
        return None

    def flatten(self) -> np.ndarray:
        """Matrix of the induced F_p-linear map R^cols -> R^rows.

        Coordinates are ordered R-coordinate major: coordinate r occupies the
        slice [r*dim, (r+1)*dim) in the standard-monomial basis of R.
        """
        D = self.ring.dim
        M = np.zeros((self.rows * D, self.cols * D), dtype=np.int64)
        for (i, j), f in self.entries.items():
            M[i * D:(i + 1) * D, j * D:(j + 1) * D] = self.ring.mult_matrix(f)
        return M

    def __eq__(self, other):
        return (
            isinstance(other, RingMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"RingMatrix({self.rows}x{self.cols}, {len(self.entries)} nonzero)"


def flatten(M: RingMatrix, ring: QuotientRing | None = None) -> np.ndarray:
    if ring is not None and ring != M.ring:
        raise ExactFieldError("flatten called with a different ring")
    return M.flatten()


# ---------------------------------------------------------------------------
# exact linear algebra over F_p (numpy int64, float64 BLAS inner products)
# ---------------------------------------------------------------------------

_FLOAT_EXACT = 2 ** 53


def _safe_chunk(p: int, inner: int) -> int:
    """Largest inner-dimension chunk whose float64 dot stays exact."""
    per = (p - 1) ** 2
    return max(1, min(inner, _FLOAT_EXACT // max(per, 1)))


def mod_matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Exact (A @ B) mod p using float64 BLAS on chunks of the inner dim.

    Falls back to arbitrary-precision arithmetic when even a single product
    would overflow the float64 integer range (p >= ~9.5e7)."""
    A = np.asarray(A, dtype=np.int64) % p
    B = np.asarray(B, dtype=np.int64) % p
    inner = A.shape[1]
    if inner == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    if (p - 1) ** 2 >= _FLOAT_EXACT:
        C = A.astype(object) @ B.astype(object)
        return (C % p).astype(np.int64)
    step = _safe_chunk(p, inner)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for lo in range(0, inner, step):
        hi = min(lo + step, inner)
        C = A[:, lo:hi].astype(np.float64) @ B[lo:hi, :].astype(np.float64)
        out = (out + np.rint(C).astype(np.int64)) % p
    return out


def rref_mod(A: np.ndarray, p: int):
    """Reduced row echelon form over F_p.

    Returns (R, pivot_columns).  Straightforward per-pivot elimination; meant
    for small and medium matrices (the blocked routine below handles the big
    rank-only computations).
    """
    M = (np.array(A, dtype=np.int64) % p).copy()
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = M[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        t = r + int(nz[0])
        if t != r:
            M[[r, t]] = M[[t, r]]
        inv = pow(int(M[r, c]), p - 2, p)
        M[r] = (M[r] * inv) % p
        other = np.nonzero(M[:, c])[0]
        other = other[other != r]
        if other.size:
            M[other] = (M[other] - np.outer(M[other, c], M[r])) % p
        pivots.append(c)
        r += 1
    return M, pivots


def row_space_basis(A: np.ndarray, p: int) -> np.ndarray:
    R, piv = rref_mod(A, p)
    return R[: len(piv)]


def pivot_columns_mod(A: np.ndarray, p: int, block: int = 128):
    """(rank, pivot columns) via blocked elimination with BLAS trailing updates.

    Panel columns are eliminated one pivot at a time (cheap), multipliers are
    recorded, and the stale trailing block is fixed with one matmul per panel.
    For moduli with block * (p-1)^2 < 2**53 the whole elimination runs in
    float64 with deferred reductions (exact; much faster); otherwise an int64
    path with chunked modular products is used.
    """
    A = np.asarray(A, dtype=np.int64)
    if A.size and block * (p - 1) ** 2 < _FLOAT_EXACT:
        return _pivot_columns_float(A, p, block)
    return _pivot_columns_int(A, p, block)


def _pivot_columns_float(A: np.ndarray, p: int, block: int):
    """Float64 elimination; every intermediate stays an exact integer below
    2**53.  Reductions mod p are lazy: the active pivot column, the pivot row
    and the replayed pivot-row rows are reduced eagerly, while everything
    else accumulates up to `headroom` bounded updates (each below
    block * (p-1)^2) before a global sweep - float64 fmod is the expensive
    operation here, not the arithmetic."""
    M = np.mod(A, p).astype(np.float64)
    rows, cols = M.shape
    per_update = block * (p - 1) ** 2
    headroom = max(1, (_FLOAT_EXACT - p) // (2 * per_update))
    dirt = 0
    pivots = []
    r = 0
    c0 = 0
    while r < rows and c0 < cols:
        b = min(block, cols - c0)
        panel = slice(c0, c0 + b)
        mult = np.zeros((rows - r, b), dtype=np.float64)
        scales = []
        k = 0
        for c in range(c0, c0 + b):
            pr = r + k
            if pr == rows:
                break
            col = np.mod(M[pr:, c], p)
            M[pr:, c] = col
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                continue
            t = pr + int(nz[0])
            if t != pr:
                M[[pr, t]] = M[[t, pr]]
                mult[[pr - r, t - r]] = mult[[t - r, pr - r]]
            inv = pow(int(M[pr, c]), p - 2, p)
            scales.append(inv)
            M[pr, panel] = np.mod(np.mod(M[pr, panel], p) * inv, p)
            below = M[pr + 1:, c]
            nzb = np.nonzero(below)[0]
            if nzb.size:
                idx = pr + 1 + nzb
                mvals = M[idx, c]
                mult[idx - r, k] = mvals
                M[idx, panel.start:panel.stop] -= \
                    mvals[:, None] * M[pr, panel][None, :]
            pivots.append(c)
            k += 1
        if k and c0 + b < cols:
            trail = slice(c0 + b, cols)
            T = M[r:r + k, trail]
            for j in range(k):
                mj = mult[j, :j]
                if np.any(mj):
                    T[j] = np.mod(T[j] - mj @ T[:j], p)
                T[j] = np.mod(T[j] * scales[j], p)
            Lb = mult[k:, :k]
            if Lb.size and np.any(Lb):
                M[r + k:, trail] -= Lb @ T
                dirt += 1
                if dirt >= headroom:
                    M[r + k:, trail] = np.mod(M[r + k:, trail], p)
                    dirt = 0
        r += k
        c0 += b
    return len(pivots), pivots


def _pivot_columns_int(A: np.ndarray, p: int, block: int):
    M = (np.array(A, dtype=np.int64) % p).copy()
    rows, cols = M.shape
    if rows == 0 or cols == 0:
        return 0, []
    pivots = []
    r = 0
    c0 = 0
    while r < rows and c0 < cols:
        b = min(block, cols - c0)
        panel = slice(c0, c0 + b)
        mult = np.zeros((rows - r, b), dtype=np.int64)
        scales = []
        piv_cols_local = []
        k = 0
        for c in range(c0, c0 + b):
            pr = r + k
            if pr == rows:
                break
            colvals = M[pr:, c]
            nz = np.nonzero(colvals)[0]
            if nz.size == 0:
                continue
            t = pr + int(nz[0])
            if t != pr:
                M[[pr, t]] = M[[t, pr]]
                mult[[pr - r, t - r]] = mult[[t - r, pr - r]]
            inv = pow(int(M[pr, c]), p - 2, p)
            scales.append(inv)
            M[pr, panel] = (M[pr, panel] * inv) % p
            below = M[pr + 1:, c]
            nzb = np.nonzero(below)[0]
            if nzb.size:
                idx = pr + 1 + nzb
                mult[idx - r, k] = M[idx, c]
                M[idx, panel.start:panel.stop] = (
                    M[idx, panel.start:panel.stop]
                    - np.outer(M[idx, c], M[pr, panel])
                ) % p
            piv_cols_local.append(c)
            k += 1
        if k and c0 + b < cols:
            trail = slice(c0 + b, cols)
            # pivot rows first: replay their recorded eliminations in order
            if (p - 1) ** 2 * max(k, 1) < _FLOAT_EXACT:
                # one float64 conversion per panel; every dot keeps its
                # integer intermediates below 2**53
                T = M[r:r + k, trail].astype(np.float64)
                for j in range(k):
                    mj = mult[j, :j]
                    if np.any(mj):
                        T[j] = np.mod(T[j] - mj.astype(np.float64) @ T[:j], p)
                    T[j] = np.mod(T[j] * scales[j], p)
                Ti = T.astype(np.int64)
            else:
                Ti = M[r:r + k, trail].copy()
                for j in range(k):
                    mj = mult[j, :j]
                    if np.any(mj):
                        Ti[j] = (Ti[j] - mod_matmul(mj[None, :], Ti[:j], p)[0]) % p
                    Ti[j] = (Ti[j] * scales[j]) % p
            M[r:r + k, trail] = Ti
            Lb = mult[k:, :k]
            if Lb.size and np.any(Lb):
                M[r + k:, trail] = (M[r + k:, trail] - mod_matmul(Lb, Ti, p)) % p
        pivots.extend(piv_cols_local)
        r += k
        c0 += b
    return len(pivots), pivots


def rank_mod(A: np.ndarray, p: int) -> int:
    rank, _ = pivot_columns_mod(A, p)
    return rank


def kernel_mod(A: np.ndarray, p: int) -> np.ndarray:
    """Columns form an echelon-normalized basis of the null space of A."""
    A = np.asarray(A, dtype=np.int64)
    rows, cols = A.shape
    R, piv = rref_mod(A, p)
    free = [c for c in range(cols) if c not in set(piv)]
    K = np.zeros((cols, len(free)), dtype=np.int64)
    for idx, fc in enumerate(free):
        K[fc, idx] = 1
        for r, pc in enumerate(piv):
            K[pc, idx] = (-int(R[r, fc])) % p
    return K


def solve_mod(A: np.ndarray, b: np.ndarray, p: int):
    """One solution of Ax = b over F_p, or None if inconsistent."""
    A = np.asarray(A, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    if b.ndim == 1:
        b = b[:, None]
    aug = np.hstack([A, b])
    R, piv = rref_mod(aug, p)
    ncols = A.shape[1]
    if any(c >= ncols for c in piv):
        return None
    x = np.zeros((ncols, b.shape[1]), dtype=np.int64)
    for r, pc in enumerate(piv):
        x[pc] = R[r, ncols:]
    return x if x.shape[1] > 1 else x[:, 0]


# ---------------------------------------------------------------------------
# ring input files
# ---------------------------------------------------------------------------

_RING_KEYS = ("characteristic", "variables", "ideal", "mode", "max_degree",
              "series_order")


@dataclass
class RingFile:
    """Parsed ring description; `cycles` maps names like 'z1_2' to raw
    formal-sum strings (interpreted by the Koszul layer)."""

    characteristic: int
    variables: list[str]
    ideal: list[str]
    mode: str | None = None
    max_degree: int | None = None
    series_order: int | None = None
    cycles: dict = field(default_factory=dict)


def parse_monomial_string(s: str, names: Sequence[str]) -> Monomial:
    """Parse 'x^2', 'x*y*z', '1' into an exponent tuple."""
    index = {nm: i for i, nm in enumerate(names)}
    exps = [0] * len(names)
    s = s.strip()
    if s in ("1", ""):
        return tuple(exps)
    for factor in s.split("*"):
        factor = factor.strip()
        if "^" in factor:
            base, _, e = factor.partition("^")
            base, e = base.strip(), int(e)
        else:
            base, e = factor, 1
        if base not in index:
            raise ExactFieldError(f"unknown variable {base!r} in monomial {s!r}")
        if e < 1:
            raise ExactFieldError(f"bad exponent in monomial {s!r}")
        exps[index[base]] += e
    return tuple(exps)


def monomial_to_string(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for v, e in enumerate(m):
        if e == 1:
            parts.append(names[v])
        elif e > 1:
            parts.append(f"{names[v]}^{e}")
    return "*".join(parts) if parts else "1"


def parse_ring_file(text: str) -> RingFile:
    fields: dict = {}
    cycles: dict = {}
    in_cycles = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "[cycles]":
            in_cycles = True
            continue
        if line.startswith("["):
            raise ExactFieldError(f"line {lineno}: unknown section {line!r}")
        if "=" not in line:
            raise ExactFieldError(f"line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if in_cycles:
            if not _CYCLE_NAME.fullmatch(key):
                raise ExactFieldError(
                    f"line {lineno}: cycle names look like 'z1_2' (got {key!r})")
            if key in cycles:
                raise ExactFieldError(f"line {lineno}: duplicate cycle {key!r}")
            cycles[key] = value
        else:
            if key not in _RING_KEYS:
                raise ExactFieldError(f"line {lineno}: unknown key {key!r}")
            if key in fields:
                raise ExactFieldError(f"line {lineno}: duplicate key {key!r}")
            fields[key] = value
    for required in ("characteristic", "variables", "ideal"):
        if required not in fields:
            raise ExactFieldError(f"missing required field {required!r}")
    try:
        p = int(fields["characteristic"])
    except ValueError:
        raise ExactFieldError("characteristic must be an integer") from None
    variables = [v.strip() for v in fields["variables"].split(",") if v.strip()]
    if len(set(variables)) != len(variables) or not variables:
        raise ExactFieldError("variables must be distinct and nonempty")
    ideal = [s.strip() for s in fields["ideal"].split(",") if s.strip()]
    mode = fields.get("mode")
    if mode is not None and mode not in ("T", "CI", "auto"):
        raise ExactFieldError(f"mode must be T, CI or auto (got {mode!r})")
    rf = RingFile(
        characteristic=p,
        variables=variables,
        ideal=ideal,
        mode=mode,
        max_degree=int(fields["max_degree"]) if "max_degree" in fields else None,
        series_order=int(fields["series_order"]) if "series_order" in fields else None,
        cycles=cycles,
    )
    # canonicalize monomial strings through the parser so round-trips are exact
    rf.ideal = [
        monomial_to_string(parse_monomial_string(s, variables), variables)
        for s in rf.ideal
    ]
    return rf


_CYCLE_NAME = re.compile(r"z([123])_([0-9]+)")


def serialize_ring_file(rf: RingFile) -> str:
    lines = [
        f"characteristic = {rf.characteristic}",
        f"variables = {', '.join(rf.variables)}",
        f"ideal = {', '.join(rf.ideal)}",
    ]
    if rf.mode is not None:
        lines.append(f"mode = {rf.mode}")
    if rf.max_degree is not None:
        lines.append(f"max_degree = {rf.max_degree}")
    if rf.series_order is not None:
        lines.append(f"series_order = {rf.series_order}")
    if rf.cycles:
        lines.append("")
        lines.append("[cycles]")
        def cycle_key(name):
            m = _CYCLE_NAME.fullmatch(name)
            return (int(m.group(1)), int(m.group(2)))
        for name in sorted(rf.cycles, key=cycle_key):
            lines.append(f"{name} = {rf.cycles[name]}")
    return "\n".join(lines) + "\n"


def build_ring(rf: RingFile, char_override: int | None = None) -> QuotientRing:
    p = char_override if char_override is not None else rf.characteristic
    gens = [parse_monomial_string(s, rf.variables) for s in rf.ideal]
    return QuotientRing(p, len(rf.variables), gens, names=rf.variables)
