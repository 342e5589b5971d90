"""Integer combinatorics for the resolution: the b/l/d/l'/l'' recurrences,
the rank-3^k tree of block monomials with its four degrees, the u_{k,s}
table, exact integer power series, and the Poincare series of both ring
classes.

All integers are Python ints (the l-sequence grows like a_1^k); series are
truncated with their order carried explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb


class SequenceError(ValueError):
    pass


# ---------------------------------------------------------------------------
# recurrences
# ---------------------------------------------------------------------------


class SequencePack:
    """Memoized tables b_k, l_k, d_k, l'_k, l''_k for given (c, a1, a2, a3).

    b_k = C(k+c-1, c-1) is the codepth-c word count; the l-family follows
        l_k  = sum_{i<=k} b_{k-i} d_i,   d_0 = 1,  d_k = (a1-3) l_{k-1},
        l'_0 = 0,  l'_k = l_{k-2} + (a2-3) l_{k-1},
        l''_0 = 0, l''_k = a3 l_{k-1},
    and l_{k,r} relabels (l, l', l'') at r = k, k+1, k+2.
    """

    def __init__(self, c: int, a1: int | None = None, a2: int | None = None,
                 a3: int | None = None, k_max: int = 12, class_t: bool = True):
        if c < 1:
            raise SequenceError(f"codepth must be >= 1, got {c}")
        self.c = c
        self.k_max = k_max
        self.class_t = class_t
        self.b = [comb(k + c - 1, c - 1) for k in range(k_max + 1)]
        if class_t:
            if a1 is None or a2 is None or a3 is None:
                raise SequenceError("class T tables need a1, a2, a3")
            if a1 < 3:
                raise SequenceError(f"class T needs a1 >= 3, got a1 = {a1}")
            self.a1, self.a2, self.a3 = a1, a2, a3
            self.l = [1]
            self.d = [1]
            self.lp = [0]
            self.lpp = [0]
            for k in range(1, k_max + 1):
                self.d.append((a1 - 3) * self.l[k - 1])
                self.l.append(sum(self.b[k - i] * self.d[i] for i in range(k + 1)))
                self.lp.append((self.l[k - 2] if k >= 2 else 0)
                               + (a2 - 3) * self.l[k - 1])
                self.lpp.append(a3 * self.l[k - 1])
        else:
            self.a1 = self.a2 = self.a3 = None
            self.l = self.d = self.lp = self.lpp = None

    def l_ks(self, k: int, r: int) -> int:
        """l_{k,r}: l_k, l'_k, l''_k at r = k, k+1, k+2 and 0 otherwise."""
        if not self.class_t:
            raise SequenceError("l_{k,r} is a class-T table")
        if k < 0 or k > self.k_max:
            if k < 0:
                return 0
            raise SequenceError(f"k = {k} beyond table size {self.k_max}")
        if r == k:
            return self.l[k]
        if r == k + 1:
            return self.lp[k]
        if r == k + 2:
            return self.lpp[k]
        return 0


def sequence_tables(c: int, a1: int, a2: int, a3: int, k_max: int = 12) -> SequencePack:
    return SequencePack(c, a1, a2, a3, k_max=k_max, class_t=True)


def closed_form_check(pack: SequencePack) -> list:
    """Verify the small-k closed forms of the l-family against the tables.

    Returns a list of (name, recurrence value, closed-form value, ok).
    """
    if pack.k_max < 3:
        raise SequenceError("closed forms need k_max >= 3")
    a1, a2, a3 = pack.a1, pack.a2, pack.a3
    expected = [
        ("l_2", pack.l[2], a1 ** 2 - 3),
        ("l_3", pack.l[3], a1 ** 3 - 6 * a1 + 1),
        ("lp_2", pack.lp[2], a1 * a2 - 3 * a1 + 1),
        ("lp_3", pack.lp[3], a1 ** 2 * a2 - 3 * a1 ** 2 - 3 * a2 + a1 + 9),
        ("lpp_2", pack.lpp[2], a1 * a3),
        ("lpp_3", pack.lpp[3], a1 ** 2 * a3 - 3 * a3),
        ("d_3", pack.d[3], (a1 - 3) * (a1 ** 2 - 3)),
    ]
    return [(name, got, want, got == want) for name, got, want in expected]


# ---------------------------------------------------------------------------
# the tree of block monomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeMonomial:
    """Product of generators X_{k,s}: the first factor may be diagonal
    (k <= s <= k+2), all later factors are strictly off-diagonal
    (k < s <= k+2).  The empty product is the unit."""

    factors: tuple  # of (k, s) pairs

    def __post_init__(self):
        for pos, (k, s) in enumerate(self.factors):
            lo = k if pos == 0 else k + 1
            if not (k >= 1 and lo <= s <= k + 2):
                raise SequenceError(f"bad factor X[{k},{s}] at position {pos}")

    @property
    def deg1(self) -> int:
        return sum(k for k, _ in self.factors)

    @property
    def deg2(self) -> int:
        return sum(s for _, s in self.factors)

    @property
    def deg4(self) -> int:
        return len(self.factors)

    def deg3(self, pack: SequencePack) -> int:
        out = 1
        for k, s in self.factors:
            out *= pack.l_ks(k, s)
        return out

    def append(self, k: int, s: int) -> "TreeMonomial":
        return TreeMonomial(self.factors + ((k, s),))

    @property
    def head(self):
        """(j, r, tail): the first factor and the remaining monomial; the
        unit has no head."""
        if not self.factors:
            return None
        (j, r), rest = self.factors[0], self.factors[1:]
        return j, r, TreeMonomial(rest)

    def is_unit(self) -> bool:
        return not self.factors

    def __str__(self):
        if not self.factors:
            return "1"
        return "*".join(f"X[{k},{s}]" for k, s in self.factors)


UNIT_MONOMIAL = TreeMonomial(())


@lru_cache(maxsize=None)
def _tree_layer(k: int) -> tuple:
    if k < 0:
        raise SequenceError("negative tree layer")
    if k == 0:
        return (UNIT_MONOMIAL,)
    out = [TreeMonomial(((k, k),)), TreeMonomial(((k, k + 1),)),
           TreeMonomial(((k, k + 2),))]
    for j in range(k - 1, 0, -1):
        for s in (j + 1, j + 2):
            for m in _tree_layer(k - j):
                out.append(m.append(j, s))
    return tuple(out)


def tree_layer(k: int, pack: SequencePack | None = None) -> tuple:
    """All 3^k tree monomials of first degree k, in the construction order:
    the trunk triple first, then the subtrees hanging off the off-diagonal
    generators X_{j,j+1}, X_{j,j+2} for j = k-1 down to 1, each subtree a
    scaled copy of a lower layer.  The layer structure is independent of the
    sequence tables; `pack` only feeds the deg3 multiplicities of the
    monomials and may be omitted."""
    del pack
    return _tree_layer(k)


def arrow_target(m: TreeMonomial) -> TreeMonomial:
    """The unique arrow out of a monomial drops its head to the diagonal one
    level down: X_{j,r} n -> X_{j-1,j-1} n (with X_{0,0} = 1)."""
    j, _, tail = m.head
    if j == 1:
        return tail
    return TreeMonomial(((j - 1, j - 1),) + tail.factors)


def u_table(k_max: int, s_max: int, pack: SequencePack) -> dict:
    """u_{k,s} by tree enumeration, cross-checked for every k against the
    graded Poincare series coefficients and for k <= 3 against the closed
    forms of the small cases; a mismatch aborts."""
    table: dict = {(0, 0): 1}
    for k in range(1, k_max + 1):
        for m in tree_layer(k):
            s = m.deg2
            if s > s_max:
                continue
            key = (k, s)
            table[key] = table.get(key, 0) + m.deg3(pack)
    series, _ = poincare_T(pack.a1, pack.a2, pack.a3, n=3, order=k_max)
    for k in range(k_max + 1):
        for s in range(min(s_max, 3 * k) + 1):
            got = table.get((k, s), 0)
            want = series.coefficient(k, s)
            if got != want:
                raise SequenceError(
                    f"u table cross-check failed at (k,s)=({k},{s}): "
                    f"tree gives {got}, series gives {want}")
    for (k, s), want in _u_closed_forms(pack).items():
        if k <= k_max and s <= s_max and table.get((k, s), 0) != want:
            raise SequenceError(
                f"u table cross-check failed at (k,s)=({k},{s}): "
                f"tree gives {table.get((k, s), 0)}, closed form gives {want}")
    return table


def _u_closed_forms(pack: SequencePack) -> dict:
    l1, l2, l3 = pack.l[1], pack.l[2], pack.l[3]
    p1, p2, p3 = pack.lp[1], pack.lp[2], pack.lp[3]
    q1, q2, q3 = pack.lpp[1], pack.lpp[2], pack.lpp[3]
    return {
        (1, 1): l1, (1, 2): p1, (1, 3): q1,
        (2, 2): l2, (2, 3): p2 + l1 * p1, (2, 4): q2 + p1 ** 2 + l1 * q1,
        (2, 5): 2 * p1 * q1, (2, 6): q1 ** 2,
        (3, 3): l3, (3, 4): p3 + l1 * p2 + l2 * p1,
        (3, 5): q3 + l1 * p1 ** 2 + l1 * q2 + 2 * p1 * p2 + l2 * q1,
        (3, 6): 2 * l1 * p1 * q1 + 2 * p1 * q2 + 2 * q1 * p2 + p1 ** 3,
        (3, 7): 3 * p1 ** 2 * q1 + 2 * q1 * q2 + l1 * q1 ** 2,
        (3, 8): 3 * p1 * q1 ** 2,
        (3, 9): q1 ** 3,
    }


# ---------------------------------------------------------------------------
# exact truncated power series
# ---------------------------------------------------------------------------


class PowerSeries:
    """One-variable integer series truncated at `order` (inclusive)."""

    def __init__(self, coeffs, order: int):
        self.order = order
        self.coeffs = list(coeffs)[: order + 1]
        self.coeffs += [0] * (order + 1 - len(self.coeffs))

    @classmethod
    def from_poly(cls, coeff_dict: dict, order: int) -> "PowerSeries":
        coeffs = [0] * (order + 1)
        for k, c in coeff_dict.items():
            if 0 <= k <= order:
                coeffs[k] = c
        return cls(coeffs, order)

    def coefficient(self, k: int) -> int:
        if k > self.order:
            raise SequenceError(f"coefficient {k} beyond truncation {self.order}")
        return self.coeffs[k] if k >= 0 else 0

    def __add__(self, other):
        order = min(self.order, other.order)
        return PowerSeries(
            [self.coeffs[k] + other.coeffs[k] for k in range(order + 1)], order)

    def __mul__(self, other):
        order = min(self.order, other.order)
        out = [0] * (order + 1)
        for i, a in enumerate(self.coeffs[: order + 1]):
            if a == 0:
                continue
            for j in range(order + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return PowerSeries(out, order)

    def reciprocal(self) -> "PowerSeries":
        """Inverse of a unit series; verified by multiplying back."""
        if self.coeffs[0] not in (1, -1):
            raise SequenceError("reciprocal needs a unit constant term of +-1")
        u = self.coeffs[0]
        out = [u]
        for k in range(1, self.order + 1):
            s = sum(self.coeffs[i] * out[k - i] for i in range(1, k + 1))
            out.append(-u * s)
        inv = PowerSeries(out, self.order)
        check = self * inv
        assert check.coeffs[0] == 1 and not any(check.coeffs[1:]), \
            "series reciprocal failed its product check"
        return inv

    def __eq__(self, other):
        order = min(self.order, other.order)
        return self.coeffs[: order + 1] == other.coeffs[: order + 1]

    def __repr__(self):
        return f"PowerSeries({self.coeffs})"


class PowerSeries2:
    """Two-variable integer series sum_k t^k * (polynomial in z), truncated in
    the t-degree; each t-slice is a dict {z-degree: coefficient} (finite for
    the rational series used here)."""

    def __init__(self, slices, order: int):
        self.order = order
        self.slices = [dict(s) for s in slices[: order + 1]]
        self.slices += [{} for _ in range(order + 1 - len(self.slices))]

    @classmethod
    def from_terms(cls, terms: dict, order: int) -> "PowerSeries2":
        """terms: {(t-degree, z-degree): coefficient}."""
        slices = [{} for _ in range(order + 1)]
        for (k, s), c in terms.items():
            if 0 <= k <= order and c:
                slices[k][s] = slices[k].get(s, 0) + c
        return cls(slices, order)

    def coefficient(self, k: int, s: int) -> int:
        if k > self.order:
            raise SequenceError(f"t-degree {k} beyond truncation {self.order}")
        return self.slices[k].get(s, 0) if k >= 0 else 0

    def __add__(self, other):
        order = min(self.order, other.order)
        slices = []
        for k in range(order + 1):
            d = dict(self.slices[k])
            for s, c in other.slices[k].items():
                d[s] = d.get(s, 0) + c
            slices.append({s: c for s, c in d.items() if c})
        return PowerSeries2(slices, order)

    def __mul__(self, other):
        order = min(self.order, other.order)
        slices = [dict() for _ in range(order + 1)]
        for i in range(order + 1):
            if not self.slices[i]:
                continue
            for j in range(order + 1 - i):
                if not other.slices[j]:
                    continue
                target = slices[i + j]
                for s1, c1 in self.slices[i].items():
                    for s2, c2 in other.slices[j].items():
                        s = s1 + s2
                        target[s] = target.get(s, 0) + c1 * c2
        return PowerSeries2([{s: c for s, c in d.items() if c} for d in slices], order)

    def reciprocal(self) -> "PowerSeries2":
        if self.slices[0] != {0: 1}:
            raise SequenceError("two-variable reciprocal needs constant slice 1")
        inv = [{0: 1}]
        for k in range(1, self.order + 1):
            acc: dict = {}
            for i in range(1, k + 1):
                for s1, c1 in self.slices[i].items():
                    for s2, c2 in inv[k - i].items():
                        s = s1 + s2
                        acc[s] = acc.get(s, 0) - c1 * c2
            inv.append({s: c for s, c in acc.items() if c})
        out = PowerSeries2(inv, self.order)
        check = self * out
        assert check.slices[0] == {0: 1} and all(not d for d in check.slices[1:]), \
            "two-variable reciprocal failed its product check"
        return out

    def diagonal(self) -> PowerSeries:
        """Substitute z = t: a one-variable series of the same truncation
        order (valid because every z-degree here is >= its t-degree)."""
        coeffs = [0] * (self.order + 1)
        for k in range(self.order + 1):
            for s, c in self.slices[k].items():
                if k + s <= self.order:
                    coeffs[k + s] += c
        return PowerSeries(coeffs, self.order)

    def __repr__(self):
        return f"PowerSeries2({self.slices})"


def geometric_binomial(n: int, order: int) -> PowerSeries:
    """(1+t)^n truncated."""
    return PowerSeries.from_poly({k: comb(n, k) for k in range(n + 1)}, order)


# ---------------------------------------------------------------------------
# Poincare series
# ---------------------------------------------------------------------------


def poincare_T(a1: int, a2: int, a3: int, n: int, order: int = 12):
    """Graded and single-variable Poincare series for class T.

    P^A(t,z) is the reciprocal of
        1 - a1 t z - (a2-3) t z^2 + 3 t^2 z^2 - a3 t z^3 - t^2 z^3 - t^3 z^3
    and P^R(t) = (1+t)^n P^A(t,t), whose denominator collapses to
        1 - a1 t^2 - (a2-3) t^3 - (a3-3) t^4 - t^5 - t^6.
    """
    if order < 0:
        raise SequenceError("order must be >= 0")
    denom2 = PowerSeries2.from_terms({
        (0, 0): 1,
        (1, 1): -a1,
        (1, 2): -(a2 - 3),
        (2, 2): 3,
        (1, 3): -a3,
        (2, 3): -1,
        (3, 3): -1,
    }, order)
    PA = denom2.reciprocal()
    PR = geometric_binomial(n, order) * PA.diagonal()
    return PA, PR


def poincare_T_denominator(a1: int, a2: int, a3: int, order: int) -> PowerSeries:
    return PowerSeries.from_poly(
        {0: 1, 2: -a1, 3: -(a2 - 3), 4: -(a3 - 3), 5: -1, 6: -1}, order)


def poincare_CI(c: int, n: int, order: int = 12):
    """P^A(t,z) = 1/(1-tz)^c and P^R(t) = (1+t)^n/(1-t^2)^c."""
    if c < 1:
        raise SequenceError("codepth must be >= 1")
    one_minus_tz = PowerSeries2.from_terms({(0, 0): 1, (1, 1): -1}, order)
    PA = one_minus_tz.reciprocal()
    for _ in range(c - 1):
        PA = PA * one_minus_tz.reciprocal()
    one_minus_t2 = PowerSeries.from_poly({0: 1, 2: -1}, order)
    PR = geometric_binomial(n, order)
    inv = one_minus_t2.reciprocal()
    for _ in range(c):
        PR = PR * inv
    return PA, PR


def class_t_generating_functions(a1: int, a2: int, a3: int, order: int):
    """(f, g, h, d-series): the generating functions of l, l', l'' and d."""
    base = PowerSeries.from_poly(
        {0: 1, 1: -3 - (a1 - 3), 2: 3, 3: -1}, order)  # (1-t)^3 - t(a1-3)
    f = base.reciprocal()
    g = PowerSeries.from_poly({2: 1, 1: a2 - 3}, order) * f
    h = PowerSeries.from_poly({1: a3}, order) * f
    dser = PowerSeries.from_poly({1: a1 - 3}, order) * f + PowerSeries.from_poly({0: 1}, order)
    return f, g, h, dser


def generating_function_check(pack: SequencePack, order: int) -> list:
    """Match the recurrence tables against the rational generating functions,
    and check L(t, 1) = f + g + h coefficientwise.

    Returns (name, k, table value, series value, ok) tuples.
    """
    if order > pack.k_max:
        raise SequenceError("order exceeds the table size")
    f, g, h, dser = class_t_generating_functions(pack.a1, pack.a2, pack.a3, order)
    out = []
    for k in range(order + 1):
        out.append(("l", k, pack.l[k], f.coefficient(k), pack.l[k] == f.coefficient(k)))
        out.append(("lp", k, pack.lp[k], g.coefficient(k), pack.lp[k] == g.coefficient(k)))
        out.append(("lpp", k, pack.lpp[k], h.coefficient(k), pack.lpp[k] == h.coefficient(k)))
        out.append(("d", k, pack.d[k], dser.coefficient(k), pack.d[k] == dser.coefficient(k)))
    total = f + g + h
    for k in range(order + 1):
        lsum = pack.l[k] + pack.lp[k] + pack.lpp[k]
        out.append(("L(t,1)", k, lsum, total.coefficient(k),
                    lsum == total.coefficient(k)))
    return out
