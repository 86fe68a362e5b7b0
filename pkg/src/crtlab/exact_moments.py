"""Exact moment polynomials of the cographon edge density.

The k-th moment of the random edge density, as a function of the decoration
bias p, equals E[p^S] where S is the number of distinct pairwise last common
ancestors of k uniform leaf pairs in the skeleton tree.  It therefore is a
polynomial in p whose coefficient of p^s is exactly P(S = s).  This module
computes those polynomials in exact rational arithmetic via a quadratic
recurrence over root decompositions of the skeleton, together with the
unnormalized integer-coefficient companion polynomials (counts over all
labeled skeletons), the distribution of S, and factorial moments of S.

All arithmetic is exact (`fractions.Fraction` / Python ints); there is no
floating point anywhere in this module.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

__all__ = [
    "BigRat",
    "MomentPoly",
    "double_factorial",
    "catalan",
    "labeled_tree_count",
    "remy_attachment_count",
    "moment_polys",
    "b_poly",
    "sk_distribution",
    "factorial_moment_at_one",
    "parse_rational",
]

# Exact rationals are plain stdlib fractions: always reduced, positive
# denominator by construction.
BigRat = Fraction


# ---------------------------------------------------------------------------
# combinatorial primitives
# ---------------------------------------------------------------------------

# cache[j] = (2j-1)!!, so cache[0] = (-1)!! = 1
_df_cache: list[int] = [1, 1]
_df_lock = threading.Lock()


def double_factorial(m: int) -> int:
    """m!! for odd m >= -1, with (-1)!! = 1."""
    if m < -1 or m % 2 == 0:
        raise ValueError(f"double factorial needs an odd integer >= -1, got {m}")
    j = (m + 1) // 2
    if j >= len(_df_cache):
        with _df_lock:
            while len(_df_cache) <= j:
                n = len(_df_cache)
                _df_cache.append(_df_cache[-1] * (2 * n - 1))
    return _df_cache[j]


def catalan(n: int) -> int:
    """n-th Catalan number, with the convention catalan(-1) = 1."""
    if n < -1:
        raise ValueError(f"catalan needs n >= -1, got {n}")
    if n == -1:
        return 1
    return comb(2 * n, n) // (n + 1)


def labeled_tree_count(k: int) -> int:
    """Number of planted binary trees with 2k labeled leaves: (2k)! Cat(2k-1)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return factorial(2 * k) * catalan(2 * k - 1)


def remy_attachment_count(k1: int, k3: int) -> int:
    """Ways to attach k3 labeled leaves, one by one at a uniform edge side,
    to a planted tree with 2*k1 labeled leaves.

    Equals prod_{i=0}^{k3-1} 2(4k1 - 1 + 2i) for k1 >= 1, and the closed
    form (4k1 + 2k3 - 3)!! 2^(2k1 + k3 - 1) / ((2k1)! Cat(2k1 - 1)) in
    general (with Cat(-1) = 1 covering k1 = 0).
    """
    if k1 < 0 or k3 < 1:
        raise ValueError("need k1 >= 0 and k3 >= 1")
    if k1 == 0:
        # closed form with (2*0)! = 1 and Cat(-1) = 1
        return double_factorial(2 * k3 - 3) * 2 ** (k3 - 1)
    out = 1
    for i in range(k3):
        out *= 2 * (4 * k1 - 1 + 2 * i)
    return out


# ---------------------------------------------------------------------------
# the moment polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentPoly:
    """Moment polynomial of order k: coeffs[s] is the exact P(S_k = s).

    Coefficients are nonnegative, sum to 1, and coeffs[0] == 0 for k >= 1.
    Evaluation at p in [0, 1] gives the k-th moment of the edge density.
    """

    k: int
    coeffs: tuple[Fraction, ...]

    def __call__(self, p: Fraction | int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * p + c
        return acc

    def derivative_at_one(self, order: int = 1) -> Fraction:
        """order-th derivative at p = 1, i.e. the order-th factorial moment
        of S_k."""
        if order < 1:
            raise ValueError("order must be >= 1")
        acc = Fraction(0)
        for s, c in enumerate(self.coeffs):
            if s >= order:
                ff = 1
                for i in range(order):
                    ff *= s - i
                acc += c * ff
        return acc

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs],
        }


# memoized polynomial caches; readers of already-published entries are safe,
# writers extend under the lock
_lock = threading.Lock()
_a_cache: list[tuple[Fraction, ...]] = [(Fraction(1),)]
_b_cache: list[tuple[int, ...]] = [(1,)]
_prod_cache: dict[tuple[int, int], tuple[Fraction, ...]] = {}


def _poly_mul_frac(f: tuple[Fraction, ...], g: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi:
            for j, gj in enumerate(g):
                if gj:
                    out[i + j] += fi * gj
    return tuple(out)


def _a_product(k1: int, k2: int) -> tuple[Fraction, ...]:
    key = (k1, k2) if k1 <= k2 else (k2, k1)
    got = _prod_cache.get(key)
    if got is None:
        got = _poly_mul_frac(_a_cache[key[0]], _a_cache[key[1]])
        _prod_cache[key] = got
    return got


def _term_weight(k: int, k1: int, k2: int, k3: int) -> Fraction:
    # multinomial times the double-factorial ratio, reduced once per term
    num = (
        double_factorial(4 * k1 + 2 * k3 - 3)
        * double_factorial(4 * k2 + 2 * k3 - 3)
        * factorial(k)
    )
    den = (
        double_factorial(4 * k - 3)
        * factorial(k1)
        * factorial(k2)
        * factorial(k3)
    )
    if k3 >= 1:
        num *= 2 ** (k3 - 1)
    else:
        den *= 2
    return Fraction(num, den)


def _extend_a(k_max: int) -> None:
    with _lock:
        for k in range(len(_a_cache), k_max + 1):
            acc = [Fraction(0)] * (k + 1)
            for k1 in range(0, k + 1):
                for k2 in range(k1, k - k1 + 1):
                    k3 = k - k1 - k2
                    if k1 + k3 == 0 or k2 + k3 == 0:
                        continue
                    w = _term_weight(k, k1, k2, k3)
                    if k1 != k2:
                        w *= 2
                    prod = _a_product(k1, k2)
                    shift = 1 if k3 else 0
                    for s, c in enumerate(prod):
                        if c:
                            acc[s + shift] += w * c
            _a_cache.append(tuple(acc))


def moment_polys(k_max: int) -> list[MomentPoly]:
    """Moment polynomials of orders 0..k_max, exactly.

    Cost grows like O(k_max^4) exact-rational coefficient operations with
    coefficient bitsizes of order k log k; orders up to a couple of hundred
    are practical.
    """
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    if k_max >= len(_a_cache):
        _extend_a(k_max)
    return [MomentPoly(k, _a_cache[k]) for k in range(k_max + 1)]


def _poly_mul_int(f: tuple[int, ...], g: tuple[int, ...]) -> list[int]:
    out = [0] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi:
            for j, gj in enumerate(g):
                if gj:
                    out[i + j] += fi * gj
    return out


def b_poly(k: int) -> tuple[int, ...]:
    """Integer-coefficient companion polynomial of order k.

    Coefficient s counts the labeled skeletons with 2k leaves having exactly
    s distinct pair ancestors, so b_poly(k) evaluated at p equals
    labeled_tree_count(k) times the k-th moment polynomial at p.  Computed
    by its own unnormalized recurrence (attachment counts), independent of
    moment_polys, so the two routes cross-check each other.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    with _lock:
        for kk in range(len(_b_cache), k + 1):
            acc = [0] * (kk + 1)
            for k1 in range(0, kk + 1):
                for k2 in range(k1, kk - k1 + 1):
                    k3 = kk - k1 - k2
                    if k1 + k3 == 0 or k2 + k3 == 0:
                        continue
                    w = factorial(kk) // (factorial(k1) * factorial(k2) * factorial(k3))
                    if k3 >= 1:
                        w *= (
                            2**k3
                            * remy_attachment_count(k1, k3)
                            * remy_attachment_count(k2, k3)
                        )
                    if k1 != k2:
                        w *= 2
                    prod = _poly_mul_int(_b_cache[k1], _b_cache[k2])
                    shift = 1 if k3 else 0
                    for s, c in enumerate(prod):
                        if c:
                            acc[s + shift] += w * c
            _b_cache.append(tuple(acc))
    return _b_cache[k]


def sk_distribution(k: int) -> list[Fraction]:
    """Exact law of the distinct-ancestor count: [P(S_k = 1), ..., P(S_k = k)]."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return list(moment_polys(k)[k].coeffs[1:])


def factorial_moment_at_one(k: int, order: int = 1) -> Fraction:
    """E[S_k (S_k - 1) ... (S_k - order + 1)], exactly.

    order = 1 gives E S_k; the second moment is the sum of orders 2 and 1.
    Zero whenever order > k.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return Fraction(0)
    return moment_polys(k)[k].derivative_at_one(order)


def parse_rational(text: str) -> Fraction:
    """Parse a 'num/den' (or plain integer) string into an exact rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc
