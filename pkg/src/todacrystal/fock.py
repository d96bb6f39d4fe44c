"""Partition-basis free-fermion engine.

States are labelled by (partition, charge).  Charge-preserving operators are
either diagonal in that basis (with exact eigenvalues) or vertex-type, with
matrix elements given by skew Schur functions.  Expectation values insert the
partition of unity between consecutive factors, truncating intermediate
partitions at a weight cutoff; whenever a Q-grading factor is present the
coefficient of each Q-power below the cutoff is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache

from .partitions import Partition, contains, contents, kappa, partitions_up_to, weight
from .scalars import ExactScalar, ONE, ZERO, bigQ_pow, scalar, u_pow
from .schur import (
    SchurBank,
    SpecPoint,
    skew_schur_conj_spec,
    skew_schur_spec,
)
from .series import SeriesRing, TruncSeries


@dataclass(frozen=True)
class FockIndex:
    lam: Partition
    s: int


# ---------------------------------------------------------------------------
# diagonal eigenvalues

def phi_k(k: int, lam: Partition, s: int) -> ExactScalar:
    """External potential phi_k(lam, s), the H_k eigenvalue.

    The infinite level sums are regularized to the finite combination
    sum_i (q^{k(lam_i-i+1+s)} - q^{k(-i+1+s)}) plus the boundary sum over the
    levels between 0 and s, written out case by case (which is where the
    closed form q^k (1-q^{ks})/(1-q^k) comes from).
    """
    if k == 0:
        raise ValueError("H_0 is excluded; its regularized eigenvalue is the charge data")
    acc = ZERO
    for i, part in enumerate(lam, start=1):
        acc = acc + u_pow(24 * k * (part - i + 1 + s)) - u_pow(24 * k * (-i + 1 + s))
    if s > 0:
        for j in range(1, s + 1):
            acc = acc + u_pow(24 * k * j)
    elif s < 0:
        for j in range(s + 1, 1):
            acc = acc - u_pow(24 * k * j)
    return acc


def l0_eigenvalue(lam: Partition, s: int) -> ExactScalar:
    return scalar(weight(lam) + s * (s + 1) // 2)


def k_eigenvalue(lam: Partition, s: int) -> ExactScalar:
    val = Fraction(12 * kappa(lam) + 24 * s * weight(lam) + 4 * s**3 - s, 12)
    return scalar(val)


def hyper_vacuum(r, s: int) -> ExactScalar:
    """<s|g|s> for a diagonal g given by ratios r_n, normalized by T_0 = 0."""
    if s == 0:
        return ONE
    acc = ONE
    if s > 0:
        e_t = ONE
        for j in range(1, s + 1):
            e_t = e_t * r(j)
            acc = acc * e_t
        return acc
    e_tm = ONE  # e^{-T_{-m}}, starting at m = 0
    for i in range(1, -s + 1):
        m = i - 1
        if m > 0:
            e_tm = e_tm * r(-(m - 1))
        acc = acc * e_tm
    return acc


def hyper_eigenvalue(r, lam: Partition, s: int) -> ExactScalar:
    """<lam,s|g|lam,s> = <s|g|s> * prod over cells of r_{content+1+s}."""
    acc = hyper_vacuum(r, s)
    for c in contents(lam):
        acc = acc * r(c + 1 + s)
    return acc


class DiagFactor:
    """Base for factors diagonal in the (partition, charge) basis."""

    def eigenvalue(self, lam: Partition, s: int):
        raise NotImplementedError

    def keeps(self, lam: Partition, s: int) -> bool:
        return True


@dataclass(frozen=True)
class DiagL0(DiagFactor):
    def eigenvalue(self, lam, s):
        return l0_eigenvalue(lam, s)


@dataclass(frozen=True)
class DiagK(DiagFactor):
    def eigenvalue(self, lam, s):
        return k_eigenvalue(lam, s)


@dataclass(frozen=True)
class DiagHk(DiagFactor):
    k: int

    def __post_init__(self):
        if self.k == 0:
            raise ValueError("DiagHk requires k != 0")

    def eigenvalue(self, lam, s):
        return phi_k(self.k, lam, s)


@dataclass(frozen=True)
class DiagQL0(DiagFactor):
    """Q^{L_0}; an optional cap drops states beyond a Q-degree."""

    qcap: int | None = None

    def eigenvalue(self, lam, s):
        return bigQ_pow(weight(lam) + s * (s + 1) // 2)

    def keeps(self, lam, s):
        return self.qcap is None or weight(lam) + s * (s + 1) // 2 <= self.qcap


@dataclass(frozen=True)
class DiagQK2(DiagFactor):
    """e^{beta K/2} with e^{beta/2} = u**base (base = 12 means q^{K/2}).

    The exponent base*(12*kappa + 24*s|lam| + 4s^3 - s)/12 must be integral;
    base = 12 always is.
    """

    sign: int = 1
    base: int = 12

    def eigenvalue(self, lam, s):
        e = self.sign * self.base * (12 * kappa(lam) + 24 * s * weight(lam) + 4 * s**3 - s)
        if e % 12:
            raise ValueError("e^{beta/2} base leaves the u-lattice at this charge")
        return u_pow(e // 12)


@dataclass(frozen=True)
class DiagExpH(DiagFactor):
    """exp(sum_k t_k H_k [+ sum_k tbar_k H_{-k}]), eigenvalue a TruncSeries."""

    ring: SeriesRing
    pos_bank: str = "t"
    neg_bank: str | None = None

    def __hash__(self):
        return hash((id(self.ring), self.pos_bank, self.neg_bank))

    def eigenvalue(self, lam, s):
        acc = self.ring.zero
        for k in range(1, self.ring.arity(self.pos_bank) + 1):
            acc = acc + self.ring.gen(self.pos_bank, k).smul(phi_k(k, lam, s))
        if self.neg_bank is not None:
            for k in range(1, self.ring.arity(self.neg_bank) + 1):
                acc = acc + self.ring.gen(self.neg_bank, k).smul(phi_k(-k, lam, s))
        return acc.exp()


class DiagHyper(DiagFactor):
    """Diagonal g from contents-product data r_n (callable n -> scalar)."""

    def __init__(self, r):
        self.r = r
        self.degenerate_hits: list[tuple[Partition, int]] = []

    def eigenvalue(self, lam, s):
        val = hyper_eigenvalue(self.r, lam, s)
        if not val:
            self.degenerate_hits.append((lam, s))
        return val


# ---------------------------------------------------------------------------
# vertex factors

@dataclass(frozen=True)
class Gamma:
    """Gamma_{+-}(x) or its primed variant; sign +1 raises the bra diagram."""

    sign: int
    x: SpecPoint
    primed: bool = False


class GammaSeries:
    """gamma_{+-} with series arguments a_1, a_2, ... (one SchurBank)."""

    def __init__(self, sign: int, bank: SchurBank):
        self.sign = sign
        self.bank = bank

    @staticmethod
    def plus(ring: SeriesRing, bank_name: str = "t", scales=None, negate=False) -> "GammaSeries":
        return GammaSeries(+1, _scaled_bank(ring, bank_name, scales, negate))

    @staticmethod
    def minus(ring: SeriesRing, bank_name: str = "tb", scales=None, negate=False) -> "GammaSeries":
        return GammaSeries(-1, _scaled_bank(ring, bank_name, scales, negate))


def _scaled_bank(ring: SeriesRing, bank_name: str, scales, negate: bool) -> SchurBank:
    arity = ring.arity(bank_name)
    sign = -ONE if negate else ONE

    def coeff(k):
        if k > arity:
            return ring.zero
        g = ring.gen(bank_name, k).smul(sign)
        if scales is not None:
            g = g.smul(scales(k))
        return g

    return SchurBank(ring, coeff)


def vertex_matrix_element(factor, bra: Partition, ket: Partition, s: int = 0):
    """<bra,s| factor |ket,s> for Gamma- or gamma-type factors."""
    if isinstance(factor, Gamma):
        lam, mu = (bra, ket) if factor.sign < 0 else (ket, bra)
        if factor.primed:
            return skew_schur_conj_spec(lam, mu, factor.x)
        return skew_schur_spec(lam, mu, factor.x)
    if isinstance(factor, GammaSeries):
        lam, mu = (bra, ket) if factor.sign < 0 else (ket, bra)
        return factor.bank.skew(lam, mu)
    raise TypeError(f"not a vertex factor: {factor!r}")


# ---------------------------------------------------------------------------
# expectation values

def _c_mul(a, b):
    if isinstance(a, TruncSeries):
        return a * b if isinstance(b, TruncSeries) else a.smul(b)
    if isinstance(b, TruncSeries):
        return b.smul(a)
    return a * b


def _c_is_zero(a) -> bool:
    return a.is_zero() if isinstance(a, TruncSeries) else not a


@lru_cache(maxsize=None)
def _subdiagrams(lam: Partition) -> tuple[Partition, ...]:
    return tuple(mu for mu in partitions_up_to(weight(lam)) if contains(lam, mu))


@lru_cache(maxsize=None)
def _superdiagrams(lam: Partition, w_cap: int) -> tuple[Partition, ...]:
    return tuple(mu for mu in partitions_up_to(w_cap) if contains(mu, lam))


def expectation(factors, s: int, w_cap: int, s_ket: int | None = None):
    """<s| f_1 f_2 ... f_n |s'> with intermediate partitions of weight <= w_cap.

    Every supported factor preserves charge, so a mismatched ket charge gives
    exactly zero.  The state is folded from the bra side; diagonal factors
    rescale in place, vertex factors hop along containment of diagrams.
    """
    if w_cap < 0:
        raise ValueError("weight cutoff must be nonnegative")
    if s_ket is not None and s_ket != s:
        return ZERO
    state: dict[Partition, object] = {(): ONE}
    for f in factors:
        if isinstance(f, DiagFactor):
            new = {}
            for lam, c in state.items():
                if not f.keeps(lam, s):
                    continue
                v = _c_mul(c, f.eigenvalue(lam, s))
                if not _c_is_zero(v):
                    new[lam] = v
            state = new
        else:
            raising = (isinstance(f, Gamma) and f.sign > 0) or (
                isinstance(f, GammaSeries) and f.sign > 0
            )
            new = {}
            for lam, c in state.items():
                targets = _superdiagrams(lam, w_cap) if raising else _subdiagrams(lam)
                for mu in targets:
                    el = vertex_matrix_element(f, lam, mu, s)
                    if _c_is_zero(el):
                        continue
                    v = _c_mul(c, el)
                    if _c_is_zero(v):
                        continue
                    if mu in new:
                        new[mu] = new[mu] + v
                    else:
                        new[mu] = v
            state = {m: c for m, c in new.items() if not _c_is_zero(c)}
    return state.get((), ZERO)


# ---------------------------------------------------------------------------
# gl(infinity) cocycle and Heisenberg elements

def cocycle(a: dict, b: dict) -> ExactScalar:
    """c-number cocycle gamma(A, B) on finitely supported matrices.

    Oriented so that gamma(Lambda^m, Lambda^{-m}) = m, matching the
    Heisenberg relations [J_m, J_{-m}] = m; the sum runs over the vacuum
    boundary i <= 0 < j.
    """
    acc = ZERO
    for (i, j), va in a.items():
        if i <= 0 < j:
            vb = b.get((j, i))
            if vb is not None:
                acc = acc + va * vb
    for (i, j), vb in b.items():
        if i <= 0 < j:
            va = a.get((j, i))
            if va is not None:
                acc = acc - vb * va
    return acc


def shift_pattern(n: int, lo: int, hi: int) -> dict:
    """Lambda^n restricted to the index square [lo, hi]^2."""
    out = {}
    for i in range(lo, hi + 1):
        if lo <= i + n <= hi:
            out[(i, i + n)] = ONE
    return out


@lru_cache(maxsize=None)
def _jm_ring(m: int) -> SeriesRing:
    return SeriesRing(m, ("t", m))


def j_element(m: int, lam: Partition, mu: Partition) -> ExactScalar:
    """<lam,s|J_{-m}|mu,s> = <mu,s|J_m|lam,s>, independent of s (m > 0)."""
    if m <= 0:
        raise ValueError("use a positive mode index")
    from .schur import skew_schur_S

    ring = _jm_ring(m)
    return skew_schur_S(ring, lam, mu).coeff_var("t", m)
