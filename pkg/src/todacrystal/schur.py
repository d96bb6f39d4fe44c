"""Schur-type polynomials of time variables and their specializations.

``S_n`` is the coefficient of z**n in exp(sum_k t_k z**k); skew variants come
from the determinant formula det(S_{lam_i - mu_j - i + j}).  Substituting
power sums t_k = (1/k) sum_i x_i**k turns these into the symmetric functions
h_n(x) and s_{lam/mu}(x).  At the geometric points x_i = c*q**(i-1/2) all of
those values close up into exact rational functions of u.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .partitions import Partition, conjugate, contains, hooks, kappa, weight
from .scalars import (
    ExactScalar,
    ONE,
    ZERO,
    det_exact,
    scalar,
    u_pow,
    u_series,
)
from .series import SeriesRing, TruncSeries


class SchurBank:
    """S_n and skew determinants for one coefficient vector a_1, a_2, ...

    ``coeff(k)`` supplies the series standing in for t_k; the generating
    recurrence n*S_n = sum_k k*a_k*S_{n-k} then builds everything inside the
    target ring.  Instances cache aggressively, so share them.
    """

    def __init__(self, ring: SeriesRing, coeff):
        self.ring = ring
        self._coeff = coeff
        self._sn: list[TruncSeries] = [ring.one]
        self._skew: dict = {}

    def S(self, n: int) -> TruncSeries:
        if n < 0:
            return self.ring.zero
        while len(self._sn) <= n:
            m = len(self._sn)
            acc = self.ring.zero
            for k in range(1, m + 1):
                ak = self._coeff(k)
                if ak.is_zero():
                    continue
                acc = acc + (ak * self._sn[m - k]).smul(scalar(k))
            self._sn.append(acc.smul(scalar(1) / scalar(m)))
        return self._sn[n]

    def skew(self, lam: Partition, mu: Partition = ()) -> TruncSeries:
        key = (lam, mu)
        if key not in self._skew:
            if not contains(lam, mu):
                self._skew[key] = self.ring.zero
            else:
                n = max(len(lam), len(mu), 1)
                lam_p = lam + (0,) * (n - len(lam))
                mu_p = mu + (0,) * (n - len(mu))
                self._skew[key] = _det_series(
                    [[self.S(lam_p[i] - mu_p[j] - i + j) for j in range(n)] for i in range(n)]
                )
        return self._skew[key]


def _det_series(rows: list[list[TruncSeries]]) -> TruncSeries:
    """Cofactor determinant; matrices here stay small (side <= ~7)."""
    n = len(rows)
    ring = rows[0][0].ring
    if n == 1:
        return rows[0][0]

    cache: dict = {}

    def minor(r: int, cols: tuple[int, ...]) -> TruncSeries:
        if r == n:
            return ring.one
        key = cols
        if key in cache:
            return cache[key]
        acc = ring.zero
        for pos, c in enumerate(cols):
            entry = rows[r][c]
            if entry.is_zero():
                continue
            sub = minor(r + 1, cols[:pos] + cols[pos + 1:])
            term = entry * sub
            acc = acc + (term if pos % 2 == 0 else -term)
        cache[key] = acc
        return acc

    return minor(0, tuple(range(n)))


_plain_banks: dict = {}


def plain_bank(ring: SeriesRing, bank: str = "t", negate: bool = False) -> SchurBank:
    """Shared SchurBank for arguments +-(t_k) of one ring bank."""
    key = (id(ring), bank, negate)
    if key not in _plain_banks:
        arity = ring.arity(bank)
        sign = -ONE if negate else ONE

        def coeff(k, _arity=arity, _bank=bank, _sign=sign, _ring=ring):
            if k > _arity:
                return _ring.zero
            return _ring.gen(_bank, k).smul(_sign)

        _plain_banks[key] = SchurBank(ring, coeff)
    return _plain_banks[key]


def schur_S(ring: SeriesRing, n: int, bank: str = "t") -> TruncSeries:
    """S_n(t): coefficient of z**n in exp(sum t_k z**k); zero for n < 0."""
    if n > ring.cutoff:
        return ring.zero
    return plain_bank(ring, bank).S(n)


def skew_schur_S(ring: SeriesRing, lam: Partition, mu: Partition = (), bank: str = "t") -> TruncSeries:
    """S_{lam/mu}(t) by the determinant formula; zero when mu is not in lam."""
    if weight(lam) - weight(mu) > ring.cutoff:
        return ring.zero
    return plain_bank(ring, bank).skew(lam, mu)


# ---------------------------------------------------------------------------
# specializations

@dataclass(frozen=True)
class SpecPoint:
    """Point of substitution for the x-variables.

    kind "finite":            x = values (a finite tuple of scalars)
    kind "principal":         x_i = q**(i-1/2)
    kind "scaled-principal":  x_i = scale * q**(i-1/2)
    """

    kind: str
    values: tuple[ExactScalar, ...] = ()
    scale: ExactScalar = ONE

    @staticmethod
    def finite(*values) -> "SpecPoint":
        vals = tuple(v if isinstance(v, ExactScalar) else scalar(v) for v in values)
        return SpecPoint("finite", values=vals)

    @staticmethod
    def principal(scale=None) -> "SpecPoint":
        if scale is None:
            return SpecPoint("principal")
        if not isinstance(scale, ExactScalar):
            scale = scalar(scale)
        return SpecPoint("scaled-principal", scale=scale)

    def power_sum(self, k: int) -> ExactScalar:
        """p_k(x), closed form at geometric points: c^k q^{k/2}/(1-q^k)."""
        if self.kind == "finite":
            acc = ZERO
            for v in self.values:
                acc = acc + v**k
            return acc
        geo = u_pow(12 * k) / (ONE - u_pow(24 * k))
        if self.kind == "principal":
            return geo
        return self.scale**k * geo


def power_sum_subst(s: TruncSeries, x: SpecPoint, order: int | None = None):
    """Evaluate a series of t at t_k = p_k(x)/k.

    Exact scalar by default; with ``order`` the result is returned as its
    q-expansion, a dict of u-exponents below 24*order.  Only the closed-form
    points carried by SpecPoint are accepted, so nothing here can diverge.
    """
    values = {}
    for bank, arity in s.ring.banks:
        for k in range(1, arity + 1):
            values[(bank, k)] = x.power_sum(k) / scalar(k)
    exact = s.eval_scalars(values)
    if order is None:
        return exact
    return u_series(exact, 24 * order)


@lru_cache(maxsize=None)
def h_principal(m: int) -> ExactScalar:
    """h_m(q^{-rho}) = q^{m/2} / prod_{l<=m} (1 - q^l)."""
    if m < 0:
        return ZERO
    den = ONE
    for l in range(1, m + 1):
        den = den * (ONE - u_pow(24 * l))
    return u_pow(12 * m) / den


@lru_cache(maxsize=None)
def e_principal(m: int) -> ExactScalar:
    """e_m(q^{-rho}) = q^{m^2/2} / prod_{l<=m} (1 - q^l)."""
    if m < 0:
        return ZERO
    den = ONE
    for l in range(1, m + 1):
        den = den * (ONE - u_pow(24 * l))
    return u_pow(12 * m * m) / den


def _spec_det(lam: Partition, mu: Partition, entry) -> ExactScalar:
    if not contains(lam, mu):
        return ZERO
    n = max(len(lam), len(mu), 1)
    lam_p = lam + (0,) * (n - len(lam))
    mu_p = mu + (0,) * (n - len(mu))
    return det_exact([[entry(lam_p[i] - mu_p[j] - i + j) for j in range(n)] for i in range(n)])


@lru_cache(maxsize=None)
def skew_schur_principal(lam: Partition, mu: Partition = ()) -> ExactScalar:
    """s_{lam/mu}(q^{-rho}) via the h-determinant."""
    return _spec_det(lam, mu, h_principal)


@lru_cache(maxsize=None)
def skew_schur_conj_principal(lam: Partition, mu: Partition = ()) -> ExactScalar:
    """s_{t(lam)/t(mu)}(q^{-rho}): the e-determinant on (lam, mu) itself."""
    return _spec_det(lam, mu, e_principal)


def scale_power(x: SpecPoint, lam: Partition, mu: Partition = ()) -> ExactScalar:
    """Homogeneity factor scale**(|lam|-|mu|) for scaled-principal points."""
    return x.scale ** (weight(lam) - weight(mu))


def skew_schur_spec(lam: Partition, mu: Partition, x: SpecPoint) -> ExactScalar:
    """s_{lam/mu}(x) for any SpecPoint, exact."""
    if x.kind == "finite":
        entry = lambda m: _h_finite(x.values, m)
        return _spec_det(lam, mu, entry)
    return skew_schur_principal(lam, mu) * scale_power(x, lam, mu)


def skew_schur_conj_spec(lam: Partition, mu: Partition, x: SpecPoint) -> ExactScalar:
    """s_{t(lam)/t(mu)}(x) for any SpecPoint, exact."""
    if x.kind == "finite":
        entry = lambda m: _e_finite(x.values, m)
        return _spec_det(lam, mu, entry)
    return skew_schur_conj_principal(lam, mu) * scale_power(x, lam, mu)


def _h_finite(values, m: int) -> ExactScalar:
    if m < 0:
        return ZERO
    if m == 0:
        return ONE
    # n*h_n = sum p_k h_{n-k}
    hs = [ONE]
    for n in range(1, m + 1):
        acc = ZERO
        for k in range(1, n + 1):
            pk = ZERO
            for v in values:
                pk = pk + v**k
            acc = acc + pk * hs[n - k]
        hs.append(acc / scalar(n))
    return hs[m]


def _e_finite(values, m: int) -> ExactScalar:
    if m < 0:
        return ZERO
    if m > len(values):
        return ZERO
    es = [ONE] + [ZERO] * len(values)
    for v in values:
        for j in range(len(values), 0, -1):
            es[j] = es[j] + v * es[j - 1]
    return es[m]


def principal_spec(lam: Partition) -> ExactScalar:
    """s_lam(q^{-rho}) by the q-deformed hook-length formula.

    Each factor q^{-h/2} - q^{h/2} is carried as (1 - q^h)/q^{h/2}, so the
    value is q^{-kappa/4 + (sum h)/2} / prod (1 - q^h) on the u-lattice.
    """
    hs = hooks(lam)
    e = -6 * kappa(lam) + 12 * sum(hs)
    den = ONE
    for h in hs:
        den = den * (ONE - u_pow(24 * h))
    return u_pow(e) / den


def schur_alternant(lam: Partition, values) -> ExactScalar:
    """Ratio-of-alternants oracle for s_lam(x) in finitely many variables."""
    xs = tuple(v if isinstance(v, ExactScalar) else scalar(v) for v in values)
    n = len(xs)
    if len(lam) > n:
        return ZERO
    lam_p = lam + (0,) * (n - len(lam))
    num = det_exact([[xs[i] ** (lam_p[j] + n - 1 - j) for j in range(n)] for i in range(n)])
    den = det_exact([[xs[i] ** (n - 1 - j) for j in range(n)] for i in range(n)])
    return num / den
