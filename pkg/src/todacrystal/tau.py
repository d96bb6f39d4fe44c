"""Tau-function builders and the melting-crystal partition sums.

All tau functions live in a two-bank series ring (t, tb) and are produced per
charge s.  The melting-crystal sums carry their Q-grading inside the scalar
coefficients, so identities can be compared coefficient by coefficient in
(monomial, Q-degree, u) with no truncation slack.
"""

from __future__ import annotations

from .fock import (
    DiagHyper,
    DiagQK2,
    DiagQL0,
    Gamma,
    GammaSeries,
    expectation,
    hyper_eigenvalue,
)
from .partitions import Partition, kappa, partitions_up_to, weight
from .reports import Report
from .schur import SpecPoint, plain_bank, principal_spec, skew_schur_conj_principal
from .scalars import (
    ExactScalar,
    ONE,
    ZERO,
    bigQ_coefficients,
    bigQ_pow,
    canonical_str,
    monomial_u_exponent,
    scalar,
    u_pow,
)
from .series import SeriesRing, TruncSeries


class TauProvider:
    """tau(s, t, tb) as truncated series, one charge at a time.

    ``fn(s)`` produces the series; results are cached.  A provider whose
    constant term tau(s, 0, 0) vanishes at some charge is degenerate there,
    which downstream consumers treat as an error or a flag as their contracts
    dictate.
    """

    def __init__(self, ring: SeriesRing, fn, name: str):
        self.ring = ring
        self._fn = fn
        self.name = name
        self._cache: dict[int, TruncSeries] = {}

    def tau(self, s: int) -> TruncSeries:
        if s not in self._cache:
            self._cache[s] = self._fn(s)
        return self._cache[s]

    def degenerate(self, s: int) -> bool:
        return not self.tau(s).constant_term()


def standard_ring(depth: int, qdepth: int = 0) -> SeriesRing:
    return SeriesRing(depth, ("t", depth), ("tb", depth))


def cauchy_provider(ring: SeriesRing) -> TauProvider:
    """tau = exp(-sum_k k t_k tb_k) for every charge (r identically 1)."""

    def fn(_s):
        acc = ring.zero
        for k in range(1, min(ring.arity("t"), ring.arity("tb")) + 1):
            acc = acc + (ring.t(k) * ring.tbar(k)).smul(scalar(-k))
        return acc.exp()

    return TauProvider(ring, fn, "cauchy")


def hypergeometric_provider(ring: SeriesRing, r, w_cap: int, name: str = "hypergeometric") -> TauProvider:
    """Single partition sum sum_lam <lam,s|g|lam,s> S_lam(t) S_lam(-tb)."""
    tbank = plain_bank(ring, "t")
    bbank = plain_bank(ring, "tb", negate=True)

    def fn(s):
        acc = ring.zero
        for lam in partitions_up_to(min(w_cap, ring.cutoff)):
            c = hyper_eigenvalue(r, lam, s)
            if not c:
                continue
            term = tbank.skew(lam) * bbank.skew(lam)
            acc = acc + term.smul(c)
        return acc

    return TauProvider(ring, fn, name)


def double_hurwitz_provider(ring: SeriesRing, p: ExactScalar, w_cap: int) -> TauProvider:
    """Schur expansion with weights Q^{|lam|+s(s+1)/2} p^{kappa+2s|lam|+(4s^3-s)/12}.

    p = e^{beta/2} must be a plain power of u so that every exponent stays on
    the u-lattice (p = u**12 is q^{1/2}, the double-Hurwitz normalization).
    """
    mono = monomial_u_exponent(p)
    if mono is None or mono[0] != 1:
        raise ValueError("p must be a pure u-power monomial")
    p_exp = mono[1]
    tbank = plain_bank(ring, "t")
    bbank = plain_bank(ring, "tb", negate=True)

    def fn(s):
        acc = ring.zero
        for lam in partitions_up_to(min(w_cap, ring.cutoff)):
            e_num = p_exp * (12 * kappa(lam) + 24 * s * weight(lam) + 4 * s**3 - s)
            if e_num % 12:
                raise ValueError("fractional u-power: choose p on a coarser lattice")
            c = bigQ_pow(weight(lam) + s * (s + 1) // 2) * u_pow(e_num // 12)
            acc = acc + (tbank.skew(lam) * bbank.skew(lam)).smul(c)
        return acc

    return TauProvider(ring, fn, f"double-hurwitz(p=u^{p_exp})")


def tau_hypergeometric(ring: SeriesRing, r, s: int, w_cap: int) -> TruncSeries:
    return hypergeometric_provider(ring, r, w_cap).tau(s)


def tau_double_hurwitz(ring: SeriesRing, p: ExactScalar, s: int, w_cap: int) -> TruncSeries:
    return double_hurwitz_provider(ring, p, w_cap).tau(s)


def const_provider(ring: SeriesRing, value=1) -> TauProvider:
    return TauProvider(ring, lambda s: ring.const(value), f"constant({value})")


def perturbed_provider(base: TauProvider, lam0: Partition, delta) -> TauProvider:
    """Negative control: add delta * S_{lam0}(t) S_{lam0}(-tb) to every tau."""
    ring = base.ring
    bump = plain_bank(ring, "t").skew(lam0) * plain_bank(ring, "tb", negate=True).skew(lam0)

    def fn(s):
        return base.tau(s) + bump.smul(delta)

    return TauProvider(ring, fn, f"{base.name}+perturbation")


# ---------------------------------------------------------------------------
# melting-crystal partition functions

def model_g_factors(model: int, qcap: int | None = None) -> list:
    """Factor list for the generating operator of melting-crystal model 1/2."""
    rho = SpecPoint.principal()
    if model == 1:
        return [
            DiagQK2(+1),
            Gamma(-1, rho),
            Gamma(+1, rho),
            DiagQL0(qcap),
            Gamma(-1, rho),
            Gamma(+1, rho),
            DiagQK2(+1),
        ]
    if model == 2:
        return [
            DiagQK2(+1),
            Gamma(-1, rho),
            Gamma(+1, rho),
            DiagQL0(qcap),
            Gamma(-1, rho, primed=True),
            Gamma(+1, rho, primed=True),
            DiagQK2(-1),
        ]
    raise ValueError("model must be 1 or 2")


def fock_model_provider(ring: SeriesRing, model: int, qcap: int) -> TauProvider:
    """tau(s,t,tb) = <s| gamma_+(t) g gamma_-(-tb) |s> for the model operator."""
    factors = (
        [GammaSeries.plus(ring, "t")]
        + model_g_factors(model, qcap)
        + [GammaSeries.minus(ring, "tb", negate=True)]
    )
    w_cap = max(ring.cutoff, qcap + 1)

    def fn(s):
        return _as_series(ring, expectation(factors, s, w_cap))

    return TauProvider(ring, fn, f"fock-model{model}")


def _as_series(ring: SeriesRing, value) -> TruncSeries:
    return value if isinstance(value, TruncSeries) else ring.const(value)


def melting_Z(ring: SeriesRing, s: int, w_cap: int) -> TruncSeries:
    """Z(s,t): principal-specialization weights, Q-grading, potentials phi_k."""
    from .fock import phi_k

    acc = ring.zero
    nt = ring.arity("t")
    for lam in partitions_up_to(w_cap):
        base = principal_spec(lam) ** 2 * bigQ_pow(weight(lam) + s * (s + 1) // 2)
        expo = ring.zero
        for k in range(1, nt + 1):
            expo = expo + ring.t(k).smul(phi_k(k, lam, s))
        acc = acc + expo.exp().smul(base)
    return acc


def melting_Zprime(ring: SeriesRing, s: int, w_cap: int) -> TruncSeries:
    """Z'(s,t,tb): conjugate-weighted model with both potential families."""
    from .fock import phi_k

    acc = ring.zero
    nt = ring.arity("t")
    nb = ring.arity("tb")
    for lam in partitions_up_to(w_cap):
        base = (
            principal_spec(lam)
            * skew_schur_conj_principal(lam)
            * bigQ_pow(weight(lam) + s * (s + 1) // 2)
        )
        expo = ring.zero
        for k in range(1, nt + 1):
            expo = expo + ring.t(k).smul(phi_k(k, lam, s))
        for k in range(1, nb + 1):
            expo = expo + ring.tbar(k).smul(phi_k(-k, lam, s))
        acc = acc + expo.exp().smul(base)
    return acc


# ---------------------------------------------------------------------------
# MacMahon products

def _q_grading_ring(deg: int) -> SeriesRing:
    return SeriesRing(deg, ("Qg", 1))


def macmahon_coeffs(deg: int) -> dict[int, ExactScalar]:
    """Q-coefficients of prod_n (1 - Q q^n)^{-n}, exact in u.

    log of the product collapses to sum_j Q^j q^j / (j (1-q^j)^2).
    """
    ring = _q_grading_ring(deg)
    acc = ring.zero
    for j in range(1, deg + 1):
        qj = u_pow(24 * j)
        c = qj / (scalar(j) * (ONE - qj) ** 2)
        acc = acc + (ring.gen("Qg", 1) ** j).smul(c)
    z = acc.exp()
    return {d: z.coeff_var("Qg", 1, d) for d in range(deg + 1)}


def macmahon_prime_coeffs(deg: int, exponent_sign: int) -> dict[int, ExactScalar]:
    """Q-coefficients of prod_n (1 + Q q^n)^{exponent_sign * n}."""
    ring = _q_grading_ring(deg)
    acc = ring.zero
    for j in range(1, deg + 1):
        qj = u_pow(24 * j)
        c = scalar((-1) ** (j - 1) * exponent_sign) * qj / (scalar(j) * (ONE - qj) ** 2)
        acc = acc + (ring.gen("Qg", 1) ** j).smul(c)
    z = acc.exp()
    return {d: z.coeff_var("Qg", 1, d) for d in range(deg + 1)}


def zprime_product_side(deg: int) -> tuple[dict[int, ExactScalar], int]:
    """Which MacMahon-type product matches sum_lam s_lam s_tlam Q^|lam|.

    Returns (coefficients, exponent_sign).  The dual Cauchy identity forces
    the +n exponent; the check below records the match rather than assuming
    a printed sign.
    """
    sums = {d: ZERO for d in range(deg + 1)}
    for lam in partitions_up_to(deg):
        sums[weight(lam)] = sums[weight(lam)] + principal_spec(lam) * skew_schur_conj_principal(lam)
    for sign in (+1, -1):
        prod = macmahon_prime_coeffs(deg, sign)
        if all(prod[d] == sums[d] for d in range(deg + 1)):
            return prod, sign
    raise AssertionError("neither exponent sign matches the partition sum")


# ---------------------------------------------------------------------------
# Z <-> tau conversions

def _compare_series(report: Report, label: str, lhs: TruncSeries, rhs: TruncSeries, qmax: int | None):
    """Per-monomial, per-Q-degree comparison of two series."""
    monos = sorted(set(lhs.coeffs) | set(rhs.coeffs), key=lambda m: (lhs.ring.weight(m), m))
    names = lhs.ring.names
    for m in monos:
        mono = "*".join(
            names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(m) if e
        ) or "1"
        lc = lhs.coeff(m)
        rc = rhs.coeff(m)
        lq = bigQ_coefficients(lc)
        rq = bigQ_coefficients(rc)
        degs = sorted(set(lq) | set(rq))
        if qmax is not None:
            degs = [d for d in degs if d <= qmax]
        for d in degs:
            a = lq.get(d, ZERO)
            b = rq.get(d, ZERO)
            report.add(f"{label} [{mono}] Q^{d}", canonical_str(a), canonical_str(b), a == b)


def _scaled_plus(ring: SeriesRing):
    """gamma_+ with t_k -> (-q^{1/2})^k t_k."""
    return GammaSeries.plus(ring, "t", scales=lambda k: scalar((-1) ** k) * u_pow(12 * k))


def verify_Z_tau_identity(model: int, s_values, depth: int, qmax: int, ring: SeriesRing | None = None) -> Report:
    """Check the conversion of Z(s,t) / Z'(s,t,tb) into Toda tau functions.

    Model 1 is checked in both the gamma_+ and the gamma_- form; model 2 in
    its single two-sided form.  All comparisons are exact per coefficient of
    (t-monomial, Q-degree) as rational functions of u.
    """
    if ring is None:
        ring = standard_ring(depth)
    report = Report(
        "verify z-tau",
        {"model": model, "s": list(s_values), "D": depth, "Qmax": qmax},
    )
    nt = ring.arity("t")
    for s in s_values:
        qcap = qmax
        w_cap = max(ring.cutoff, qcap)
        shift = s * (s + 1) // 2
        if model == 1:
            lhs = melting_Z(ring, s, max(0, qcap - shift))
            pref = ring.zero
            for k in range(1, nt + 1):
                qk = u_pow(24 * k)
                pref = pref + ring.t(k).smul(qk / (ONE - qk))
            prefactor = pref.exp().smul(u_pow(-2 * (4 * s**3 - s)))
            g = model_g_factors(1, qcap)
            rhs_a = _as_series(ring, expectation([_scaled_plus(ring)] + g, s, w_cap)) * prefactor
            gamma_minus_scaled = GammaSeries.minus(
                ring, "t", scales=lambda k: scalar((-1) ** k) * u_pow(12 * k)
            )
            rhs_b = _as_series(ring, expectation(g + [gamma_minus_scaled], s, w_cap)) * prefactor
            _compare_series(report, f"model1/plus s={s}", lhs, rhs_a, qmax)
            _compare_series(report, f"model1/minus s={s}", lhs, rhs_b, qmax)
        elif model == 2:
            lhs = melting_Zprime(ring, s, max(0, qcap - shift))
            pref = ring.zero
            for k in range(1, nt + 1):
                qk = u_pow(24 * k)
                pref = pref + ring.t(k).smul(qk / (ONE - qk))
            for k in range(1, ring.arity("tb") + 1):
                qk = u_pow(24 * k)
                pref = pref - ring.tbar(k).smul(ONE / (ONE - qk))
            prefactor = pref.exp()
            g = model_g_factors(2, qcap)
            gamma_minus_bar = GammaSeries.minus(ring, "tb", scales=lambda k: u_pow(-12 * k))
            rhs = _as_series(
                ring, expectation([_scaled_plus(ring)] + g + [gamma_minus_bar], s, w_cap)
            ) * prefactor
            _compare_series(report, f"model2 s={s}", lhs, rhs, qmax)
        else:
            raise ValueError("model must be 1 or 2")
    return report


def one_d_reduction_check(s_values, depth: int, qmax: int) -> Report:
    """tau(s, t, tb) = tau(s, t - tb, 0) for the first model's operator."""
    ring2 = standard_ring(depth)
    ring1 = SeriesRing(depth, ("t", depth))
    provider = fock_model_provider(ring2, 1, qmax)
    g = model_g_factors(1, qmax)
    report = Report("verify 1d-reduction", {"s": list(s_values), "D": depth, "Qmax": qmax})
    images = [ring2.t(k) - ring2.tbar(k) for k in range(1, depth + 1)]
    for s in s_values:
        full = provider.tau(s)
        one_d = _as_series(
            ring1, expectation([GammaSeries.plus(ring1, "t")] + g, s, max(depth, qmax))
        )
        reduced = one_d.map_vars(ring2, images)
        _compare_series(report, f"s={s}", full, reduced, qmax)
    return report
