"""Hirota bilinear calculus on truncated series.

P(D) f.g expands the sign-twisted product P(d' - d) f(t') g(t) |_{t'=t};
Miwa shifts t -> t +- [z^{-+1}] realize the tau-ratio and residue formulas.
The residue identity is checked with the primed times as genuinely
independent variables, in a four-bank ring.
"""

from __future__ import annotations

from math import comb

from .reports import Report
from .scalars import ONE, ZERO, canonical_str, scalar, u_pow
from .schur import SchurBank
from .series import LaurentSeriesZ, SeriesRing, TruncSeries
from .tau import TauProvider


# A Hirota polynomial maps exponent tuples (aligned with ring variables) to
# rational coefficients.

def hirota_D(ring: SeriesRing, bank: str, k: int, power: int = 1) -> dict:
    exps = [0] * ring.nvars
    exps[ring.var_index(bank, k)] = power
    return {tuple(exps): 1}


def hirota_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for ma, ca in p.items():
        for mb, cb in q.items():
            m = tuple(a + b for a, b in zip(ma, mb))
            out[m] = out.get(m, 0) + ca * cb
    return {m: c for m, c in out.items() if c}


def hirota_add(p: dict, q: dict) -> dict:
    out = dict(p)
    for m, c in q.items():
        out[m] = out.get(m, 0) + c
        if not out[m]:
            del out[m]
    return out


def _diff_multi(f: TruncSeries, exps) -> TruncSeries:
    out = f
    for i, e in enumerate(exps):
        if not e:
            continue
        bank, k = _var_of(f.ring, i)
        for _ in range(e):
            out = out.diff(bank, k)
            if out.is_zero():
                return out
    return out


def _var_of(ring: SeriesRing, index: int):
    for name, arity in ring.banks:
        start = ring.var_index(name, 1)
        if start <= index < start + arity:
            return name, index - start + 1
    raise IndexError(index)


def hirota_apply(p: dict, f: TruncSeries, g: TruncSeries) -> TruncSeries:
    """P(D) f.g; bilinear, with P given as exponent dict over the ring vars."""
    if f.ring is not g.ring:
        raise ValueError("f and g must share a ring")
    ring = f.ring
    total = ring.zero
    for monom, coeff in p.items():
        splits = [(tuple(), 1)]
        for e in monom:
            grown = []
            for prefix, mult in splits:
                for a in range(e + 1):
                    grown.append((prefix + (a,), mult * comb(e, a) * (-1) ** (e - a)))
            splits = grown
        for asplit, mult in splits:
            bsplit = tuple(e - a for e, a in zip(monom, asplit))
            term = _diff_multi(f, asplit) * _diff_multi(g, bsplit)
            total = total + term.smul(scalar(coeff * mult))
    return total


# ---------------------------------------------------------------------------
# Miwa shifts

def miwa_shift(s: TruncSeries, bank: str, sign: int, zpow: int, zorder: int | None = None) -> LaurentSeriesZ:
    """s with t_k -> t_k + sign * z**(zpow*k) / k on one bank.

    The coefficient of z**(zpow*j) is complete for monomials of weight up to
    cutoff - j, so a requested zorder beyond the cutoff is refused.
    """
    ring = s.ring
    if zorder is not None and zorder > ring.cutoff:
        raise ValueError(
            f"z-order {zorder} not supported at cutoff {ring.cutoff}; "
            f"supported bound is {ring.cutoff}"
        )
    start = ring.var_index(bank, 1)
    arity = ring.arity(bank)
    out: dict[int, dict] = {}
    for monom, coeff in s.coeffs.items():
        # expand each bank variable's power by the binomial theorem
        parts = [((0,) * ring.nvars, 0, coeff)]  # (residual exps, z-exp, coeff)
        for i in range(start, start + arity):
            e = monom[i]
            if not e:
                continue
            k = i - start + 1
            grown = []
            for exps, ze, c in parts:
                for a in range(e + 1):
                    ne = list(exps)
                    ne[i] = a
                    step = (scalar(sign) / scalar(k)) ** (e - a) * scalar(comb(e, a))
                    grown.append((tuple(ne), ze + zpow * k * (e - a), c * step))
            parts = grown
        for exps, ze, c in parts:
            rest = list(exps)
            for i, ei in enumerate(monom):
                if not (start <= i < start + arity):
                    rest[i] = ei
            key = tuple(rest)
            bucket = out.setdefault(ze, {})
            bucket[key] = bucket.get(key, ZERO) + c
    coeffs = {
        ze: TruncSeries(ring, {m: c for m, c in bucket.items() if c})
        for ze, bucket in out.items()
    }
    lz = LaurentSeriesZ(ring, coeffs)
    if zorder is not None:
        keep = {e: c for e, c in lz.coeffs.items() if abs(e) <= zorder}
        lz = LaurentSeriesZ(ring, keep)
    return lz


# ---------------------------------------------------------------------------
# the first three Hirota equations

def _first_failing(series: TruncSeries) -> str:
    terms = series.terms_sorted()
    if not terms:
        return "0"
    m, c = max(terms, key=lambda t: (series.ring.weight(t[0]), t[0]))
    names = series.ring.names
    mono = "*".join(names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(m) if e) or "1"
    return f"{mono}: {canonical_str(c)}"


def verify_hirota_triple(provider: TauProvider, s_values, depth: int) -> Report:
    """Equations (i)-(iii) for tau(s-1), tau(s), tau(s+1), to weighted degree depth.

    In the charge convention used throughout (the one the fermionic formula
    fixes), the second and third members read (D_2 + D_1^2) tau(s).tau(s+1)
    and (Dbar_2 + Dbar_1^2) tau(s+1).tau(s); both follow from the residue
    identity by Taylor expansion and are confirmed against the residue check.

    The provider's cutoff must exceed depth by the weight of the Hirota
    operators (2), otherwise truncation would eat real terms.
    """
    ring = provider.ring
    if ring.cutoff < depth + 2:
        raise ValueError(f"provider cutoff {ring.cutoff} too small; need >= {depth + 2}")
    report = Report("verify hirota", {"provider": provider.name, "s": list(s_values), "D": depth})
    d1db1 = hirota_mul(hirota_D(ring, "t", 1), hirota_D(ring, "tb", 1))
    d2_d11 = hirota_add(hirota_D(ring, "t", 2), hirota_D(ring, "t", 1, 2))
    db2_db11 = hirota_add(hirota_D(ring, "tb", 2), hirota_D(ring, "tb", 1, 2))
    for s in s_values:
        if provider.degenerate(s):
            raise ValueError(f"degenerate provider: tau({s}, 0, 0) = 0")
        tau_m, tau_0, tau_p = provider.tau(s - 1), provider.tau(s), provider.tau(s + 1)
        eq1 = hirota_apply(d1db1, tau_0, tau_0) + (tau_p * tau_m).smul(scalar(2))
        eq2 = hirota_apply(d2_d11, tau_0, tau_p)
        eq3 = hirota_apply(db2_db11, tau_p, tau_0)
        for label, combo in (("(i)", eq1), ("(ii)", eq2), ("(iii)", eq3)):
            bad = TruncSeries(
                ring,
                {m: c for m, c in combo.coeffs.items() if ring.weight(m) <= depth},
            )
            report.add(
                f"{label} s={s} deg<={depth}",
                _first_failing(bad),
                "0",
                bad.is_zero(),
            )
    return report


# ---------------------------------------------------------------------------
# the bilinear residue identity

def _lift(series: TruncSeries, target: SeriesRing, bank_map: dict) -> TruncSeries:
    images = []
    for name, arity in series.ring.banks:
        tname = bank_map[name]
        tarity = target.arity(tname)
        for k in range(1, arity + 1):
            # variables beyond the target arity carry weight > cutoff there
            images.append(target.gen(tname, k) if k <= tarity else target.zero)
    return series.map_vars(target, images)


def verify_bilinear_residue(provider: TauProvider, s: int, sp: int, depth: int, zrange: int | None = None) -> Report:
    """Both residues of the single bilinear equation, compared coefficientwise.

    Primed times are independent variables; the comparison covers every
    monomial of combined weight <= depth over all four banks.
    """
    ds = sp - s
    zneed = depth + 1 + abs(ds)
    if zrange is not None:
        if zrange < zneed:
            raise ValueError(f"zrange {zrange} too small; need {zneed}")
        zneed = zrange
    prov_ring = provider.ring
    if prov_ring.cutoff < depth + zneed:
        raise ValueError(
            f"provider cutoff {prov_ring.cutoff} too small; need >= {depth + zneed}"
        )
    arity = min(prov_ring.arity("t"), prov_ring.arity("tb"))
    K = min(arity, depth) if depth > 0 else 1
    ring4 = SeriesRing(depth, ("t", K), ("tb", K), ("tp", K), ("tbp", K))

    for charge in (s - 1, sp, s, sp + 1):
        if provider.degenerate(charge):
            raise ValueError(f"degenerate provider: tau({charge}, 0, 0) = 0")

    def lift_z(lz: LaurentSeriesZ, bank_map: dict) -> dict[int, TruncSeries]:
        return {e: _lift(c, ring4, bank_map) for e, c in lz.coeffs.items()}

    primed = {"t": "tp", "tb": "tbp"}
    plain = {"t": "t", "tb": "tb"}

    # left side: z^{s'-s} e^{xi(t'-t, z)} tau(s', t'-[z^{-1}], tb') tau(s, t+[z^{-1}], tb)
    lhs_a = lift_z(miwa_shift(provider.tau(sp), "t", -1, -1), primed)
    lhs_b = lift_z(miwa_shift(provider.tau(s), "t", +1, -1), plain)
    xi_plus = SchurBank(ring4, lambda k: ring4.gen("tp", k) - ring4.gen("t", k) if k <= K else ring4.zero)
    lhs = ring4.zero
    for n in range(0, depth + 1):
        sn = xi_plus.S(n)
        if sn.is_zero():
            continue
        for ja, ca in lhs_a.items():
            jb = -1 - ds - n - ja
            if jb > 0:
                continue
            cb = lhs_b.get(jb)
            if cb is None:
                continue
            lhs = lhs + sn * ca * cb
    # right side: z^{s'-s} e^{xi(tb'-tb, z^{-1})} tau(s'+1, t', tb'-[z]) tau(s-1, t, tb+[z])
    rhs_a = lift_z(miwa_shift(provider.tau(sp + 1), "tb", -1, +1), primed)
    rhs_b = lift_z(miwa_shift(provider.tau(s - 1), "tb", +1, +1), plain)
    xi_minus = SchurBank(ring4, lambda k: ring4.gen("tbp", k) - ring4.gen("tb", k) if k <= K else ring4.zero)
    rhs = ring4.zero
    for n in range(0, depth + 1):
        sn = xi_minus.S(n)
        if sn.is_zero():
            continue
        for ja, ca in rhs_a.items():
            jb = -1 - ds + n - ja
            if jb < 0:
                continue
            cb = rhs_b.get(jb)
            if cb is None:
                continue
            rhs = rhs + sn * ca * cb

    report = Report(
        "verify bilinear",
        {"provider": provider.name, "s": s, "s'": sp, "D": depth, "zrange": zneed},
    )
    monos = sorted(set(lhs.coeffs) | set(rhs.coeffs), key=lambda m: (ring4.weight(m), m))
    names = ring4.names
    for m in monos:
        mono = "*".join(names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(m) if e) or "1"
        a, b = lhs.coeff(m), rhs.coeff(m)
        report.add(f"[{mono}]", canonical_str(a), canonical_str(b), a == b)
    if not monos:
        report.add("all coefficients", "0", "0", True)
    return report
