"""Weighted-degree truncated polynomials in banks of time variables.

A ring holds one or more banks of variables; the k-th variable of a bank has
weight k (matching t_k picking up z**(-k)/k under Miwa shifts).  Every
operation discards monomials whose total weight exceeds the ring's cutoff,
so arithmetic stays exact below the cutoff and silent above it.

The standard two-bank ring uses names "t" and "tb" (for the second set of
times); verification of the bilinear identity adds primed copies "tp", "tbp".
"""

from __future__ import annotations

from .scalars import ExactScalar, ONE, ZERO, canonical_str, scalar


class SeriesRing:
    """Polynomials in weighted variables, truncated at a total weight cutoff."""

    def __init__(self, cutoff: int, *banks: tuple[str, int]):
        if cutoff < 0:
            raise ValueError("cutoff must be nonnegative")
        if not banks:
            banks = (("t", cutoff), ("tb", cutoff))
        self.cutoff = cutoff
        self.banks = tuple(banks)
        self.names: list[str] = []
        self.weights: list[int] = []
        self._bank_start: dict[str, int] = {}
        for name, arity in banks:
            self._bank_start[name] = len(self.names)
            for k in range(1, arity + 1):
                self.names.append(f"{name}{k}")
                self.weights.append(k)
        self.nvars = len(self.names)
        self.zero = TruncSeries(self, {})
        self.one = TruncSeries(self, {(0,) * self.nvars: ONE})

    def arity(self, bank: str) -> int:
        return dict(self.banks)[bank]

    def var_index(self, bank: str, k: int) -> int:
        if not 1 <= k <= self.arity(bank):
            raise ValueError(f"no variable {bank}{k} in this ring")
        return self._bank_start[bank] + k - 1

    def gen(self, bank: str, k: int) -> "TruncSeries":
        i = self.var_index(bank, k)
        if self.weights[i] > self.cutoff:
            return self.zero
        exps = [0] * self.nvars
        exps[i] = 1
        return TruncSeries(self, {tuple(exps): ONE})

    def t(self, k: int) -> "TruncSeries":
        return self.gen("t", k)

    def tbar(self, k: int) -> "TruncSeries":
        return self.gen("tb", k)

    def const(self, value) -> "TruncSeries":
        if not isinstance(value, ExactScalar):
            value = scalar(value)
        if not value:
            return self.zero
        return TruncSeries(self, {(0,) * self.nvars: value})

    def weight(self, exps) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))

    def monomials_up_to(self, bound: int | None = None):
        """All exponent tuples of weight <= bound, ascending (weight, exps)."""
        if bound is None:
            bound = self.cutoff
        bound = min(bound, self.cutoff)
        out = [(0,) * self.nvars]
        for i in range(self.nvars):
            w = self.weights[i]
            extended = []
            for exps in out:
                used = self.weight(exps)
                e = 1
                while used + e * w <= bound:
                    grown = list(exps)
                    grown[i] = e
                    extended.append(tuple(grown))
                    e += 1
            out.extend(extended)
        return sorted(out, key=lambda m: (self.weight(m), m))

    def __repr__(self):
        banks = ", ".join(f"{n}[1..{a}]" for n, a in self.banks)
        return f"SeriesRing({banks}; weight <= {self.cutoff})"


class TruncSeries:
    """Element of a :class:`SeriesRing`; zero coefficients are never stored."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: SeriesRing, coeffs: dict):
        self.ring = ring
        self.coeffs = coeffs

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def constant_term(self) -> ExactScalar:
        return self.coeffs.get((0,) * self.ring.nvars, ZERO)

    def coeff(self, exps) -> ExactScalar:
        return self.coeffs.get(tuple(exps), ZERO)

    def coeff_var(self, bank: str, k: int, power: int = 1) -> ExactScalar:
        exps = [0] * self.ring.nvars
        exps[self.ring.var_index(bank, k)] = power
        return self.coeff(exps)

    def min_weight(self):
        if not self.coeffs:
            return None
        return min(self.ring.weight(m) for m in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            return self.ring is other.ring and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ring), tuple(sorted(self.coeffs.items(), key=lambda t: t[0]))))

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if self.ring is not other.ring:
            raise ValueError("series from different rings")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            v = out.get(m, ZERO) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return TruncSeries(self.ring, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TruncSeries(self.ring, {m: -c for m, c in self.coeffs.items()})

    def smul(self, value) -> "TruncSeries":
        if not isinstance(value, ExactScalar):
            value = scalar(value)
        if not value:
            return self.ring.zero
        return TruncSeries(self.ring, {m: c * value for m, c in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.smul(other)
        self._check(other)
        ring = self.ring
        cutoff = ring.cutoff
        weights = ring.weights
        out: dict = {}
        wcache = {m: ring.weight(m) for m in other.coeffs}
        for ma, ca in self.coeffs.items():
            wa = ring.weight(ma)
            for mb, cb in other.coeffs.items():
                if wa + wcache[mb] > cutoff:
                    continue
                m = tuple(a + b for a, b in zip(ma, mb))
                v = out.get(m, ZERO) + ca * cb
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return TruncSeries(ring, out)

    __rmul__ = smul

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def exp(self) -> "TruncSeries":
        """exp of a series with zero constant term, truncated at the cutoff."""
        if self.constant_term():
            raise ValueError("series_exp needs a zero constant term")
        result = self.ring.one
        term = self.ring.one
        for k in range(1, self.ring.cutoff + 1):
            term = (term * self).smul(scalar(1) / scalar(k))
            if term.is_zero():
                break
            result = result + term
        return result

    def log(self) -> "TruncSeries":
        """log of a series with constant term 1, truncated at the cutoff."""
        if self.constant_term() != ONE:
            raise ValueError("series_log needs constant term 1")
        n = self - self.ring.one
        result = self.ring.zero
        power = self.ring.one
        for k in range(1, self.ring.cutoff + 1):
            power = power * n
            if power.is_zero():
                break
            result = result + power.smul(scalar((-1) ** (k - 1)) / scalar(k))
        return result

    def inverse(self) -> "TruncSeries":
        c0 = self.constant_term()
        if not c0:
            raise ValueError("cannot invert a series with zero constant term")
        n = self.smul(ONE / c0) - self.ring.one
        result = self.ring.one
        power = self.ring.one
        sign = 1
        for _ in range(self.ring.cutoff):
            power = power * n
            if power.is_zero():
                break
            sign = -sign
            result = result + power.smul(scalar(sign))
        return result.smul(ONE / c0)

    def diff(self, bank: str, k: int) -> "TruncSeries":
        i = self.ring.var_index(bank, k)
        out = {}
        for m, c in self.coeffs.items():
            if m[i]:
                dm = list(m)
                dm[i] -= 1
                out[tuple(dm)] = c * scalar(m[i])
        return TruncSeries(self.ring, out)

    # -- substitution -------------------------------------------------------

    def map_vars(self, target: SeriesRing, images: list["TruncSeries"]) -> "TruncSeries":
        """Substitute images[i] for variable i, landing in ``target``.

        Each image must have minimum weight >= the source variable's weight,
        so the target truncation loses nothing the source had.
        """
        if len(images) != self.ring.nvars:
            raise ValueError("one image per source variable required")
        for i, img in enumerate(images):
            mw = img.min_weight()
            if mw is not None and mw < self.ring.weights[i]:
                raise ValueError("image lighter than source variable; truncation unsound")
        out = target.zero
        for m, c in self.coeffs.items():
            term = target.const(c)
            for i, e in enumerate(m):
                for _ in range(e):
                    term = term * images[i]
                    if term.is_zero():
                        break
            out = out + term
        return out

    def scale_vars(self, factors: dict) -> "TruncSeries":
        """Multiply variable (bank, k) by a scalar factor: t_k -> c_k * t_k."""
        idx = {self.ring.var_index(b, k): f for (b, k), f in factors.items()}
        out = {}
        for m, c in self.coeffs.items():
            v = c
            for i, e in enumerate(m):
                if e and i in idx:
                    v = v * idx[i] ** e
            if v:
                out[m] = v
        return TruncSeries(self.ring, out)

    def eval_scalars(self, values: dict) -> ExactScalar:
        """Evaluate with variable (bank, k) set to an exact scalar."""
        idx = {self.ring.var_index(b, k): v for (b, k), v in values.items()}
        total = ZERO
        for m, c in self.coeffs.items():
            v = c
            for i, e in enumerate(m):
                if not e:
                    continue
                if i not in idx:
                    raise ValueError(f"no value supplied for {self.ring.names[i]}")
                v = v * idx[i] ** e
            total = total + v
        return total

    # -- output -------------------------------------------------------------

    def terms_sorted(self):
        return sorted(self.coeffs.items(), key=lambda t: (self.ring.weight(t[0]), t[0]))

    def __str__(self):
        if not self.coeffs:
            return "0"
        names = self.ring.names
        parts = []
        for m, c in self.terms_sorted():
            mono = "*".join(
                names[i] if e == 1 else f"{names[i]}^{e}"
                for i, e in enumerate(m) if e
            )
            ctext = canonical_str(c)
            wrap = " " in ctext or "/" in ctext
            if not mono:
                parts.append(f"({ctext})" if wrap else ctext)
            elif c == ONE:
                parts.append(mono)
            else:
                parts.append(f"({ctext})*{mono}" if wrap or "*" in ctext else f"{ctext}*{mono}")
        return " + ".join(parts)

    __repr__ = __str__


def series_exp(s: TruncSeries) -> TruncSeries:
    return s.exp()


def series_log(s: TruncSeries) -> TruncSeries:
    return s.log()


class LaurentSeriesZ:
    """Finite Laurent polynomial in z with TruncSeries coefficients."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: SeriesRing, coeffs: dict[int, TruncSeries]):
        self.ring = ring
        self.coeffs = {e: c for e, c in coeffs.items() if not c.is_zero()}

    @property
    def zmin(self):
        return min(self.coeffs) if self.coeffs else None

    @property
    def zmax(self):
        return max(self.coeffs) if self.coeffs else None

    def coeff(self, e: int) -> TruncSeries:
        return self.coeffs.get(e, self.ring.zero)

    def __add__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            v = out.get(e, self.ring.zero) + c
            if v.is_zero():
                out.pop(e, None)
            else:
                out[e] = v
        return LaurentSeriesZ(self.ring, out)

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            return LaurentSeriesZ(self.ring, {e: c * other for e, c in self.coeffs.items()})
        out: dict[int, TruncSeries] = {}
        for ea, ca in self.coeffs.items():
            for eb, cb in other.coeffs.items():
                v = ca * cb
                if v.is_zero():
                    continue
                e = ea + eb
                out[e] = out[e] + v if e in out else v
        return LaurentSeriesZ(self.ring, out)

    def shift_z(self, n: int) -> "LaurentSeriesZ":
        return LaurentSeriesZ(self.ring, {e + n: c for e, c in self.coeffs.items()})

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"z^{e}*({c})" for e, c in sorted(self.coeffs.items()))


def laurent_residue(lz: LaurentSeriesZ) -> TruncSeries:
    """Coefficient of z**(-1); the zero series when the support misses it."""
    return lz.coeff(-1)
