"""Rational functions of the formal variables u and Q with integer coefficients.

Every power of q that shows up in the formulas handled by this package lies
in (1/24)Z, so the whole calculus runs over a single base variable u with

    q = u**24,    q**(1/2) = u**12,    q**(1/4) = u**6,    q**(1/24) = u.

Q is a second, independent grading variable; it is never evaluated, so
partition sums can be compared degree by degree in Q.

Scalars are sympy ``FracElement`` values from the fraction field ZZ(Q, u)
with graded-lex term order (u below Q).  Fractions are kept gcd-reduced with
a denominator whose leading coefficient is positive in that order, which
makes equality decidable and the text form canonical.
"""

from __future__ import annotations

from fractions import Fraction

from sympy.polys.domains import ZZ
from sympy.polys.fields import field
from sympy.polys.orderings import grlex

FIELD, bigQ, u = field("Q,u", ZZ, grlex)
RING = FIELD.ring

ExactScalar = type(bigQ)

ZERO = FIELD.zero
ONE = FIELD.one


def scalar(value) -> ExactScalar:
    """Embed an int or Fraction into the scalar field."""
    if isinstance(value, Fraction):
        return FIELD(value.numerator) / FIELD(value.denominator)
    return FIELD(value)


def u_pow(e: int) -> ExactScalar:
    if e >= 0:
        return u**e
    return ONE / u ** (-e)


def q_pow(num, den=1) -> ExactScalar:
    """q**(num/den) as a power of u; num/den must lie in (1/24)Z."""
    e = 24 * num
    if e % den:
        raise ValueError(f"q^({num}/{den}) is not an integer power of u")
    return u_pow(e // den)


def bigQ_pow(e: int) -> ExactScalar:
    if e >= 0:
        return bigQ**e
    return ONE / bigQ ** (-e)


def is_monomial(x: ExactScalar) -> bool:
    return len(x.denom.terms()) == 1 and len(x.numer.terms()) == 1


def monomial_u_exponent(x: ExactScalar):
    """For x = c*u^a (no Q), return (c, a); otherwise None."""
    if not is_monomial(x):
        return None
    ((mn, cn),) = x.numer.terms()
    ((md, cd),) = x.denom.terms()
    if mn[0] or md[0]:
        return None
    c = Fraction(int(cn), int(cd))
    return c, mn[1] - md[1]


# ---------------------------------------------------------------------------
# determinants

def det_exact(rows) -> ExactScalar:
    """Exact determinant of a square matrix of scalars.

    Denominators are cleared row by row and the integer-polynomial core is
    eliminated with the Bareiss fraction-free scheme, which keeps the
    intermediate entries to honest minors instead of letting fractions pile
    up.  The 0x0 determinant is 1.
    """
    n = len(rows)
    if n == 0:
        return ONE
    for row in rows:
        if len(row) != n:
            raise ValueError("matrix is not square")

    clear = RING.one
    mat = []
    for row in rows:
        den = RING.one
        for x in row:
            g = den.gcd(x.denom)
            den = den * x.denom.quo(g)
        mat.append([x.numer * den.quo(x.denom) for x in row])
        clear = clear * den

    sign = 1
    prev = RING.one
    for k in range(n - 1):
        if not mat[k][k]:
            pivot = next((i for i in range(k + 1, n) if mat[i][k]), None)
            if pivot is None:
                return ZERO
            mat[k], mat[pivot] = mat[pivot], mat[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]).quo(prev)
            mat[i][k] = RING.zero
        prev = mat[k][k]
    det = mat[n - 1][n - 1]
    if sign < 0:
        det = -det
    return FIELD.new(det, clear)


# ---------------------------------------------------------------------------
# expansions

def _split_u(poly):
    """Split a polynomial into u-valuation and u-coefficients.

    Returns (v, coeffs) with coeffs[j] the coefficient of u**(v+j) as a
    u-free scalar (a polynomial in Q).
    """
    v = min(m[1] for m in poly.monoms())
    coeffs = {}
    for (eq, eu), c in poly.terms():
        j = eu - v
        coeffs[j] = coeffs.get(j, RING.zero) + RING.from_dict({(eq, 0): c})
    return v, {j: FIELD.new(c, RING.one) for j, c in coeffs.items() if c}


def u_order(x: ExactScalar):
    """u-adic valuation of x (None for x = 0)."""
    if not x:
        return None
    return min(m[1] for m in x.numer.monoms()) - min(m[1] for m in x.denom.monoms())


def u_series(x: ExactScalar, order: int) -> dict[int, ExactScalar]:
    """Expand x in powers of u up to (excluding) u**order.

    The coefficients are u-free scalars.  The denominator's lowest u-part
    must be a nonzero constant so the geometric inversion stays in the
    field; every denominator produced in this package (products of
    1 - u**(24*l) and pure u-powers) satisfies this.
    """
    if not x:
        return {}
    vn, nc = _split_u(x.numer)
    vd, dc = _split_u(x.denom)
    shift = vn - vd
    count = order - shift
    if count <= 0:
        return {}
    d0 = dc[0]
    if d0.numer.degree(RING.gens[0]) != 0 or d0.denom != RING.one:
        raise ValueError("denominator constant term is not Q-free; cannot expand")
    inv = [ONE / d0]
    for j in range(1, count):
        acc = ZERO
        for i, dci in dc.items():
            if 1 <= i <= j:
                acc += dci * inv[j - i]
        inv.append(-acc / d0)
    out = {}
    for j, c in nc.items():
        for i in range(count - j):
            e = shift + j + i
            val = c * inv[i]
            if val:
                out[e] = out.get(e, ZERO) + val
    return {e: c for e, c in sorted(out.items()) if c}


def u_series_eq(a: ExactScalar, b: ExactScalar, order: int) -> bool:
    """Do a and b agree modulo u**order?"""
    return not u_series(a - b, order)


def bigQ_coefficients(x: ExactScalar) -> dict[int, ExactScalar]:
    """Coefficients of x by Q-degree; requires a Q-free denominator."""
    if not x:
        return {}
    if x.denom.degree(RING.gens[0]) != 0:
        raise ValueError("denominator involves Q; not a Laurent polynomial in Q")
    out = {}
    for (eq, eu), c in x.numer.terms():
        part = FIELD.new(RING.from_dict({(0, eu): c}), x.denom)
        out[eq] = out.get(eq, ZERO) + part
    return {e: c for e, c in sorted(out.items()) if c}


def bigQ_coefficient(x: ExactScalar, d: int) -> ExactScalar:
    return bigQ_coefficients(x).get(d, ZERO)


# ---------------------------------------------------------------------------
# text form

def _monomial_str(monom) -> str:
    eq, eu = monom
    parts = []
    if eu:
        parts.append("u" if eu == 1 else f"u^{eu}")
    if eq:
        parts.append("Q" if eq == 1 else f"Q^{eq}")
    return "*".join(parts)


def _poly_str(poly) -> str:
    if not poly:
        return "0"
    order = poly.ring.order
    out = []
    for monom, coeff in sorted(poly.terms(), key=lambda t: order(t[0]), reverse=True):
        c = int(coeff)
        mono = _monomial_str(monom)
        if not mono:
            text = str(abs(c))
        elif abs(c) == 1:
            text = mono
        else:
            text = f"{abs(c)}*{mono}"
        if not out:
            out.append(text if c > 0 else f"-{text}")
        else:
            out.append(f" + {text}" if c > 0 else f" - {text}")
    return "".join(out)


def canonical_str(x: ExactScalar) -> str:
    """Deterministic text form: graded-lex term order, highest first."""
    num = _poly_str(x.numer)
    if x.denom == RING.one:
        return num
    den = _poly_str(x.denom)
    if len(x.numer.terms()) > 1:
        num = f"({num})"
    if len(x.denom.terms()) > 1 or "*" in den:
        den = f"({den})"
    return f"{num}/{den}"
