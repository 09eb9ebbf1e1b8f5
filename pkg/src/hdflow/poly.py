"""Univariate polynomials over any supported field, reduced rational maps on P^1, Hankel determinants.

Coefficients are native field values (integer encodings for finite fields,
:class:`~hdflow.fields.RatFunc` for F_p(lambda)), stored low degree first with
trailing zeros stripped.  Points of P^1 are native values or the sentinel
:data:`INF`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _fpx
from .errors import DegenerateMap
from .fields import FiniteField, RatFunc, RatFuncField, format_poly


class _Infinity:
    __slots__ = ()

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return "INF"


INF = _Infinity()


def is_inf(x) -> bool:
    return x is INF


class Poly:
    """Dense univariate polynomial over ``field``."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs: Sequence = ()):
        self.field = field
        c = list(coeffs)
        is_zero = field.is_zero
        while c and is_zero(c[-1]):
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def _raw(cls, field, coeffs: tuple) -> "Poly":
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = coeffs
        return obj

    @classmethod
    def from_ints(cls, field, ints: Sequence[int]) -> "Poly":
        """Coefficients given as integers in Z, mapped into the field."""
        return cls(field, [field.from_int(k) for k in ints])

    @classmethod
    def monomial(cls, field, k: int, c=None) -> "Poly":
        c = field.one if c is None else c
        return cls(field, [field.zero] * k + [c])

    @classmethod
    def const(cls, field, c) -> "Poly":
        return cls(field, [c])

    def deg(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def __getitem__(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.field.zero

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        if self.field != other.field or len(self.coeffs) != len(other.coeffs):
            return False
        eq = self.field.eq
        return all(eq(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        add = self.field.add
        out = list(a)
        for i, v in enumerate(b):
            out[i] = add(out[i], v)
        return Poly(self.field, out)

    def __neg__(self) -> "Poly":
        neg = self.field.neg
        return Poly._raw(self.field, tuple(neg(c) for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Poly):
            return Poly._raw(self.field, self.field.poly_mul(self.coeffs, other.coeffs))
        return self.scale(other)

    def scale(self, c) -> "Poly":
        mul = self.field.mul
        return Poly(self.field, [mul(c, a) for a in self.coeffs])

    def __pow__(self, e: int) -> "Poly":
        result = Poly.const(self.field, self.field.one)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def shift(self, k: int) -> "Poly":
        """Multiply by z^k."""
        if not self.coeffs:
            return self
        return Poly._raw(self.field, (self.field.zero,) * k + self.coeffs)

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self.scale(self.field.inv(self.lc()))

    def __divmod__(self, other: "Poly"):
        return poly_divmod(self, other)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return poly_divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return poly_divmod(self, other)[1]

    def __call__(self, x):
        return self.eval(x)

    def eval(self, x):
        f = self.field
        acc = f.zero
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def eval_array(self, xs: np.ndarray) -> np.ndarray:
        """Vectorised evaluation at an array of finite-field encodings."""
        f = self.field
        acc = np.zeros_like(np.asarray(xs, dtype=np.int64))
        for c in reversed(self.coeffs):
            acc = f.vadd(f.vmul(acc, xs), np.full_like(acc, c))
        return acc

    def deriv(self) -> "Poly":
        f = self.field
        return Poly(f, [f.mul(f.from_int(i), self.coeffs[i]) for i in range(1, len(self.coeffs))])

    def compose(self, inner: "Poly") -> "Poly":
        """self(inner(z))."""
        acc = Poly(self.field)
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly.const(self.field, c)
        return acc

    def substitute_power(self, k: int) -> "Poly":
        """self(z^k)."""
        if not self.coeffs:
            return self
        zero = self.field.zero
        out = [zero] * (k * (len(self.coeffs) - 1) + 1)
        for i, c in enumerate(self.coeffs):
            out[k * i] = c
        return Poly._raw(self.field, tuple(out))

    def map_coeffs(self, field, fn) -> "Poly":
        return Poly(field, [fn(c) for c in self.coeffs])

    def to_text(self, var: str = "z") -> str:
        return format_poly(self.coeffs, var, _coeff_text)

    def __repr__(self) -> str:
        return f"Poly({self.to_text()})"


def _coeff_text(c) -> str:
    return repr(c) if isinstance(c, RatFunc) else str(c)


# -- division and gcd ---------------------------------------------------------


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    f = a.field
    if isinstance(f, FiniteField):
        if f.n == 1:
            q, r = _fpx.divmod_(a.coeffs, b.coeffs, f.p)
            return Poly._raw(f, q), Poly._raw(f, r)
        if f.has_tables and len(a.coeffs) > 64 and len(b.coeffs) > 4:
            q, r = _vec_divmod(f, np.asarray(a.coeffs, dtype=np.int64), np.asarray(b.coeffs, dtype=np.int64))
            return Poly(f, q.tolist()), Poly(f, r.tolist())
    if len(a.coeffs) < len(b.coeffs):
        return Poly(f), a
    r = list(a.coeffs)
    db = len(b.coeffs) - 1
    inv = f.inv(b.lc())
    q = [f.zero] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        if f.is_zero(r[k]):
            continue
        c = f.mul(r[k], inv)
        q[k - db] = c
        for j in range(db + 1):
            r[k - db + j] = f.sub(r[k - db + j], f.mul(c, b.coeffs[j]))
    return Poly(f, q), Poly(f, r[:db])


def _vec_divmod(f: FiniteField, r: np.ndarray, b: np.ndarray):
    if len(r) < len(b):
        return np.zeros(0, dtype=np.int64), r
    r = r.copy()
    db = len(b) - 1
    inv = f.inv(int(b[-1]))
    q = np.zeros(len(r) - db, dtype=np.int64)
    for k in range(len(r) - 1, db - 1, -1):
        if r[k] == 0:
            continue
        c = f.mul(int(r[k]), inv)
        q[k - db] = c
        r[k - db : k + 1] = f.vsub(r[k - db : k + 1], f.vmul(np.int64(c), b))
    return q, r[:db]


def _vec_gcd(f: FiniteField, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    def trim(x):
        nz = np.nonzero(x)[0]
        return x[: nz[-1] + 1] if len(nz) else x[:0]

    a, b = trim(a), trim(b)
    while len(b):
        _, r = _vec_divmod(f, a, b)
        a, b = b, trim(r)
    if len(a):
        a = f.vmul(np.int64(f.inv(int(a[-1]))), a)
    return a


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(f, 0) = monic(f) and gcd(0, 0) = 0."""
    f = a.field
    if isinstance(f, FiniteField):
        if f.n == 1:
            return Poly._raw(f, _fpx.gcd(a.coeffs, b.coeffs, f.p))
        if f.has_tables and len(a.coeffs) > 64 and len(b.coeffs) > 64:
            g = _vec_gcd(f, np.asarray(a.coeffs, dtype=np.int64), np.asarray(b.coeffs, dtype=np.int64))
            return Poly(f, g.tolist())
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


# -- F_p(lambda)[z] helpers ---------------------------------------------------


def clear_denominators(poly: Poly) -> list[tuple]:
    """For poly over F_p(lambda): coefficient rows in F_p[lambda] of c*poly, c a common denominator."""
    p = poly.field.p
    den = (1,)
    for c in poly.coeffs:
        if c.den != (1,):
            g = _fpx.gcd(den, c.den, p)
            den = _fpx.mul(den, _fpx.exact_div(c.den, g, p), p)
    return [_fpx.mul(c.num, _fpx.exact_div(den, c.den, p), p) for c in poly.coeffs]


def specialize_rows(rows: list[tuple], field: FiniteField, lam: int) -> Poly:
    """Evaluate F_p[lambda]-coefficient rows at lambda = lam in a finite field."""
    out = []
    for row in rows:
        acc = 0
        for c in reversed(row):
            acc = field.add(field.mul(acc, lam), c % field.p)
        out.append(acc)
    return Poly(field, out)


def _certify_coprime(num: Poly, den: Poly) -> bool:
    """True when a specialisation proves gcd(num, den) = 1 over F_p(lambda).

    If G divides both, so does its primitive part in F_p[lambda][z]; at any
    lambda0 where the leading z-coefficient of num survives, the specialised G
    keeps its degree, so a trivial specialised gcd rules out a nontrivial G.
    """
    p = num.field.p
    rows_n, rows_d = clear_denominators(num), clear_denominators(den)
    lead = rows_n[-1]
    base = extension_candidates(p)
    tried = 0
    for field in base:
        for lam in range(field.q):
            if _eval_fp_at(field, lead, lam) == 0:
                continue
            sn = specialize_rows(rows_n, field, lam)
            sd = specialize_rows(rows_d, field, lam)
            if poly_gcd(sn, sd).deg() == 0:
                return True
            tried += 1
            if tried >= 8:
                return False
    return False


def extension_candidates(p: int):
    from .fields import gf

    yield gf(p, 1)
    yield gf(p, 2)


def _eval_fp_at(field: FiniteField, row: tuple, lam: int) -> int:
    acc = 0
    for c in reversed(row):
        acc = field.add(field.mul(acc, lam), c % field.p)
    return acc


# -- rational maps ------------------------------------------------------------


class RationalMap:
    """num/den in canonical form: coprime, denominator monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, *, reduced: bool = False):
        field = num.field
        if den is None:
            den = Poly.const(field, field.one)
        if den.is_zero():
            if num.is_zero():
                raise DegenerateMap("numerator and denominator are both zero")
            raise ZeroDivisionError("zero denominator")
        if not reduced:
            num, den = _reduce(num, den)
        inv = field.inv(den.lc())
        if not field.eq(inv, field.one):
            num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.num.field

    @classmethod
    def identity(cls, field) -> "RationalMap":
        return cls(Poly.monomial(field, 1), reduced=True)

    @classmethod
    def power(cls, field, k: int) -> "RationalMap":
        return cls(Poly.monomial(field, k), reduced=True)

    def degree(self) -> int:
        return max(self.num.deg(), self.den.deg(), 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMap) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def is_canonical(self) -> bool:
        f = self.field
        if not f.eq(self.den.lc(), f.one):
            return False
        if isinstance(f, RatFuncField) and self.den.deg() > 0 and _certify_coprime(self.num, self.den):
            return True
        return poly_gcd(self.num, self.den).deg() == 0

    def __call__(self, x):
        return eval_proj(self, x)

    def compose(self, inner: "RationalMap") -> "RationalMap":
        return compose(self, inner)

    def substitute_power(self, k: int) -> "RationalMap":
        """self(z^k); stays canonical since gcd is preserved under z -> z^k."""
        return RationalMap(self.num.substitute_power(k), self.den.substitute_power(k), reduced=True)

    def specialize(self, field: FiniteField, lam: int) -> "RationalMap":
        """Specialise an F_p(lambda) map at lambda = lam and reduce."""
        num = self.num.map_coeffs(field, lambda c: c.specialize(field, lam))
        den = self.den.map_coeffs(field, lambda c: c.specialize(field, lam))
        return RationalMap(num, den)

    def to_text(self, var: str = "z") -> str:
        if self.den.deg() == 0:
            return self.num.to_text(var)
        return f"({self.num.to_text(var)}) / ({self.den.to_text(var)})"

    def __repr__(self) -> str:
        return f"RationalMap({self.to_text()})"

    def eval_array(self, xs: np.ndarray) -> np.ndarray:
        """Vectorised projective evaluation; the code q stands for infinity."""
        return eval_array(self, xs)


def _reduce(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if num.is_zero():
        return num, Poly.const(num.field, num.field.one)
    if den.deg() == 0:
        return num, den
    field = num.field
    if isinstance(field, RatFuncField) and _certify_coprime(num, den):
        return num, den
    g = poly_gcd(num, den)
    if g.deg() > 0:
        num, den = num // g, den // g
    return num, den


def _homogeneous(poly: Poly, d: int, a: Poly, b: Poly) -> Poly:
    """sum_i c_i a^i b^(d-i)."""
    field = poly.field
    acc = Poly(field)
    a_pows = [Poly.const(field, field.one)]
    for _ in range(poly.deg()):
        a_pows.append(a_pows[-1] * a)
    b_pow = Poly.const(field, field.one)
    b_pows = [b_pow]
    for _ in range(d):
        b_pows.append(b_pows[-1] * b)
    for i, c in enumerate(poly.coeffs):
        if field.is_zero(c):
            continue
        acc = acc + (a_pows[i] * b_pows[d - i]).scale(c)
    return acc


def compose(outer: RationalMap, inner: RationalMap) -> RationalMap:
    """The canonical form of outer(inner(z))."""
    d = outer.degree()
    num = _homogeneous(outer.num, d, inner.num, inner.den)
    den = _homogeneous(outer.den, d, inner.num, inner.den)
    return RationalMap(num, den)


def eval_proj(f: RationalMap, x):
    """f(x) for x in P^1, with INF for infinity."""
    field = f.field
    if x is INF:
        dn, dd = f.num.deg(), f.den.deg()
        if dn > dd:
            return INF
        if dn < dd:
            return field.zero
        return field.div(f.num.lc(), f.den.lc())
    d = f.den.eval(x)
    if field.is_zero(d):
        if field.is_zero(f.num.eval(x)):
            raise DegenerateMap("numerator and denominator vanish together")
        return INF
    return field.div(f.num.eval(x), d)


def eval_array(f: RationalMap, xs: np.ndarray) -> np.ndarray:
    field = f.field
    q = field.q
    xs = np.asarray(xs, dtype=np.int64)
    finite = xs != q
    safe = np.where(finite, xs, 0)
    n = f.num.eval_array(safe)
    d = f.den.eval_array(safe)
    out = np.where(d != 0, field.vmul(n, field.vinv(d)), q)
    if not finite.all():
        out = np.where(finite, out, _inf_code(f))
    return out


def _inf_code(f: RationalMap) -> int:
    v = eval_proj(f, INF)
    return f.field.q if v is INF else v


def formal_derivative(f: RationalMap) -> RationalMap:
    """Quotient-rule derivative, canonicalised."""
    num = f.num.deriv() * f.den - f.num * f.den.deriv()
    if num.is_zero():
        return RationalMap(num)
    return RationalMap(num, f.den * f.den)


def fixed_point_polynomial(f: RationalMap) -> Poly:
    """num(z) - z*den(z), whose roots are the finite fixed points."""
    return f.num - f.den.shift(1)


# -- Hankel determinants ------------------------------------------------------


@dataclass(frozen=True)
class HankelSpec:
    """An m x m Hankel matrix with entry (i, j) = a_{i+j+k_min-2} (1-based i, j).

    ``entries`` lists a_{k_min}, ..., a_{k_min+2m-2}; each is a Poly in w of
    degree <= 1 or a bare field element.
    """

    m: int
    entries: tuple
    k_min: int = 0
    field: object = None

    def entry(self, i: int, j: int):
        return self.entries[i + j - 2]

    def matrix_at(self, field, w) -> list[list]:
        vals = [e.eval(w) if isinstance(e, Poly) else e for e in self.entries]
        return [[vals[i + j] for j in range(self.m)] for i in range(self.m)]


def det_gauss(field, mat: list[list]):
    """Determinant by Gaussian elimination over a field."""
    a = [list(row) for row in mat]
    m = len(a)
    det = field.one
    for k in range(m):
        piv = next((i for i in range(k, m) if not field.is_zero(a[i][k])), None)
        if piv is None:
            return field.zero
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = field.neg(det)
        det = field.mul(det, a[k][k])
        inv = field.inv(a[k][k])
        for i in range(k + 1, m):
            if field.is_zero(a[i][k]):
                continue
            c = field.mul(a[i][k], inv)
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, m):
                row_i[j] = field.sub(row_i[j], field.mul(c, row_k[j]))
    return det


def interpolation_nodes(field, count: int) -> list | None:
    """``count`` distinct elements of the field, or None if it is too small."""
    if isinstance(field, RatFuncField):
        return [field.from_int(k) for k in range(count)] if count <= field.p else None
    if count > field.q:
        return None
    return list(range(count))


def interpolate(field, xs: list, ys: list) -> Poly:
    """The unique polynomial of degree < len(xs) through the points (Lagrange form)."""
    result = Poly(field)
    one = Poly.const(field, field.one)
    for j, (xj, yj) in enumerate(zip(xs, ys)):
        if field.is_zero(yj):
            continue
        basis, denom = one, field.one
        for k, xk in enumerate(xs):
            if k == j:
                continue
            basis = basis * Poly(field, [field.neg(xk), field.one])
            denom = field.mul(denom, field.sub(xj, xk))
        result = result + basis.scale(field.div(yj, denom))
    return result


def hankel_det(spec: HankelSpec) -> Poly:
    """det of the Hankel matrix as a polynomial in w (degree <= m)."""
    field = spec.field
    if field is None:
        first = spec.entries[0]
        if not isinstance(first, Poly):
            raise ValueError("HankelSpec.field is required for constant entries")
        field = first.field
    m = spec.m
    nodes = interpolation_nodes(field, m + 1)
    if nodes is None:
        return _hankel_det_bareiss(spec, field)
    values = [det_gauss(field, spec.matrix_at(field, w)) for w in nodes]
    return interpolate(field, nodes, values)


def _hankel_det_bareiss(spec: HankelSpec, field) -> Poly:
    """Fraction-free elimination over K[w], for fields too small to interpolate in."""
    m = spec.m
    ents = [e if isinstance(e, Poly) else Poly.const(field, e) for e in spec.entries]
    a = [[ents[i + j] for j in range(m)] for i in range(m)]
    sign, prev = 1, Poly.const(field, field.one)
    for k in range(m - 1):
        piv = next((i for i in range(k, m) if not a[i][k].is_zero()), None)
        if piv is None:
            return Poly(field)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, m):
            for j in range(k + 1, m):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    det = a[m - 1][m - 1]
    return det if sign > 0 else -det


def det_cofactor(field, mat: list[list]):
    """Laplace expansion along the first row (test oracle for small matrices)."""
    m = len(mat)
    if m == 1:
        return mat[0][0]
    total = field.zero
    for j in range(m):
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        term = field.mul(mat[0][j], det_cofactor(field, minor))
        total = field.add(total, term) if j % 2 == 0 else field.sub(total, term)
    return total


def batched_det(field: FiniteField, mats: np.ndarray) -> np.ndarray:
    """Determinants of a stack of square matrices (shape (..., m, m)) of finite-field encodings."""
    a = np.array(mats, dtype=np.int64)
    shape = a.shape[:-2]
    m = a.shape[-1]
    a = a.reshape(-1, m, m)
    nb = a.shape[0]
    det = np.ones(nb, dtype=np.int64)
    alive = np.ones(nb, dtype=bool)
    rows = np.arange(nb)
    for k in range(m):
        col = a[:, k:, k]
        nz = col != 0
        has = nz.any(axis=1)
        alive &= has
        piv = k + np.argmax(nz, axis=1)
        swap = piv != k
        if swap.any():
            tmp = a[rows, k, :].copy()
            a[rows, k, :] = a[rows, piv, :]
            a[rows, piv, :] = tmp
            det = np.where(swap, field.vneg(det), det)
        pk = a[:, k, k]
        det = field.vmul(det, pk)
        if k == m - 1:
            break
        inv = field.vinv(pk)
        factors = field.vmul(a[:, k + 1 :, k], inv[:, None])
        update = field.vmul(factors[:, :, None], a[:, k, None, k + 1 :])
        a[:, k + 1 :, k + 1 :] = field.vsub(a[:, k + 1 :, k + 1 :], update)
    det = np.where(alive, det, 0)
    return det.reshape(shape)


__all__ = [
    "INF",
    "HankelSpec",
    "Poly",
    "RationalMap",
    "batched_det",
    "compose",
    "det_cofactor",
    "det_gauss",
    "eval_array",
    "eval_proj",
    "fixed_point_polynomial",
    "formal_derivative",
    "hankel_det",
    "interpolate",
    "is_inf",
    "poly_divmod",
    "poly_gcd",
]
