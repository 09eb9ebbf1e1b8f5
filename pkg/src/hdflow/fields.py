"""Prime fields, extension fields F_{p^n}, and the rational function field F_p(lambda).

Finite-field elements are represented by their integer encoding: the element
``a_0 + a_1*alpha + ... + a_{n-1}*alpha^{n-1}`` (alpha a root of the modulus)
is the integer ``a_0 + a_1*p + ... + a_{n-1}*p^{n-1}``.  Field objects carry the
arithmetic; :class:`Elem` wraps a value together with its field when operator
syntax is convenient.

Fields up to ``TABLE_CAP`` elements build discrete log/exp tables lazily, which
gives constant-time scalar arithmetic and vectorised numpy arithmetic.
"""

from __future__ import annotations

import re
from functools import lru_cache

import numpy as np
from sympy import factorint, isprime

from . import _fpx
from .errors import FieldTooLarge, NotIrreducible, NotPrime

TABLE_CAP = 1 << 22
MAX_ORDER = 1 << 64

# The fourth-degree modulus attached to alpha = sqrt(1 + sqrt(-1)) over F_3.
_PREFERRED_MODULI = {(3, 4): (2, 0, 1, 0, 1)}


def _check_prime(p: int) -> None:
    if not isinstance(p, (int, np.integer)) or p < 3 or not isprime(int(p)):
        raise NotPrime(f"characteristic must be an odd prime, got {p!r}")


class FiniteField:
    """The field F_p[x]/(modulus) of order q = p^n, elements encoded as integers in range(q)."""

    def __init__(self, p: int, modulus: tuple):
        _check_prime(p)
        self.p = int(p)
        self.modulus = tuple(int(c) % self.p for c in modulus)
        self.n = len(self.modulus) - 1
        self.q = self.p**self.n
        if self.q > MAX_ORDER:
            raise ValueError("field order exceeds 2^64")
        self.zero = 0
        self.one = 1
        self._pw = [self.p**i for i in range(self.n)]
        self._tables = None

    # -- identity -----------------------------------------------------------

    @property
    def order(self) -> int:
        return self.q

    @property
    def descriptor(self) -> str:
        if self.n == 1:
            return str(self.p)
        return f"{self.p}^{self.n}:" + ",".join(str(c) for c in self.modulus)

    def __repr__(self) -> str:
        return f"GF({self.descriptor})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.modulus))

    def __call__(self, value) -> "Elem":
        if isinstance(value, Elem):
            if value.field != self:
                raise ValueError("element belongs to a different field")
            return value
        return Elem(self, self.element(value))

    def element(self, value) -> int:
        """Native value for an integer encoding (0 <= value < q) or a digit sequence."""
        if isinstance(value, Elem):
            return value.value
        if isinstance(value, (list, tuple)):
            return self.from_digits(value)
        v = int(value)
        if not 0 <= v < self.q:
            raise ValueError(f"{v} is not an integer encoding for a field of order {self.q}")
        return v

    def from_int(self, k: int) -> int:
        """The image of the integer k under Z -> F_q."""
        return int(k) % self.p

    def elements(self) -> range:
        return range(self.q)

    @property
    def gen(self) -> int:
        """The class of x in F_p[x]/(modulus)."""
        return self.from_digits((0, 1)) if self.n > 1 else (-self.modulus[0]) % self.p

    # -- digits -------------------------------------------------------------

    def digits(self, a: int) -> tuple:
        out = []
        for _ in range(self.n):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def from_digits(self, d) -> int:
        d = list(d)
        if len(d) > self.n:
            d = list(_fpx.rem(_fpx.strip(x % self.p for x in d), self.modulus, self.p))
        return sum((int(c) % self.p) * w for c, w in zip(d, self._pw))

    def vdigits(self, arr: np.ndarray) -> np.ndarray:
        """Digit array of shape arr.shape + (n,)."""
        arr = np.asarray(arr, dtype=np.int64)
        pw = np.asarray(self._pw, dtype=np.int64)
        return (arr[..., None] // pw) % self.p

    def vfrom_digits(self, d: np.ndarray) -> np.ndarray:
        return np.asarray(d, dtype=np.int64) @ np.asarray(self._pw, dtype=np.int64)

    # -- tables -------------------------------------------------------------

    @property
    def has_tables(self) -> bool:
        return self.n > 1 and self.q <= TABLE_CAP

    def _polymulmod(self, a: int, b: int) -> int:
        prod = _fpx.mul(_fpx.strip(self.digits(a)), _fpx.strip(self.digits(b)), self.p)
        return self.from_digits(_fpx.rem(prod, self.modulus, self.p))

    def _slow_pow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._polymulmod(result, base)
            base = self._polymulmod(base, base)
            e >>= 1
        return result

    def _find_primitive(self) -> int:
        primes = list(factorint(self.q - 1))
        for g in range(2, self.q):
            if all(self._slow_pow(g, (self.q - 1) // r) != 1 for r in primes):
                return g
        raise AssertionError("no primitive element found")

    def _build_tables(self):
        p, n, q = self.p, self.n, self.q
        g = self._find_primitive()
        # multiplication by g is F_p-linear on digit vectors: column j = digits(g * alpha^j)
        mat = np.array(
            [self.digits(self._polymulmod(g, self._pw[j] if j else 1)) for j in range(n)], dtype=np.int64
        )  # row j = digits of g*alpha^j, so v_next = v @ mat
        block = max(1, int(q**0.5))
        first = np.zeros((block, n), dtype=np.int64)
        v = np.zeros(n, dtype=np.int64)
        v[0] = 1
        for k in range(block):
            first[k] = v
            v = (v @ mat) % p
        step = np.eye(n, dtype=np.int64)
        for _ in range(block):
            step = (step @ mat) % p
        chunks, cur, total = [], first, 0
        while total < q - 1:
            chunks.append(cur)
            total += block
            cur = (cur @ step) % p
        digits = np.concatenate(chunks)[: q - 1]
        exp = self.vfrom_digits(digits)
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1, dtype=np.int64)
        if (log[1:] < 0).any():
            raise AssertionError("exp table is not a permutation")
        exp2 = np.concatenate([exp, exp])
        # Zech table: plus1[a] = a + 1
        d = self.vdigits(np.arange(q, dtype=np.int64))
        d[:, 0] = (d[:, 0] + 1) % p
        plus1 = self.vfrom_digits(d)
        d = (-self.vdigits(np.arange(q, dtype=np.int64))) % p
        negt = self.vfrom_digits(d)
        self._tables = {
            "exp": exp2,
            "log": log,
            "plus1": plus1,
            "neg": negt,
            "exp_l": exp2.tolist(),
            "log_l": log.tolist(),
            "plus1_l": plus1.tolist(),
            "neg_l": negt.tolist(),
        }
        return self._tables

    @property
    def tables(self) -> dict:
        if self._tables is None:
            if not self.has_tables:
                raise ValueError("tables only exist for extension fields below the table cap")
            self._build_tables()
        return self._tables

    # -- scalar arithmetic --------------------------------------------------

    def is_zero(self, a) -> bool:
        return a == 0

    def eq(self, a, b) -> bool:
        return a == b

    def add(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        if self.has_tables:
            t = self.tables
            log, exp = t["log_l"], t["exp_l"]
            la = log[a]
            c = t["plus1_l"][exp[log[b] - la + self.q - 1]]
            return 0 if c == 0 else exp[la + log[c]]
        p, out, w = self.p, 0, 1
        for _ in range(self.n):
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * w
            w *= p
        return out

    def neg(self, a: int) -> int:
        if self.n == 1:
            return (-a) % self.p
        if self.has_tables:
            return self.tables["neg_l"][a]
        return self.from_digits([-d for d in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.n == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self.has_tables:
            t = self.tables
            return t["exp_l"][t["log_l"][a] + t["log_l"][b]]
        return self._polymulmod(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.n == 1:
            return pow(a, -1, self.p)
        if self.has_tables:
            t = self.tables
            return t["exp_l"][(self.q - 1 - t["log_l"][a]) % (self.q - 1)]
        return self._slow_pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.n == 1:
            return pow(a, e, self.p)
        if self.has_tables:
            t = self.tables
            return t["exp_l"][t["log_l"][a] * e % (self.q - 1)]
        return self._slow_pow(a, e % (self.q - 1) or (self.q - 1))

    def frobenius(self, a: int, i: int = 1) -> int:
        """a^(p^i); the identity on the prime field."""
        if self.n == 1 or a == 0:
            return a
        return self.pow(a, pow(self.p, i % self.n, self.q - 1))

    def is_square(self, a: int) -> bool:
        return a == 0 or self.pow(a, (self.q - 1) // 2) == 1

    def sqrt(self, a: int):
        """A square root of a, the one with the smaller encoding, or None for a non-residue."""
        if a == 0:
            return 0
        if self.has_tables:
            la = self.tables["log_l"][a]
            if la % 2:
                return None
            r = self.tables["exp_l"][la // 2]
        else:
            r = self._tonelli_shanks(a)
            if r is None:
                return None
        return min(r, self.neg(r))

    def _tonelli_shanks(self, a: int):
        q = self.q
        if self.pow(a, (q - 1) // 2) != 1:
            return None
        s, t = 0, q - 1
        while t % 2 == 0:
            s, t = s + 1, t // 2
        z = next(z for z in range(2, q) if not self.is_square(z))
        c = self.pow(z, t)
        x = self.pow(a, (t + 1) // 2)
        b = self.pow(a, t)
        m = s
        while b != 1:
            i, b2 = 0, b
            while b2 != 1:
                b2 = self.mul(b2, b2)
                i += 1
            g = c
            for _ in range(m - i - 1):
                g = self.mul(g, g)
            x = self.mul(x, g)
            c = self.mul(g, g)
            b = self.mul(b, c)
            m = i
        return x

    # -- vectorised arithmetic (numpy int64 arrays of encodings) ------------

    def _require_vec(self):
        if self.n > 1 and not self.has_tables:
            raise FieldTooLarge(f"vectorised arithmetic needs q <= {TABLE_CAP}")
        if self.n == 1 and self.p >= 1 << 31:
            raise ValueError("vectorised prime-field arithmetic needs p < 2^31")

    def vadd(self, a, b):
        self._require_vec()
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.n == 1:
            return (a + b) % self.p
        return self.vfrom_digits((self.vdigits(a) + self.vdigits(b)) % self.p)

    def vneg(self, a):
        self._require_vec()
        a = np.asarray(a, dtype=np.int64)
        if self.n == 1:
            return (-a) % self.p
        return self.tables["neg"][a]

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        self._require_vec()
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.n == 1:
            return a * b % self.p
        t = self.tables
        out = t["exp"][t["log"][a] + t["log"][b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a):
        """Elementwise inverse; zero entries map to zero."""
        self._require_vec()
        a = np.asarray(a, dtype=np.int64)
        if self.n == 1:
            return _vpow_prime(a, self.p - 2, self.p)
        t = self.tables
        out = t["exp"][(self.q - 1 - t["log"][a]) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def vpow(self, a, e: int):
        self._require_vec()
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        if self.n == 1:
            return _vpow_prime(a, e % (self.p - 1) or (self.p - 1), self.p) if e > 0 else self.vpow(self.vinv(a), -e)
        t = self.tables
        out = t["exp"][(t["log"][a] * (e % (self.q - 1))) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def vscale_int(self, a, k: int):
        """Multiply by the integer k (an element of the prime field)."""
        k %= self.p
        a = np.asarray(a, dtype=np.int64)
        if self.n == 1:
            return a * k % self.p
        return self.vfrom_digits(self.vdigits(a) * k % self.p)

    def vfrobenius(self, a, i: int = 1):
        if self.n == 1:
            return np.asarray(a, dtype=np.int64)
        return self.vpow(a, pow(self.p, i % self.n))

    # -- polynomial multiplication fast path ---------------------------------

    def poly_mul(self, a: tuple, b: tuple) -> tuple:
        """Product of coefficient tuples (low to high) over this field."""
        if not a or not b:
            return ()
        if self.n == 1:
            return _fpx.mul(a, b, self.p)
        if min(len(a), len(b)) < 12:
            return _schoolbook(self, a, b)
        prod = self.poly_mul_array(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        return _fpx.strip(prod.tolist())

    def poly_mul_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Product of nonempty coefficient arrays by Kronecker substitution (result not trimmed)."""
        if self.n == 1:
            return _fpx.kron_mul(a, b, self.p)
        prod = _fpx.kron_mul2d(self.vdigits(a), self.vdigits(b), self.p)
        return self.vfrom_digits(self.reduce_digit_rows(prod))

    def reduce_digit_rows(self, rows: np.ndarray) -> np.ndarray:
        """Reduce rows of alpha-polynomial digits (length >= n) modulo the modulus."""
        n, p = self.n, self.p
        rows = rows.copy()
        mod = np.asarray(self.modulus[:n], dtype=np.int64)
        for k in range(rows.shape[-1] - 1, n - 1, -1):
            c = rows[..., k]
            rows[..., k - n : k] = (rows[..., k - n : k] - c[..., None] * mod) % p
        return rows[..., :n]


def _vpow_prime(a: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.ones_like(a)
    base = a % p
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def _schoolbook(field, a: tuple, b: tuple) -> tuple:
    out = [field.zero] * (len(a) + len(b) - 1)
    add, mul, is_zero = field.add, field.mul, field.is_zero
    for i, u in enumerate(a):
        if is_zero(u):
            continue
        for j, v in enumerate(b):
            out[i + j] = add(out[i + j], mul(u, v))
    while out and is_zero(out[-1]):
        out.pop()
    return tuple(out)


class PrimeField(FiniteField):
    """F_p, encoded as range(p)."""

    def __init__(self, p: int):
        super().__init__(p, (0, 1))


class ExtField(FiniteField):
    """F_p[x]/(modulus) for an irreducible monic modulus of degree >= 2."""

    def __init__(self, p: int, modulus):
        _check_prime(p)
        modulus = _fpx.strip(int(c) % p for c in modulus)
        if len(modulus) < 3:
            raise ValueError("extension modulus must have degree >= 2")
        if modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        if not _fpx.is_irreducible(modulus, p):
            raise NotIrreducible(f"{modulus} is reducible over F_{p}")
        super().__init__(p, modulus)


@lru_cache(maxsize=None)
def prime_field(p: int) -> PrimeField:
    return PrimeField(p)


@lru_cache(maxsize=None)
def _ext_field(p: int, modulus: tuple) -> ExtField:
    return ExtField(p, modulus)


def make_ext_field(p: int, modulus) -> FiniteField:
    """Field handle for F_p[x]/(modulus); a degree-1 modulus gives F_p itself.

    Raises NotPrime for composite p or p = 2 and NotIrreducible for a reducible modulus.
    """
    _check_prime(p)
    mod = _fpx.strip(int(c) % p for c in modulus)
    if len(mod) < 2:
        raise NotIrreducible("modulus must have degree >= 1")
    if mod[-1] != 1:
        raise ValueError("modulus must be monic")
    if len(mod) == 2:
        return prime_field(p)
    return _ext_field(p, mod)


@lru_cache(maxsize=None)
def default_modulus(p: int, n: int) -> tuple:
    """x^4+x^2+2 for F_81; otherwise the irreducible monic of degree n with smallest lower-coefficient encoding."""
    if (p, n) in _PREFERRED_MODULI:
        return _PREFERRED_MODULI[(p, n)]
    if n == 1:
        return (0, 1)
    for k in range(p**n):
        low = []
        for _ in range(n):
            k, r = divmod(k, p)
            low.append(r)
        cand = tuple(low) + (1,)
        if _fpx.is_irreducible(cand, p):
            return cand
    raise AssertionError("irreducible polynomials exist in every degree")


def gf(p: int, n: int = 1) -> FiniteField:
    """F_{p^n} with the default modulus."""
    return make_ext_field(p, default_modulus(p, n))


def parse_field(desc: str) -> FiniteField:
    """Parse "p" or "p^n:c0,c1,...,cn" (modulus coefficients low to high)."""
    s = desc.strip()
    m = re.fullmatch(r"(\d+)", s)
    if m:
        _check_prime(int(m.group(1)))
        return prime_field(int(m.group(1)))
    m = re.fullmatch(r"(\d+)\^(\d+)(?::([\d,\s]+))?", s)
    if not m:
        raise ValueError(f"bad field descriptor {desc!r}")
    p, n = int(m.group(1)), int(m.group(2))
    if m.group(3) is None:
        _check_prime(p)
        return gf(p, n)
    coeffs = tuple(int(c) for c in m.group(3).split(","))
    if len(coeffs) != n + 1:
        raise ValueError(f"descriptor {desc!r} needs {n + 1} modulus coefficients")
    return make_ext_field(p, coeffs)


# -- embeddings -------------------------------------------------------------


@lru_cache(maxsize=None)
def _embedding_matrix(small: FiniteField, big: FiniteField) -> np.ndarray:
    if big.p != small.p or big.n % small.n:
        raise ValueError(f"{small} does not embed in {big}")
    if small.n == 1:
        mat = np.zeros((1, big.n), dtype=np.int64)
        mat[0, 0] = 1
        return mat
    # smallest-encoding root of the small modulus in the big field
    xs = np.arange(big.q, dtype=np.int64)
    acc = np.zeros_like(xs)
    for c in reversed(small.modulus):
        acc = big.vadd(big.vmul(acc, xs), np.full_like(xs, c))
    roots = np.nonzero(acc == 0)[0]
    r = int(roots[0])
    powers, cur = [], 1
    for _ in range(small.n):
        powers.append(big.digits(cur))
        cur = big.mul(cur, r)
    return np.array(powers, dtype=np.int64)  # row i = digits of r^i


def embed(small: FiniteField, big: FiniteField, a):
    """Image of a (encoding or numpy array of encodings) under a fixed embedding small -> big."""
    if small == big:
        return a
    mat = _embedding_matrix(small, big)
    if isinstance(a, np.ndarray):
        return big.vfrom_digits(small.vdigits(a) @ mat % big.p)
    d = np.asarray(small.digits(int(a)), dtype=np.int64)
    return int(big.vfrom_digits(d @ mat % big.p))


def extension(field: FiniteField, k: int) -> FiniteField:
    """The default field of degree k over ``field`` (degree n*k over F_p)."""
    if k == 1:
        return field
    return gf(field.p, field.n * k)


# -- F_p(lambda) ------------------------------------------------------------


class RatFunc:
    """An element num/den of F_p(lambda), always stored coprime with monic denominator."""

    __slots__ = ("p", "num", "den")

    def __init__(self, p: int, num, den=(1,), *, canonical: bool = False):
        self.p = p
        if canonical:
            self.num, self.den = num, den
            return
        num = _fpx.strip(int(c) % p for c in num)
        den = _fpx.strip(int(c) % p for c in den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = (), (1,)
            return
        if len(den) > 1:
            g = _fpx.gcd(num, den, p)
            if len(g) > 1:
                num = _fpx.exact_div(num, g, p)
                den = _fpx.exact_div(den, g, p)
        c = pow(den[-1], -1, p)
        self.num = _fpx.scale(num, c, p)
        self.den = _fpx.scale(den, c, p)

    def canonicalize(self) -> "RatFunc":
        return RatFunc(self.p, self.num, self.den)

    def is_zero(self) -> bool:
        return not self.num

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = RatFunc(self.p, (other,))
        return isinstance(other, RatFunc) and (self.p, self.num, self.den) == (other.p, other.num, other.den)

    def __hash__(self) -> int:
        return hash((self.p, self.num, self.den))

    def __add__(self, other):
        return ratfunc_field(self.p).add(self, _coerce_rf(self.p, other))

    __radd__ = __add__

    def __sub__(self, other):
        return ratfunc_field(self.p).sub(self, _coerce_rf(self.p, other))

    def __rsub__(self, other):
        return ratfunc_field(self.p).sub(_coerce_rf(self.p, other), self)

    def __neg__(self):
        return ratfunc_field(self.p).neg(self)

    def __mul__(self, other):
        return ratfunc_field(self.p).mul(self, _coerce_rf(self.p, other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return ratfunc_field(self.p).div(self, _coerce_rf(self.p, other))

    def __rtruediv__(self, other):
        return ratfunc_field(self.p).div(_coerce_rf(self.p, other), self)

    def __pow__(self, e: int):
        return ratfunc_field(self.p).pow(self, e)

    def specialize(self, field: FiniteField, lam: int) -> int:
        """Value at lambda = lam in a finite field of the same characteristic."""
        n = _eval_in(field, self.num, lam)
        d = _eval_in(field, self.den, lam)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the specialisation")
        return field.div(n, d)

    def __repr__(self) -> str:
        n = format_poly(self.num, "L")
        if self.den == (1,):
            return n
        return f"({n})/({format_poly(self.den, 'L')})"


def _eval_in(field: FiniteField, coeffs: tuple, x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = field.add(field.mul(acc, x), field.from_int(c))
    return acc


def _coerce_rf(p: int, x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, int):
        return RatFunc(p, (x,))
    return NotImplemented


def format_poly(coeffs, var: str = "z", fmt=str) -> str:
    """Sparse "c*var^k + ..." text, highest degree first."""
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        s = fmt(c)
        if s == "0":
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            terms.append(s)
        elif s == "1":
            terms.append(mono)
        else:
            terms.append(f"{s}*{mono}" if re.fullmatch(r"\w+", s) else f"({s})*{mono}")
    return " + ".join(terms) if terms else "0"


class RatFuncField:
    """The rational function field F_p(lambda)."""

    def __init__(self, p: int):
        _check_prime(p)
        self.p = p
        self.zero = RatFunc(p, (), (1,), canonical=True)
        self.one = RatFunc(p, (1,), (1,), canonical=True)

    @property
    def gen(self) -> RatFunc:
        return RatFunc(self.p, (0, 1), (1,), canonical=True)

    @property
    def descriptor(self) -> str:
        return f"{self.p}(lambda)"

    def __repr__(self) -> str:
        return f"F_{self.p}(lambda)"

    def __eq__(self, other) -> bool:
        return isinstance(other, RatFuncField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("ratfunc", self.p))

    def __call__(self, value) -> RatFunc:
        return self.element(value)

    def element(self, value) -> RatFunc:
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, tuple) and len(value) == 2 and all(isinstance(v, (tuple, list)) for v in value):
            return RatFunc(self.p, value[0], value[1])
        return RatFunc(self.p, value)

    def from_int(self, k: int) -> RatFunc:
        k %= self.p
        return RatFunc(self.p, (k,) if k else (), (1,), canonical=True)

    def from_poly(self, coeffs) -> RatFunc:
        return RatFunc(self.p, coeffs)

    def is_zero(self, a: RatFunc) -> bool:
        return not a.num

    def eq(self, a, b) -> bool:
        return a.num == b.num and a.den == b.den

    def add(self, a: RatFunc, b: RatFunc) -> RatFunc:
        p = self.p
        if not a.num:
            return b
        if not b.num:
            return a
        if a.den == b.den:
            if a.den == (1,):
                return RatFunc(p, _fpx.add(a.num, b.num, p), (1,), canonical=True)
            return RatFunc(p, _fpx.add(a.num, b.num, p), a.den)
        num = _fpx.add(_fpx.mul(a.num, b.den, p), _fpx.mul(b.num, a.den, p), p)
        return RatFunc(p, num, _fpx.mul(a.den, b.den, p))

    def neg(self, a: RatFunc) -> RatFunc:
        return RatFunc(self.p, _fpx.neg(a.num, self.p), a.den, canonical=True)

    def sub(self, a: RatFunc, b: RatFunc) -> RatFunc:
        return self.add(a, self.neg(b))

    def mul(self, a: RatFunc, b: RatFunc) -> RatFunc:
        p = self.p
        if not a.num or not b.num:
            return self.zero
        if a.den == (1,) and b.den == (1,):
            return RatFunc(p, _fpx.mul(a.num, b.num, p), (1,), canonical=True)
        return RatFunc(p, _fpx.mul(a.num, b.num, p), _fpx.mul(a.den, b.den, p))

    def inv(self, a: RatFunc) -> RatFunc:
        if not a.num:
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.p, a.den, a.num)

    def div(self, a: RatFunc, b: RatFunc) -> RatFunc:
        return self.mul(a, self.inv(b))

    def pow(self, a: RatFunc, e: int) -> RatFunc:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def frobenius(self, a: RatFunc, i: int = 1) -> RatFunc:
        return self.pow(a, self.p**i)

    def poly_mul(self, a: tuple, b: tuple) -> tuple:
        if not a or not b:
            return ()
        if min(len(a), len(b)) >= 12:
            return _ratfunc_poly_mul(self, a, b)
        return _schoolbook(self, a, b)


def _ratfunc_poly_mul(field: RatFuncField, a: tuple, b: tuple) -> tuple:
    """Clear denominators and multiply as bivariate polynomials over F_p."""
    p = field.p
    da, na = _common_den(p, a)
    db, nb = _common_den(p, b)
    prod = _fpx.kron_mul2d(_to_array(na), _to_array(nb), p)
    den = _fpx.mul(da, db, p)
    return tuple(RatFunc(p, _fpx.strip(row.tolist()), den) for row in prod)


def _common_den(p: int, coeffs: tuple) -> tuple[tuple, list]:
    den = (1,)
    for c in coeffs:
        if c.den != (1,) and c.den != den:
            g = _fpx.gcd(den, c.den, p)
            den = _fpx.mul(den, _fpx.exact_div(c.den, g, p), p)
    nums = [_fpx.mul(c.num, _fpx.exact_div(den, c.den, p), p) for c in coeffs]
    return den, nums


def _to_array(rows: list) -> np.ndarray:
    width = max(1, max(len(r) for r in rows))
    out = np.zeros((len(rows), width), dtype=np.int64)
    for i, r in enumerate(rows):
        out[i, : len(r)] = r
    return out


@lru_cache(maxsize=None)
def ratfunc_field(p: int) -> RatFuncField:
    return RatFuncField(p)


# -- element wrapper ----------------------------------------------------------


class Elem:
    """A finite-field element bound to its field, with operator syntax."""

    __slots__ = ("field", "value")

    def __init__(self, field: FiniteField, value: int):
        self.field = field
        self.value = value

    def _other(self, x) -> int:
        if isinstance(x, Elem):
            if x.field != self.field:
                raise ValueError("mixed fields")
            return x.value
        if isinstance(x, int):
            return self.field.from_int(x)
        return NotImplemented

    def __add__(self, x):
        return Elem(self.field, self.field.add(self.value, self._other(x)))

    __radd__ = __add__

    def __sub__(self, x):
        return Elem(self.field, self.field.sub(self.value, self._other(x)))

    def __rsub__(self, x):
        return Elem(self.field, self.field.sub(self._other(x), self.value))

    def __mul__(self, x):
        return Elem(self.field, self.field.mul(self.value, self._other(x)))

    __rmul__ = __mul__

    def __truediv__(self, x):
        return Elem(self.field, self.field.div(self.value, self._other(x)))

    def __rtruediv__(self, x):
        return Elem(self.field, self.field.div(self._other(x), self.value))

    def __neg__(self):
        return Elem(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return Elem(self.field, self.field.pow(self.value, e))

    def __eq__(self, x) -> bool:
        if isinstance(x, Elem):
            return self.field == x.field and self.value == x.value
        if isinstance(x, int):
            return self.value == self.field.from_int(x)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.value))

    def __int__(self) -> int:
        return self.value

    __index__ = __int__

    def inverse(self) -> "Elem":
        return Elem(self.field, self.field.inv(self.value))

    def __repr__(self) -> str:
        return f"{self.value}@{self.field.descriptor}"


def sqrt_in_field(a: Elem):
    """Square root of a with the smaller integer encoding, or None when a is a non-residue."""
    r = a.field.sqrt(a.value)
    return None if r is None else Elem(a.field, r)


def frobenius_power(a: Elem, i: int) -> Elem:
    """a^(p^i)."""
    return Elem(a.field, a.field.frobenius(a.value, i))
