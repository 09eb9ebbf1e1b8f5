"""Dense univariate polynomials over a prime field F_p, plus Kronecker multiplication.

Polynomials are tuples of ints in ``range(p)``, lowest degree first, with
trailing zeros stripped; ``()`` is the zero polynomial.  Everything here is
shared plumbing for the field and polynomial layers; nothing is exported from
the package.
"""

from __future__ import annotations

import numpy as np

try:  # GMP multiplication is much faster for big Kronecker products
    import gmpy2

    def _bigmul(a: int, b: int) -> int:
        return int(gmpy2.mpz(a) * gmpy2.mpz(b))

except ImportError:  # pragma: no cover

    def _bigmul(a: int, b: int) -> int:
        return a * b


KRONECKER_CUTOFF = 24  # below this many terms schoolbook wins


def strip(c) -> tuple:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def deg(a: tuple) -> int:
    return len(a) - 1


def add(a: tuple, b: tuple, p: int) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] = (out[i] + v) % p
    return strip(out)


def sub(a: tuple, b: tuple, p: int) -> tuple:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, v in enumerate(b):
        out[i] = (out[i] - v) % p
    return strip(out)


def neg(a: tuple, p: int) -> tuple:
    return tuple((-v) % p for v in a)


def scale(a: tuple, c: int, p: int) -> tuple:
    c %= p
    if c == 0:
        return ()
    return tuple(v * c % p for v in a)


def mul(a: tuple, b: tuple, p: int) -> tuple:
    if not a or not b:
        return ()
    if len(a) == 1:
        return scale(b, a[0], p)
    if len(b) == 1:
        return scale(a, b[0], p)
    if min(len(a), len(b)) >= KRONECKER_CUTOFF:
        prod = kron_mul(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64), p)
        return strip(prod.tolist())
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] += u * v
    return strip(v % p for v in out)


def monic(a: tuple, p: int) -> tuple:
    if not a or a[-1] == 1:
        return a
    return scale(a, pow(a[-1], -1, p), p)


def divmod_(a: tuple, b: tuple, p: int) -> tuple[tuple, tuple]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return (), a
    if len(a) > 96 and len(b) > 8:
        return _divmod_np(a, b, p)
    r = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = r[k] * inv % p
        if c:
            q[k - db] = c
            off = k - db
            for j in range(db + 1):
                r[off + j] = (r[off + j] - c * b[j]) % p
    return strip(q), strip(r[:db])


def _divmod_np(a: tuple, b: tuple, p: int) -> tuple[tuple, tuple]:
    r = np.array(a, dtype=np.int64)
    bb = np.array(b, dtype=np.int64)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = np.zeros(len(a) - db, dtype=np.int64)
    for k in range(len(a) - 1, db - 1, -1):
        c = int(r[k]) * inv % p
        if c:
            q[k - db] = c
            seg = r[k - db : k + 1]
            seg -= c * bb
            seg %= p
    return strip(q.tolist()), strip(r[:db].tolist())


def rem(a: tuple, b: tuple, p: int) -> tuple:
    return divmod_(a, b, p)[1]


def gcd(a: tuple, b: tuple, p: int) -> tuple:
    """Monic gcd; gcd(0, 0) = 0."""
    if len(a) > 64 and len(b) > 64:
        return _gcd_np(a, b, p)
    while b:
        a, b = b, rem(a, b, p)
    return monic(a, p)


def _gcd_np(a: tuple, b: tuple, p: int) -> tuple:
    x = np.array(a, dtype=np.int64)
    y = np.array(b, dtype=np.int64)
    while len(y):
        # x <- x mod y, in place on a shrinking view
        dy = len(y) - 1
        inv = pow(int(y[-1]), -1, p)
        n = len(x)
        while n - 1 >= dy:
            c = int(x[n - 1]) * inv % p
            if c:
                seg = x[n - 1 - dy : n]
                seg -= c * y
                seg %= p
            n -= 1
            while n and x[n - 1] == 0:
                n -= 1
        x, y = y, x[:n].copy()
    return monic(strip(x.tolist()), p)


def exact_div(a: tuple, b: tuple, p: int) -> tuple:
    q, r = divmod_(a, b, p)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def evaluate(a: tuple, x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def deriv(a: tuple, p: int) -> tuple:
    return strip(i * a[i] % p for i in range(1, len(a)))


def powmod(a: tuple, e: int, m: tuple, p: int) -> tuple:
    result = (1,)
    base = rem(a, m, p)
    while e:
        if e & 1:
            result = rem(mul(result, base, p), m, p)
        base = rem(mul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(f: tuple, p: int) -> bool:
    """Rabin's test for a polynomial of degree >= 1 over F_p."""
    n = deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    f = monic(f, p)
    x = (0, 1)
    if powmod(x, p**n, f, p) != rem(x, f, p):
        return False
    for r in _prime_divisors(n):
        h = sub(powmod(x, p ** (n // r), f, p), x, p)
        if deg(gcd(h, f, p)) > 0:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --- Kronecker substitution -------------------------------------------------


def _slot_bytes(bound: int) -> int:
    return max(1, (int(bound).bit_length() + 8) // 8)


def _pack(arr: np.ndarray, width: int) -> int:
    raw = np.ascontiguousarray(arr, dtype="<u8").view(np.uint8).reshape(-1, 8)[:, :width]
    return int.from_bytes(raw.tobytes(), "little")


def _unpack(value: int, count: int, width: int) -> np.ndarray:
    raw = np.frombuffer(value.to_bytes(count * width, "little"), dtype=np.uint8).reshape(count, width)
    full = np.zeros((count, 8), dtype=np.uint8)
    full[:, :width] = raw
    return full.view("<u8").reshape(count).astype(np.int64)


def kron_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product of two coefficient vectors over F_p (entries in range(p))."""
    n = len(a) + len(b) - 1
    width = _slot_bytes(min(len(a), len(b)) * (p - 1) ** 2)
    c = _unpack(_bigmul(_pack(a, width), _pack(b, width)), n, width)
    return c % p


def kron_mul2d(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product of bivariate arrays ``a[i, j]`` (outer degree i, inner degree j) over F_p."""
    ra, ca = a.shape
    rb, cb = b.shape
    stride = ca + cb - 1
    pa = np.zeros((ra, stride), dtype=np.int64)
    pa[:, :ca] = a
    pb = np.zeros((rb, stride), dtype=np.int64)
    pb[:, :cb] = b
    rows = ra + rb - 1
    width = _slot_bytes(min(ra, rb) * min(ca, cb) * (p - 1) ** 2)
    c = _unpack(_bigmul(_pack(pa.ravel(), width), _pack(pb.ravel(), width)), rows * stride, width)
    return (c % p).reshape(rows, stride)


# --- linear algebra over F_p --------------------------------------------------


def rref(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p and the pivot columns."""
    a = np.array(mat, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if not len(nz):
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        others = np.nonzero(a[:, c])[0]
        for i in others:
            if i != r:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        pivots.append(c)
        r += 1
    return a, pivots


def inverse_mod_p(mat: np.ndarray, p: int) -> np.ndarray:
    n = len(mat)
    aug = np.concatenate([np.asarray(mat, dtype=np.int64) % p, np.eye(n, dtype=np.int64)], axis=1)
    red, piv = rref(aug, p)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return red[:, n:]


def solve_affine(mat: np.ndarray, rhs: np.ndarray, p: int):
    """All solutions of mat @ x = rhs over F_p as (particular, kernel basis), or None if inconsistent."""
    rows, cols = mat.shape
    aug = np.concatenate([np.asarray(mat, dtype=np.int64) % p, np.asarray(rhs, dtype=np.int64).reshape(-1, 1) % p], axis=1)
    red, piv = rref(aug, p)
    if cols in piv:
        return None
    part = np.zeros(cols, dtype=np.int64)
    for r, c in enumerate(piv):
        part[c] = red[r, cols]
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for fcol in free:
        v = np.zeros(cols, dtype=np.int64)
        v[fcol] = 1
        for r, c in enumerate(piv):
            v[c] = (-red[r, fcol]) % p
        basis.append(v)
    return part, basis
