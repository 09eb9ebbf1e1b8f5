"""The flow self-map phi_{lambda,p} on P^1 and its dynamics over finite fields.

With m = (p-1)/2 and a_k(w) = (lambda^p (1-w) - (lambda^p - w) lambda^k) / k,

    f(w) = det[a_{i+j}(w)]_{i,j=1..m},   g(w) = det[a_{i+j-1}(w)]_{i,j=1..m},
    phi~(w) = (w / lambda^(p-1)) * (f(w) / g(w))^2,   phi(z) = phi~(z^p).

A point of P^1 stands for the rank-2 graded parabolic Higgs bundle whose Higgs
field vanishes there, so the dynamics of phi on P^1(F_q) is the dynamics of the
flow on isomorphism classes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from . import _fpx
from .errors import BadLambda, FieldTooLarge, PoleAtPoint
from .fields import Elem, FiniteField, RatFunc, embed, extension, prime_field, ratfunc_field
from .legendre import BivariateRing
from .poly import INF, Poly, RationalMap, batched_det, eval_proj, formal_derivative

GRAPH_CAP = 10**6
FORMAT_VERSION = 1


# -- construction ---------------------------------------------------------------


@dataclass(frozen=True)
class HiggsClass:
    """Isomorphism class of a graded Higgs bundle, determined by the zero of its Higgs field."""

    zero: object

    def flow(self, selfmap: "SelfMap") -> "HiggsClass":
        return HiggsClass(selfmap.eval(self.zero))


@dataclass
class SelfMap:
    p: int
    lam: object  # native element of ``field`` or "symbolic"
    field: object  # FiniteField, or RatFuncField for symbolic lambda
    phi: RationalMap
    phi_tilde: RationalMap
    f_tilde: Poly | None = None
    g_tilde: Poly | None = None

    def eval(self, z):
        return eval_proj(self.phi, z)

    def eval_array(self, xs: np.ndarray) -> np.ndarray:
        return self.phi_tilde.eval_array(_pth_power(self.field, xs, self.p))

    def base_change(self, big: FiniteField) -> "SelfMap":
        """The same map with coefficients pushed into a larger field."""
        small = self.field

        def push(f: RationalMap) -> RationalMap:
            num = f.num.map_coeffs(big, lambda c: embed(small, big, c))
            den = f.den.map_coeffs(big, lambda c: embed(small, big, c))
            return RationalMap(num, den, reduced=True)

        return SelfMap(self.p, embed(small, big, self.lam), big, push(self.phi), push(self.phi_tilde))

    def lam_text(self) -> str:
        return "symbolic" if self.lam == "symbolic" else str(self.lam)


def _pth_power(field: FiniteField, xs: np.ndarray, p: int) -> np.ndarray:
    """z -> z^p on encodings, keeping the infinity code q."""
    xs = np.asarray(xs, dtype=np.int64)
    fin = xs != field.q
    out = field.vpow(np.where(fin, xs, 0), p)
    return np.where(fin, out, field.q)


def hankel_entry_coeffs(p: int, k: int) -> tuple:
    """(c0, c1) with a_k(w) = c0 + c1*w, as F_p[lambda] tuples, before the 1/k factor."""
    # a_k * k = lambda^p - lambda^(p+k) + w (lambda^k - lambda^p)
    c0 = [0] * (p + k + 1)
    c0[p] += 1
    c0[p + k] -= 1
    c1 = [0] * (p + 1)
    c1[k] += 1
    c1[p] -= 1
    return _fpx.strip(c % p for c in c0), _fpx.strip(c % p for c in c1)


@lru_cache(maxsize=None)
def _interp_inverse(ell: int, count: int) -> np.ndarray:
    """Inverse Vandermonde matrix over F_ell for the nodes 0, 1, ..., count-1."""
    vand = np.array([[pow(j, i, ell) for i in range(count)] for j in range(count)], dtype=np.int64)
    return _fpx.inverse_mod_p(vand, ell)


def _bareiss_fp_lambda(mat: list[list[tuple]], p: int) -> tuple:
    """Determinant of a matrix over F_p[lambda] by fraction-free elimination."""
    a = [list(row) for row in mat]
    m = len(a)
    sign, prev = 1, (1,)
    for k in range(m - 1):
        piv = next((i for i in range(k, m) if a[i][k]), None)
        if piv is None:
            return ()
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, m):
            aik = a[i][k]
            for j in range(k + 1, m):
                t = _fpx.sub(_fpx.mul(a[i][j], akk, p), _fpx.mul(aik, a[k][j], p), p)
                a[i][j] = _fpx.exact_div(t, prev, p) if prev != (1,) else t
        prev = akk
    det = a[m - 1][m - 1]
    return det if sign > 0 else _fpx.neg(det, p)


def symbolic_dets(p: int) -> tuple[list[tuple], list[tuple]]:
    """Coefficients (in w, each an F_p[lambda] tuple) of the f- and g-determinants."""
    m = (p - 1) // 2
    entries = {}
    for k in range(1, 2 * m + 1):
        c0, c1 = hankel_entry_coeffs(p, k)
        inv = pow(k, -1, p)
        entries[k] = (_fpx.scale(c0, inv, p), _fpx.scale(c1, inv, p))
    vinv = _interp_inverse(p, m + 1)

    def det_poly(offset: int) -> list[tuple]:
        values = []
        for w in range(m + 1):
            mat = [
                [_fpx.add(entries[i + j + offset][0], _fpx.scale(entries[i + j + offset][1], w, p), p) for j in range(1, m + 1)]
                for i in range(1, m + 1)
            ]
            values.append(_bareiss_fp_lambda(mat, p))
        coeffs = []
        for i in range(m + 1):
            acc = ()
            for j in range(m + 1):
                acc = _fpx.add(acc, _fpx.scale(values[j], int(vinv[i, j]), p), p)
            coeffs.append(acc)
        return coeffs

    return det_poly(0), det_poly(-1)


def batched_dets(p: int, field: FiniteField, lams: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """f- and g-determinant coefficient arrays (shape (N, m+1), low degree first) for each lambda."""
    ell = field.p
    if ell != p and ell < p:
        raise ValueError("coefficient field characteristic must be p or exceed p")
    m = (p - 1) // 2
    lams = np.asarray(lams, dtype=np.int64)
    lp = field.vpow(lams, p)
    c0, c1 = {}, {}
    for k in range(1, 2 * m + 1):
        lk = field.vpow(lams, k)
        inv = pow(k, -1, ell)
        c0[k] = field.vscale_int(field.vsub(lp, field.vmul(lp, lk)), inv)
        c1[k] = field.vscale_int(field.vsub(lk, lp), inv)
    nodes = np.arange(m + 1, dtype=np.int64) % ell
    vinv = _interp_inverse(ell, m + 1)
    out = []
    for offset in (0, -1):
        # mats[n, node, i, j]
        mats = np.empty((len(lams), m + 1, m, m), dtype=np.int64)
        for i in range(1, m + 1):
            for j in range(1, m + 1):
                k = i + j + offset
                mats[:, :, i - 1, j - 1] = field.vadd(c0[k][:, None], _scale_nodes(field, c1[k], nodes))
        vals = batched_det(field, mats)  # (N, m+1)
        digits = field.vdigits(vals)  # (N, m+1, n)
        coeff_digits = np.einsum("ij,njd->nid", vinv, digits) % ell
        out.append(field.vfrom_digits(coeff_digits))
    return out[0], out[1]


def _scale_nodes(field: FiniteField, c: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    """c[n] * nodes[j] for integer nodes, shape (N, len(nodes))."""
    d = field.vdigits(c)  # (N, n)
    return field.vfrom_digits(d[:, None, :] * nodes[None, :, None] % field.p)


def _raw_phi_tilde(field: FiniteField, lam: int, p: int, f: Poly, g: Poly) -> tuple[Poly, Poly]:
    num = (f * f).shift(1)
    den = (g * g).scale(field.pow(lam, p - 1))
    return num, den


def build_selfmap(p: int, lam="symbolic", field: FiniteField | None = None, *, check: bool | None = None) -> SelfMap:
    """phi_{lambda,p} from the Hankel-determinant formula.

    ``lam`` is "symbolic" (coefficients in F_p(lambda)), an :class:`Elem`, or an
    integer encoding in ``field`` (default F_p).  The field characteristic may
    exceed p, in which case the formula is evaluated literally there.
    """
    from .fields import _check_prime

    _check_prime(p)
    if isinstance(lam, str):
        if lam != "symbolic":
            raise ValueError(f"lambda must be an element or 'symbolic', got {lam!r}")
        sm = _build_symbolic(p)
        if check if check is not None else p <= 13:
            _check_punctures(sm)
        return sm
    if isinstance(lam, Elem):
        field, lam = lam.field, lam.value
    field = field if field is not None else prime_field(p)
    lam = field.element(lam)
    if lam == 0 or lam == 1:
        raise BadLambda("lambda must avoid 0 and 1")
    fc, gc = batched_dets(p, field, np.array([lam], dtype=np.int64))
    f = Poly(field, fc[0].tolist())
    g = Poly(field, gc[0].tolist())
    if g.is_zero():
        raise BadLambda("the g-determinant vanishes identically at this lambda")
    num, den = _raw_phi_tilde(field, lam, p, f, g)
    phi_t = RationalMap(num, den)
    sm = SelfMap(p, lam, field, phi_t.substitute_power(p), phi_t, f, g)
    if check if check is not None else field.p == p:
        _check_punctures(sm)
    return sm


def _build_symbolic(p: int) -> SelfMap:
    R = ratfunc_field(p)
    fc, gc = symbolic_dets(p)
    ring = BivariateRing(p)
    f2 = ring.mul(_rows_to_array(fc), _rows_to_array(fc))
    g2 = ring.mul(_rows_to_array(gc), _rows_to_array(gc))
    num = np.zeros((f2.shape[0] + 1, f2.shape[1]), dtype=np.int64)
    num[1:] = f2
    den = np.zeros((g2.shape[0], g2.shape[1] + p - 1), dtype=np.int64)
    den[:, p - 1 :] = g2
    phi_t = RationalMap(ring.to_poly(num), ring.to_poly(den))
    f = Poly(R, [RatFunc(p, c) for c in fc])
    g = Poly(R, [RatFunc(p, c) for c in gc])
    return SelfMap(p, "symbolic", R, phi_t.substitute_power(p), phi_t, f, g)


def _rows_to_array(rows: list[tuple]) -> np.ndarray:
    width = max(1, max(len(r) for r in rows))
    a = np.zeros((len(rows), width), dtype=np.int64)
    for i, r in enumerate(rows):
        a[i, : len(r)] = r
    return a


def _check_punctures(sm: SelfMap) -> None:
    f = sm.field
    lam = f.gen if sm.lam == "symbolic" else sm.lam
    for z in (f.zero, f.one, lam, INF):
        w = eval_proj(sm.phi, z)
        if not (w is INF and z is INF) and (w is INF or z is INF or not f.eq(w, z)):
            raise AssertionError(f"self-map does not fix the puncture {z!r}")
    if sm.phi.degree() != sm.p**2:
        raise AssertionError(f"self-map has degree {sm.phi.degree()}, expected {sm.p ** 2}")


def closed_form(p: int, lam="symbolic", field: FiniteField | None = None) -> RationalMap:
    """The explicit formulas for p = 3 and p = 5, over F_p(lambda) or at a given lambda."""
    if isinstance(lam, str):
        field = ratfunc_field(p)
        L = field.gen
    elif isinstance(lam, Elem):
        field, L = lam.field, lam.value
    else:
        field = field if field is not None else prime_field(p)
        L = field.element(lam)
    F = field
    one = F.one

    def c(*terms):
        acc = F.zero
        for t in terms:
            acc = F.add(acc, t)
        return acc

    def mul(*xs):
        acc = one
        for x in xs:
            acc = F.mul(acc, x)
        return acc

    lp1 = F.add(L, one)
    if p == 3:
        inner_n = Poly(F, [mul(L, lp1), F.zero, F.zero, one])
        inner_d = Poly(F, [mul(L, L), F.zero, F.zero, lp1])
        num = (inner_n * inner_n).shift(3)
        den = inner_d * inner_d
        return RationalMap(num, den)
    if p == 5:
        A = c(mul(L, L), F.neg(L), one)
        z0 = F.zero
        inner_n = Poly(F, [mul(F.pow(L, 4), A), z0, z0, z0, z0, F.neg(mul(L, lp1, A)), z0, z0, z0, z0, one])
        inner_d = Poly(F, [F.pow(L, 6), z0, z0, z0, z0, F.neg(mul(L, L, lp1, A)), z0, z0, z0, z0, A])
        return RationalMap((inner_n * inner_n).shift(5), inner_d * inner_d)
    raise ValueError("closed forms are available for p = 3 and p = 5 only")


# -- dynamics --------------------------------------------------------------------------


def iterate(sm: SelfMap, z, f: int):
    """phi^f(z) by repeated projective evaluation."""
    for _ in range(f):
        z = eval_proj(sm.phi, z)
    return z


def _codes(field: FiniteField) -> np.ndarray:
    return np.arange(field.q + 1, dtype=np.int64)  # code q is infinity


def successor_table(sm: SelfMap) -> np.ndarray:
    field = sm.field
    if not isinstance(field, FiniteField):
        raise ValueError("orbit computations need lambda in a finite field")
    if field.q > GRAPH_CAP:
        raise FieldTooLarge(f"orbit computations are capped at q <= {GRAPH_CAP}")
    return sm.eval_array(_codes(field))


def node_label(code: int, q: int):
    return "inf" if code == q else int(code)


@dataclass
class OrbitGraph:
    field: str
    lam: int
    p: int
    q: int
    successor: np.ndarray
    cycles: list[list[int]]
    tails: np.ndarray  # preperiod (distance to the cycle) per node
    config: dict = dc_field(default_factory=dict)

    @property
    def node_count(self) -> int:
        return len(self.successor)

    def cycle_nodes(self) -> set[int]:
        return {n for c in self.cycles for n in c}

    def preimages(self, node: int) -> list[int]:
        return [int(v) for v in np.nonzero(self.successor == node)[0]]

    def to_dict(self) -> dict:
        q = self.q
        lab = lambda c: node_label(int(c), q)  # noqa: E731
        out = {
            "format_version": FORMAT_VERSION,
            "field": self.field,
            "lambda": self.lam,
            "p": self.p,
            "edges": [[lab(s), lab(d)] for s, d in enumerate(self.successor)],
            "cycles": [[lab(n) for n in c] for c in self.cycles],
            "tails": {str(lab(n)): int(t) for n, t in enumerate(self.tails)},
        }
        if self.config:
            out["config"] = self.config
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)

    def to_dot(self) -> str:
        q = self.q
        on_cycle = self.cycle_nodes()
        lines = [f"// format_version={FORMAT_VERSION}"]
        for k, v in sorted(self.config.items()):
            lines.append(f"// {k}={v}")
        lines.append("digraph orbits {")
        for n in range(len(self.successor)):
            name = node_label(n, q)
            shape = "doublecircle" if n in on_cycle else "circle"
            lines.append(f'  "{name}" [shape={shape}];')
        for s, d in enumerate(self.successor):
            lines.append(f'  "{node_label(s, q)}" -> "{node_label(int(d), q)}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        q = self.q
        lines = [f"# format_version={FORMAT_VERSION}"]
        for k, v in sorted(self.config.items()):
            lines.append(f"# {k}={v}")
        lines.append(f"nodes: {self.node_count}")
        lines.append(f"cycles: {len(self.cycles)}")
        for c in self.cycles:
            lines.append(f"  length {len(c)}: " + " -> ".join(str(node_label(n, q)) for n in c))
        hist: dict[int, int] = {}
        for t in self.tails.tolist():
            hist[t] = hist.get(t, 0) + 1
        lines.append("tail lengths: " + ", ".join(f"{t}:{hist[t]}" for t in sorted(hist)))
        return "\n".join(lines) + "\n"


def functional_graph(succ: np.ndarray) -> tuple[list[list[int]], np.ndarray]:
    """Canonical cycles and per-node distance to a cycle for a successor table."""
    n = len(succ)
    succ_l = succ.tolist()
    indeg = np.bincount(succ, minlength=n).tolist()
    removed = [False] * n
    stack = [v for v in range(n) if indeg[v] == 0]
    order = []
    while stack:
        v = stack.pop()
        removed[v] = True
        order.append(v)
        w = succ_l[v]
        indeg[w] -= 1
        if indeg[w] == 0:
            stack.append(w)
    tails = [0] * n
    for v in reversed(order):  # successors of v are settled before v in reverse peel order
        tails[v] = tails[succ_l[v]] + 1
    seen = [False] * n
    cycles = []
    for v in range(n):
        if removed[v] or seen[v]:
            continue
        cyc = []
        w = v
        while not seen[w]:
            seen[w] = True
            cyc.append(w)
            w = succ_l[w]
        start = cyc.index(min(cyc))
        cycles.append(cyc[start:] + cyc[:start])
    cycles.sort(key=lambda c: (len(c), c[0]))
    return cycles, np.asarray(tails, dtype=np.int64)


def orbit_graph(sm: SelfMap) -> OrbitGraph:
    """Functional graph of phi on all q+1 points of P^1(F_q)."""
    succ = successor_table(sm)
    cycles, tails = functional_graph(succ)
    return OrbitGraph(sm.field.descriptor, int(sm.lam), sm.p, sm.field.q, succ, cycles, tails)


def preperiod(sm: SelfMap, z) -> tuple[int, int]:
    """Minimal (tail, cycle) with phi^(tail+cycle)(z) = phi^tail(z), by Brent's method."""
    field = sm.field
    if isinstance(field, FiniteField) and field.q > GRAPH_CAP:
        raise FieldTooLarge(f"orbit computations are capped at q <= {GRAPH_CAP}")
    step = sm.eval
    power = lam = 1
    tortoise, hare = z, step(z)
    while tortoise != hare:
        if power == lam:
            tortoise, power, lam = hare, power * 2, 0
        hare = step(hare)
        lam += 1
    tortoise = hare = z
    for _ in range(lam):
        hare = step(hare)
    mu = 0
    while tortoise != hare:
        tortoise, hare = step(tortoise), step(hare)
        mu += 1
    return mu, lam


def periodic_points(sm: SelfMap, f: int, s: int = 1) -> list[tuple[object, int]]:
    """All z in P^1(F_{q^s}) with phi^f(z) = z, each with its exact period (a divisor of f)."""
    big = extension(sm.field, s)
    if big.q > GRAPH_CAP:
        raise FieldTooLarge(f"orbit computations are capped at q <= {GRAPH_CAP}")
    m = sm if big == sm.field else sm.base_change(big)
    codes = _codes(big)
    orbit = [codes]
    for _ in range(f):
        orbit.append(m.eval_array(orbit[-1]))
    fixed = np.nonzero(orbit[f] == codes)[0]
    out = []
    for c in fixed.tolist():
        period = next(d for d in range(1, f + 1) if f % d == 0 and orbit[d][c] == c)
        out.append((INF if c == big.q else c, period))
    return out


# -- lifting data --------------------------------------------------------------------


def artin_schreier_solve(a, b, field: FiniteField | None = None) -> list[int]:
    """All z in F_q with a*z^p + b = z, via the F_p-linear map z -> z - a*z^p."""
    if isinstance(a, Elem):
        field, a = a.field, a.value
    if isinstance(b, Elem):
        b = b.value
    if field is None:
        raise ValueError("a field is required for integer-encoded inputs")
    n, p = field.n, field.p
    cols = []
    for j in range(n):
        basis = field.from_digits([1 if i == j else 0 for i in range(n)])
        cols.append(field.digits(field.sub(basis, field.mul(a, field.frobenius(basis, 1)))))
    mat = np.array(cols, dtype=np.int64).T
    sol = _fpx.solve_affine(mat, np.array(field.digits(b), dtype=np.int64), p)
    if sol is None:
        return []
    part, basis = sol
    points = [part]
    for v in basis:
        points = [(x + k * v) % p for x in points for k in range(p)]
    return sorted(int(field.vfrom_digits(x)) for x in points)


def torsor_coefficient(sm: SelfMap, a_bar) -> int:
    """phi~'(a_bar^p), the linear coefficient of the lifting torsor map."""
    field = sm.field
    if isinstance(a_bar, Elem):
        a_bar = a_bar.value
    w = field.pow(a_bar, sm.p)
    d = formal_derivative(sm.phi_tilde)
    den = d.den.eval(w)
    if field.is_zero(den):
        raise PoleAtPoint(f"phi~' has a pole at {w}")
    return field.div(d.num.eval(w), den)


__all__ = [
    "HiggsClass",
    "OrbitGraph",
    "SelfMap",
    "artin_schreier_solve",
    "build_selfmap",
    "closed_form",
    "functional_graph",
    "iterate",
    "orbit_graph",
    "periodic_points",
    "preperiod",
    "torsor_coefficient",
]
