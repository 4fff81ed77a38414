"""Finite-dimensional graded Frobenius algebras over Q.

An algebra is given by structure constants on a named basis, a unit
vector, a bilinear form eta and rational degrees.  The comultiplication
is the metric adjoint of the multiplication and is computed exactly
from the inverse of eta; the Euler class is mult(comult(1)).

Derived data (pair product table, eta inverse, dual basis, the
comultiplication tensor and the Euler class) is computed eagerly at
construction, so instances are immutable afterwards and safe to share.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction

from .exact import (ZERO, ONE, BilinearForm, DegenerateForm, SparseTensor,
                    format_rat, invert, rat, vec)
from .reports import CheckReport


class ParentMismatch(Exception):
    pass


class NotIsolated(Exception):
    pass


class AlgebraFormatError(Exception):
    """Raised on malformed algebra files; carries a field diagnostic."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


def _sparse_vec(pairs):
    return {k: v for k, v in pairs if v != 0}


class FrobeniusAlgebra:
    def __init__(self, name, labels, mult, unit, metric, degrees,
                 parity=None, check=True):
        self.name = str(name)
        self.labels = tuple(str(x) for x in labels)
        self.dim = len(self.labels)
        if isinstance(mult, SparseTensor):
            if mult.shape != (self.dim,) * 3:
                raise AlgebraFormatError("mult", f"shape {mult.shape} != {(self.dim,)*3}")
            self.mult = mult
        else:
            self.mult = SparseTensor((self.dim,) * 3, mult)
        self.unit = vec(unit)
        if len(self.unit) != self.dim:
            raise AlgebraFormatError("unit", "wrong length")
        self.metric = metric if isinstance(metric, BilinearForm) else BilinearForm(metric)
        if self.metric.dim != self.dim:
            raise AlgebraFormatError("metric", "wrong dimension")
        self.degrees = vec(degrees)
        if len(self.degrees) != self.dim:
            raise AlgebraFormatError("degrees", "wrong length")
        self.parity = tuple(int(p) % 2 for p in (parity if parity is not None
                                                 else [0] * self.dim))
        if len(self.parity) != self.dim:
            raise AlgebraFormatError("parity", "wrong length")

        # pair product table: (i, j) -> dict k -> coefficient
        table: dict = {}
        for (i, j, k), val in self.mult.entries.items():
            table.setdefault((i, j), {})[k] = val
        self._pairs = table

        self.top_degree = self._eta_degree()

        if check:
            report = verify_frobenius(self)
            if not report.ok:
                bad = report.first_failure()
                raise AlgebraFormatError(bad.name, f"invariant failed: {bad.witness}")

        self._eta_inv = None
        self._dual = None
        self.comult = None
        self._euler = None
        if self.metric.is_nondegenerate():
            self._eta_inv = invert(self.metric.rows)
            self._dual = [tuple(self._eta_inv[i][j] for i in range(self.dim))
                          for j in range(self.dim)]
            self.comult = self._comult_tensor()
            self._euler = self._euler_coords()

    # -- basic queries ------------------------------------------------

    def element(self, coords) -> "AlgebraElement":
        return AlgebraElement(self, coords)

    def basis_element(self, i: int) -> "AlgebraElement":
        coords = [ZERO] * self.dim
        coords[i] = ONE
        return AlgebraElement(self, coords)

    @property
    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, self.unit)

    def mult_coords(self, a, b) -> tuple:
        out = [ZERO] * self.dim
        pairs = self._pairs
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y == 0:
                    continue
                row = pairs.get((i, j))
                if row:
                    xy = x * y
                    for k, c in row.items():
                        out[k] += xy * c
        return tuple(out)

    def basis_product(self, i: int, j: int) -> dict:
        return self._pairs.get((i, j), {})

    def pairing_coords(self, a, b) -> Fraction:
        return self.metric.apply(a, b)

    def counit_coords(self, a) -> Fraction:
        return self.metric.apply(a, self.unit)

    def degree_of(self, coords):
        """Common degree of the support, or None for 0 / inhomogeneous."""
        degs = {self.degrees[i] for i, x in enumerate(coords) if x != 0}
        if len(degs) == 1:
            return degs.pop()
        return None

    def dual_basis_vector(self, j: int) -> tuple:
        if self._dual is None:
            raise DegenerateForm("metric is degenerate")
        return self._dual[j]

    def _eta_degree(self):
        degs = {self.degrees[i] + self.degrees[j]
                for (i, row) in enumerate(self.metric.rows)
                for (j, v) in enumerate(row) if v != 0}
        if len(degs) == 1:
            return degs.pop()
        return None

    def rho(self) -> tuple:
        """Metric dual of the unit: the unique rho with
        eta(x, rho) = phi1(x), phi1 the projection onto k*1.

        Needs a graded-connected algebra (degree 0 spanned by the unit).
        """
        if self._eta_inv is None:
            raise DegenerateForm("metric is degenerate")
        if not self.is_graded_connected():
            raise NotIsolated("rho needs a graded-connected algebra")
        u = next(i for i in range(self.dim)
                 if self.degrees[i] == 0 and self.unit[i] != 0)
        phi1 = [ZERO] * self.dim
        phi1[u] = ONE / self.unit[u]
        # solve eta(e_i, rho) = phi1(e_i)
        return tuple(sum(self._eta_inv[j][i] * phi1[i] for i in range(self.dim))
                     for j in range(self.dim))

    def is_graded_connected(self) -> bool:
        zero_deg = [i for i in range((self.dim)) if self.degrees[i] == 0]
        if len(zero_deg) != 1:
            return False
        i = zero_deg[0]
        return self.unit[i] != 0 and all(self.unit[j] == 0 for j in range(self.dim)
                                         if j != i)

    def is_commutative(self) -> bool:
        for (i, j), row in self._pairs.items():
            if self.basis_product(j, i) != row:
                return False
        return True

    def is_purely_even(self) -> bool:
        return all(p == 0 for p in self.parity)

    # -- comultiplication and Euler class -----------------------------

    def _comult_tensor(self) -> SparseTensor:
        # adjoint of mult: D[i,j,k] = sum_{b,c} etainv[j][b] etainv[k][c] eta(e_i, e_b e_c)
        inv = self._eta_inv
        eta = self.metric.rows
        entries = {}
        for (b, c), row in self._pairs.items():
            for m, coeff in row.items():
                for i in range(self.dim):
                    w = eta[i][m] * coeff
                    if w == 0:
                        continue
                    for j in range(self.dim):
                        vj = inv[j][b]
                        if vj == 0:
                            continue
                        for k in range(self.dim):
                            vk = inv[k][c]
                            if vk == 0:
                                continue
                            key = (i, j, k)
                            s = entries.get(key, ZERO) + w * vj * vk
                            if s == 0:
                                entries.pop(key, None)
                            else:
                                entries[key] = s
        return SparseTensor((self.dim,) * 3, entries)

    def comult_coords(self, a) -> dict:
        """Delta(a) as a sparse dict (j, k) -> coefficient in A (x) A."""
        if self.comult is None:
            raise DegenerateForm("metric is degenerate")
        out = {}
        for (i, j, k), val in self.comult.entries.items():
            x = a[i]
            if x == 0:
                continue
            s = out.get((j, k), ZERO) + x * val
            if s == 0:
                out.pop((j, k), None)
            else:
                out[(j, k)] = s
        return out

    def euler_coords(self) -> tuple:
        if self._euler is None:
            raise DegenerateForm("metric is degenerate")
        return self._euler

    def _euler_coords(self) -> tuple:
        out = [ZERO] * self.dim
        for (j, k), val in self.comult_coords(self.unit).items():
            row = self.basis_product(j, k)
            for m, c in row.items():
                out[m] += val * c
        return tuple(out)

    def euler_class(self) -> "AlgebraElement":
        return AlgebraElement(self, self.euler_coords())

    def __repr__(self):
        return f"FrobeniusAlgebra({self.name!r}, dim={self.dim})"


class AlgebraElement:
    __slots__ = ("parent", "coords")

    def __init__(self, parent: FrobeniusAlgebra, coords):
        self.parent = parent
        self.coords = vec(coords)
        if len(self.coords) != parent.dim:
            raise ParentMismatch(f"coordinate length {len(self.coords)} != dim {parent.dim}")

    def _check(self, other):
        if not isinstance(other, AlgebraElement) or other.parent is not self.parent:
            raise ParentMismatch("elements of different algebras")

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__rmul__(other)
        self._check(other)
        return AlgebraElement(self.parent, self.parent.mult_coords(self.coords, other.coords))

    def __rmul__(self, c):
        c = rat(c)
        return AlgebraElement(self.parent, tuple(c * x for x in self.coords))

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.parent, tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.parent, tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self):
        return AlgebraElement(self.parent, tuple(-x for x in self.coords))

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement) and other.parent is self.parent
                and other.coords == self.coords)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)

    def pairing(self, other) -> Fraction:
        self._check(other)
        return self.parent.pairing_coords(self.coords, other.coords)

    def counit(self) -> Fraction:
        return self.parent.counit_coords(self.coords)

    def comultiply(self) -> dict:
        return self.parent.comult_coords(self.coords)

    def degree(self):
        return self.parent.degree_of(self.coords)

    def __repr__(self):
        parts = []
        for i, x in enumerate(self.coords):
            if x != 0:
                parts.append(f"{format_rat(x)}*{self.parent.labels[i]}")
        return " + ".join(parts) if parts else "0"


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b


def pairing(a: AlgebraElement, b: AlgebraElement) -> Fraction:
    return a.pairing(b)


def counit(a: AlgebraElement) -> Fraction:
    return a.counit()


def comultiply(a: AlgebraElement) -> dict:
    return a.comultiply()


def euler_class(A: FrobeniusAlgebra) -> AlgebraElement:
    return A.euler_class()


# -- constructors -----------------------------------------------------


def point_algebra(pairing_value=1) -> FrobeniusAlgebra:
    """The ground field as a Frobenius algebra, eta(1,1) as given."""
    return FrobeniusAlgebra("pt", ["1"], [((0, 0, 0), ONE)], [ONE],
                            [[rat(pairing_value)]], [ZERO])


def zn_algebra(mu: int) -> FrobeniusAlgebra:
    """k[z]/(z^mu) with unit antidiagonal metric eta(z^i, z^(mu-1-i)) = 1.

    This is the standard graded nilpotent algebra (the Milnor ring of
    z^(mu+1) up to a scalar on the metric).
    """
    if mu < 1:
        raise ValueError("mu must be >= 1")
    labels = ["1"] + [f"z^{i}" if i > 1 else "z" for i in range(1, mu)]
    mult = [((i, j, i + j), ONE) for i in range(mu) for j in range(mu) if i + j < mu]
    metric = [[ONE if i + j == mu - 1 else ZERO for j in range(mu)] for i in range(mu)]
    return FrobeniusAlgebra(f"z{mu}", labels, mult, [ONE] + [ZERO] * (mu - 1),
                            metric, list(range(mu)))


def milnor_univariate(f_coeffs) -> FrobeniusAlgebra:
    """Local Milnor ring k[z]/(f') of a one-variable polynomial at 0.

    f_coeffs lists the coefficients of f in increasing degree.  Writing
    f' = z^mu * u(z) with u(0) = c != 0, the quotient is k[z]/(z^mu)
    with basis 1..z^(mu-1), deg z^i = i, and the residue-normalized
    metric eta(z^i, z^j) = 1/c when i + j = mu - 1.

    Raises NotIsolated when f' vanishes identically or f'(0) != 0
    (no isolated critical point at the origin).
    """
    f = [rat(x) for x in f_coeffs]
    deriv = [k * f[k] for k in range(1, len(f))]
    while deriv and deriv[-1] == 0:
        deriv.pop()
    if not deriv:
        raise NotIsolated("f' vanishes identically; quotient is not finite")
    if deriv[0] != 0:
        raise NotIsolated("f'(0) != 0: no critical point at the origin")
    mu = next(k for k, c in enumerate(deriv) if c != 0)
    lead = deriv[mu]
    labels = ["1"] + [f"z^{i}" if i > 1 else "z" for i in range(1, mu)]
    mult = [((i, j, i + j), ONE) for i in range(mu) for j in range(mu) if i + j < mu]
    metric = [[ONE / lead if i + j == mu - 1 else ZERO for j in range(mu)]
              for i in range(mu)]
    return FrobeniusAlgebra(f"milnor_mu{mu}", labels, mult,
                            [ONE] + [ZERO] * (mu - 1), metric, list(range(mu)))


def tensor_power(A: FrobeniusAlgebra, n: int) -> FrobeniusAlgebra:
    """n-fold tensor power with lexicographic multi-index basis.

    Degrees add, parities add mod 2, metric and multiplication are the
    factorwise products.  n = 0 gives the ground field.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return point_algebra()
    d = A.dim
    indices = list(itertools.product(range(d), repeat=n))
    flat = {idx: pos for pos, idx in enumerate(indices)}
    labels = ["⊗".join(A.labels[i] for i in idx) for idx in indices]
    degrees = [sum((A.degrees[i] for i in idx), ZERO) for idx in indices]
    parity = [sum(A.parity[i] for i in idx) % 2 for idx in indices]
    unit_idx = tuple([i for i, x in enumerate(A.unit) if x != 0][0] for _ in range(n))
    # the unit of every algebra we build is supported on one basis vector
    unit = [ZERO] * len(indices)
    u_sup = [i for i, x in enumerate(A.unit) if x != 0]
    if len(u_sup) == 1:
        unit[flat[unit_idx]] = A.unit[u_sup[0]] ** n
    else:
        raise ValueError("tensor_power needs a unit supported on one basis vector")
    mult_entries = {}
    for ai in indices:
        for bi in indices:
            term = {(): ONE}
            for x, y in zip(ai, bi):
                row = A.basis_product(x, y)
                if not row:
                    term = {}
                    break
                term = {key + (k,): cv * c for key, cv in term.items()
                        for k, c in row.items()}
            for key, cv in term.items():
                mult_entries[(flat[ai], flat[bi], flat[key])] = cv
    metric = [[ZERO] * len(indices) for _ in indices]
    for ai in indices:
        for bi in indices:
            v = ONE
            for x, y in zip(ai, bi):
                v *= A.metric(x, y)
                if v == 0:
                    break
            if v != 0:
                metric[flat[ai]][flat[bi]] = v
    return FrobeniusAlgebra(f"{A.name}^⊗{n}", labels, mult_entries, unit,
                            metric, degrees, parity, check=False)


# -- verification -----------------------------------------------------


def verify_frobenius(A: FrobeniusAlgebra) -> CheckReport:
    """Check the ordinary Frobenius axioms exactly over the whole basis.

    Failures carry a witness naming the offending basis indices.
    """
    rep = CheckReport(f"frobenius axioms for {A.name}")
    d = A.dim

    def basis_vec(i):
        return tuple(ONE if j == i else ZERO for j in range(d))

    witness = None
    for i in range(d):
        for j in range(d):
            left = A.basis_product(i, j)
            for k in range(d):
                lhs = {}
                for m, c in left.items():
                    for l, c2 in A.basis_product(m, k).items():
                        lhs[l] = lhs.get(l, ZERO) + c * c2
                rhs = {}
                for m, c in A.basis_product(j, k).items():
                    for l, c2 in A.basis_product(i, m).items():
                        rhs[l] = rhs.get(l, ZERO) + c * c2
                lhs = {k2: v for k2, v in lhs.items() if v != 0}
                rhs = {k2: v for k2, v in rhs.items() if v != 0}
                if lhs != rhs:
                    witness = {"basis": [A.labels[i], A.labels[j], A.labels[k]],
                               "indices": [i, j, k]}
                    break
            if witness:
                break
        if witness:
            break
    rep.add("associativity", witness is None, witness)

    bad = None
    for i in range(d):
        b = basis_vec(i)
        if A.mult_coords(A.unit, b) != b or A.mult_coords(b, A.unit) != b:
            bad = {"basis": A.labels[i], "index": i}
            break
    rep.add("unit_laws", bad is None, bad)

    bad = None
    for i in range(d):
        for j in range(d):
            ij = A.basis_product(i, j)
            for k in range(d):
                lhs = sum((c * A.metric(m, k) for m, c in ij.items()), ZERO)
                rhs = sum((c * A.metric(i, m) for m, c in A.basis_product(j, k).items()),
                          ZERO)
                if lhs != rhs:
                    bad = {"indices": [i, j, k],
                           "lhs": format_rat(lhs), "rhs": format_rat(rhs)}
                    break
            if bad:
                break
        if bad:
            break
    rep.add("metric_invariance", bad is None, bad)

    rep.add("metric_nondegenerate", A.metric.is_nondegenerate(),
            None if A.metric.is_nondegenerate() else {"rank": A.metric.rank, "dim": d})

    degs = {}
    for i in range(d):
        for j in range(d):
            if A.metric(i, j) != 0:
                degs.setdefault(A.degrees[i] + A.degrees[j], (i, j))
    hom = len(degs) <= 1
    rep.add("metric_homogeneous", hom,
            None if hom else {"degrees": sorted(format_rat(x) for x in degs)})

    bad = None
    for (i, j, k), val in A.mult.entries.items():
        if A.degrees[k] != A.degrees[i] + A.degrees[j]:
            bad = {"indices": [i, j, k], "value": format_rat(val)}
            break
    rep.add("mult_respects_degrees", bad is None, bad)

    bad = None
    for (i, j, k), val in A.mult.entries.items():
        if A.parity[k] != (A.parity[i] + A.parity[j]) % 2:
            bad = {"indices": [i, j, k]}
            break
    rep.add("mult_respects_parity", bad is None, bad)

    return rep


# -- serialization ----------------------------------------------------


def to_json_dict(A: FrobeniusAlgebra) -> dict:
    return {
        "name": A.name,
        "dim": A.dim,
        "labels": list(A.labels),
        "degrees": [format_rat(x) for x in A.degrees],
        "unit": [format_rat(x) for x in A.unit],
        "mult": [[i, j, k, format_rat(v)] for (i, j, k), v in sorted(A.mult.entries.items())],
        "metric": [[i, j, format_rat(A.metric(i, j))]
                   for i in range(A.dim) for j in range(A.dim) if A.metric(i, j) != 0],
        "parity": list(A.parity),
    }


def from_json_dict(data: dict, check=True) -> FrobeniusAlgebra:
    if not isinstance(data, dict):
        raise AlgebraFormatError("$", "algebra file must be a JSON object")
    for field in ("name", "dim", "labels", "degrees", "unit", "mult", "metric"):
        if field not in data:
            raise AlgebraFormatError(field, "missing required field")
    dim = data["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise AlgebraFormatError("dim", f"must be a positive integer, got {dim!r}")
    if len(data["labels"]) != dim:
        raise AlgebraFormatError("labels", f"expected {dim} labels")

    def _rat(field, s):
        try:
            return rat(s)
        except (ValueError, TypeError) as err:
            raise AlgebraFormatError(field, str(err)) from None

    degrees = [_rat(f"degrees[{i}]", s) for i, s in enumerate(data["degrees"])]
    unit = [_rat(f"unit[{i}]", s) for i, s in enumerate(data["unit"])]
    mult = {}
    for pos, row in enumerate(data["mult"]):
        if len(row) != 4:
            raise AlgebraFormatError(f"mult[{pos}]", "expected [i, j, k, value]")
        i, j, k = row[:3]
        for x in (i, j, k):
            if not isinstance(x, int) or not 0 <= x < dim:
                raise AlgebraFormatError(f"mult[{pos}]", f"index {x!r} out of range")
        if (i, j, k) in mult:
            raise AlgebraFormatError(f"mult[{pos}]", f"duplicate entry ({i},{j},{k})")
        mult[(i, j, k)] = _rat(f"mult[{pos}]", row[3])
    metric = [[ZERO] * dim for _ in range(dim)]
    seen = set()
    for pos, row in enumerate(data["metric"]):
        if len(row) != 3:
            raise AlgebraFormatError(f"metric[{pos}]", "expected [i, j, value]")
        i, j = row[:2]
        for x in (i, j):
            if not isinstance(x, int) or not 0 <= x < dim:
                raise AlgebraFormatError(f"metric[{pos}]", f"index {x!r} out of range")
        if (i, j) in seen:
            raise AlgebraFormatError(f"metric[{pos}]", f"duplicate entry ({i},{j})")
        seen.add((i, j))
        metric[i][j] = _rat(f"metric[{pos}]", row[2])
    parity = data.get("parity", [0] * dim)
    if len(parity) != dim or any(p not in (0, 1) for p in parity):
        raise AlgebraFormatError("parity", "expected a list of 0/1 of length dim")
    try:
        return FrobeniusAlgebra(data["name"], data["labels"], mult, unit, metric,
                                degrees, parity, check=check)
    except AlgebraFormatError:
        raise
    except Exception as err:
        raise AlgebraFormatError("$", str(err)) from None


def save_algebra(A: FrobeniusAlgebra, path):
    with open(path, "w") as fh:
        json.dump(to_json_dict(A), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_algebra(path, check=True) -> FrobeniusAlgebra:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as err:
            raise AlgebraFormatError(f"line {err.lineno}", err.msg) from None
    return from_json_dict(data, check=check)
