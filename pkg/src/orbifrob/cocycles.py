"""Group 2-cocycles, nonabelian cocycles, twisted group rings.

The distinguished nontrivial S_n cocycle is produced from lifts to the
rational Clifford algebra on n generators with e_i^2 = 1: the lift of a
transposition (i j) is the vector e_i - e_j, the lift of sigma is the
ordered Clifford product over its canonical minimal factorization, and
the cocycle sign is read off from L(s)L(t) = 2^d * alpha(s,t) * L(st).
No square roots are needed because |s| + |t| - |st| is always even.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .exact import ONE, ZERO, format_rat, rat
from .symgroup import Permutation, all_permutations, minimal_factorization

import json


class GroupMismatch(Exception):
    pass


class BadUnitScaling(Exception):
    pass


class NotNormalizable(Exception):
    pass


class FiniteGroupTable:
    """A finite group as an explicit multiplication table.

    Elements are hashable labels; for symmetric groups they are
    Permutation objects (sorted by image tuple, identity first).
    Closure, identity and inverses are always verified; the full
    associativity sweep runs for explicitly supplied tables (the
    symmetric/cyclic constructors compose genuine functions, which are
    associative by construction).
    """

    def __init__(self, elements: Sequence, compose: Callable, check_assoc=False):
        self.elements = tuple(elements)
        self.order = len(self.elements)
        if self.order == 0:
            raise ValueError("empty group")
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != self.order:
            raise ValueError("duplicate elements")
        n = self.order
        self.mult = [[0] * n for _ in range(n)]
        for i, x in enumerate(self.elements):
            for j, y in enumerate(self.elements):
                z = compose(x, y)
                k = self.index.get(z)
                if k is None:
                    raise ValueError(f"not closed: {x} * {y} = {z}")
                self.mult[i][j] = k
        e = None
        for i in range(n):
            if all(self.mult[i][j] == j and self.mult[j][i] == j for j in range(n)):
                e = i
                break
        if e is None:
            raise ValueError("no identity element")
        self.e = e
        self.inv = [None] * n
        for i in range(n):
            for j in range(n):
                if self.mult[i][j] == e and self.mult[j][i] == e:
                    self.inv[i] = j
                    break
            if self.inv[i] is None:
                raise ValueError(f"no inverse for {self.elements[i]}")
        if check_assoc:
            for i in range(n):
                for j in range(n):
                    ij = self.mult[i][j]
                    for k in range(n):
                        if self.mult[ij][k] != self.mult[i][self.mult[j][k]]:
                            raise ValueError("multiplication table is not associative")
        self._classes = None

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroupTable":
        elems = sorted(all_permutations(n), key=lambda p: p.imgs)
        G = cls(elems, lambda a, b: a * b)
        G.sym_degree = n
        return G

    @classmethod
    def cyclic(cls, m: int) -> "FiniteGroupTable":
        return cls(tuple(range(m)), lambda a, b: (a + b) % m)

    @classmethod
    def from_table(cls, labels: Sequence[str], table: Sequence[Sequence[int]]) -> "FiniteGroupTable":
        labels = tuple(labels)
        idx = {x: i for i, x in enumerate(labels)}
        return cls(labels, lambda a, b: labels[table[idx[a]][idx[b]]], check_assoc=True)

    def is_symmetric_group(self) -> bool:
        return self.order > 0 and isinstance(self.elements[0], Permutation)

    def conj(self, gi: int, hi: int) -> int:
        """index of g h g^-1"""
        return self.mult[self.mult[gi][hi]][self.inv[gi]]

    def commutator(self, gi: int, hi: int) -> int:
        """index of g h g^-1 h^-1"""
        return self.mult[self.conj(gi, hi)][self.inv[hi]]

    def commute(self, gi: int, hi: int) -> bool:
        return self.mult[gi][hi] == self.mult[hi][gi]

    def conjugacy_classes(self) -> list[tuple[int, ...]]:
        if self._classes is None:
            seen = set()
            classes = []
            for i in range(self.order):
                if i in seen:
                    continue
                cls_ = sorted({self.conj(k, i) for k in range(self.order)})
                seen.update(cls_)
                classes.append(tuple(cls_))
            self._classes = classes
        return self._classes

    def generator_indices(self) -> list[int]:
        """A small generating set (whole group for explicit tables)."""
        if self.is_symmetric_group():
            n = self.elements[0].n
            if n < 2:
                return [self.e]
            gens = [Permutation.transposition(1, 2, n)]
            if n > 2:
                gens.append(Permutation.from_cycles([tuple(range(1, n + 1))], n))
            return [self.index[g] for g in gens]
        return list(range(self.order))

    def element_str(self, gi: int) -> str:
        x = self.elements[gi]
        return x.cycle_string() if isinstance(x, Permutation) else str(x)

    def parse_element(self, text: str) -> int:
        if self.is_symmetric_group():
            n = self.elements[0].n
            return self.index[Permutation.parse(text, n)]
        for i, x in enumerate(self.elements):
            if str(x) == text:
                return i
        raise KeyError(f"unknown group element {text!r}")

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteGroupTable(order={self.order})"


def _as_scale_list(group: FiniteGroupTable, lam) -> list[Fraction]:
    """Normalize a rescaling map to a per-index list; enforces lam_e = 1."""
    if isinstance(lam, Mapping):
        out = []
        for i, x in enumerate(group.elements):
            if x in lam:
                out.append(rat(lam[x]))
            elif i in lam:
                out.append(rat(lam[i]))
            else:
                out.append(ONE)
    else:
        out = [rat(v) for v in lam]
        if len(out) != group.order:
            raise ValueError("rescaling list has wrong length")
    if out[group.e] != 1:
        raise BadUnitScaling(f"lambda_e = {format_rat(out[group.e])} != 1")
    if any(v == 0 for v in out):
        raise BadUnitScaling("rescaling values must be nonzero")
    return out


class TwoCocycle:
    """alpha: G x G -> k* with alpha(g,h)alpha(gh,k) = alpha(g,hk)alpha(h,k)
    and alpha(g,e) = alpha(e,g) = 1."""

    def __init__(self, group: FiniteGroupTable, values, validate=True):
        self.group = group
        n = group.order
        self.values = [[rat(values[i][j]) for j in range(n)] for i in range(n)]
        if any(v == 0 for row in self.values for v in row):
            raise ValueError("cocycle values must be nonzero")
        e = group.e
        if any(self.values[e][j] != 1 or self.values[j][e] != 1 for j in range(n)):
            raise ValueError("cocycle not normalized at the identity")
        if validate:
            bad = self.cocycle_identity_violation()
            if bad is not None:
                raise ValueError(f"cocycle identity fails at {bad}")

    def cocycle_identity_violation(self):
        """First violating triple (as element strings) or None.

        Uses plain integers when every value is an integer of absolute
        value manageable, which keeps the |G|^3 sweep fast for S_5.
        """
        G = self.group
        n = G.order
        mult = G.mult
        if all(v.denominator == 1 for row in self.values for v in row):
            vals = [[int(v) for v in row] for row in self.values]
        else:
            vals = self.values
        for i in range(n):
            vi = vals[i]
            mi = mult[i]
            for j in range(n):
                a_ij = vi[j]
                ij = mi[j]
                v_ij = vals[ij]
                mj = mult[j]
                vj = vals[j]
                for k in range(n):
                    if a_ij * v_ij[k] != vi[mj[k]] * vj[k]:
                        return (G.element_str(i), G.element_str(j), G.element_str(k))
        return None

    def __call__(self, gi: int, hi: int) -> Fraction:
        return self.values[gi][hi]

    def epsilon(self, gi: int, hi: int) -> Fraction:
        """Conjugation coefficient alpha(g,h) / alpha(ghg^-1, g)."""
        G = self.group
        return self.values[gi][hi] / self.values[G.conj(gi, hi)][gi]

    @classmethod
    def trivial(cls, group: FiniteGroupTable) -> "TwoCocycle":
        return cls(group, [[ONE] * group.order for _ in range(group.order)],
                   validate=False)

    @classmethod
    def coboundary(cls, group: FiniteGroupTable, lam) -> "TwoCocycle":
        """delta(lambda)(g,h) = lambda_g lambda_h / lambda_gh."""
        lam = _as_scale_list(group, lam)
        n = group.order
        vals = [[lam[i] * lam[j] / lam[group.mult[i][j]] for j in range(n)]
                for i in range(n)]
        return cls(group, vals, validate=False)

    def product(self, other: "TwoCocycle") -> "TwoCocycle":
        if other.group is not self.group and other.group.mult != self.group.mult:
            raise GroupMismatch("cocycles on different groups")
        n = self.group.order
        return TwoCocycle(self.group,
                          [[self.values[i][j] * other.values[i][j] for j in range(n)]
                           for i in range(n)], validate=False)

    def inverse(self) -> "TwoCocycle":
        n = self.group.order
        return TwoCocycle(self.group,
                          [[ONE / self.values[i][j] for j in range(n)]
                           for i in range(n)], validate=False)

    def is_trivial(self) -> bool:
        return all(v == 1 for row in self.values for v in row)

    def commuting_transposition_class(self):
        """epsilon on a disjoint commuting transposition pair: the
        rational invariant of the cohomology class.  None when the
        group is not S_n with n >= 4."""
        G = self.group
        if not G.is_symmetric_group() or G.elements[0].n < 4:
            return None
        n = G.elements[0].n
        t1 = G.index[Permutation.transposition(1, 2, n)]
        t2 = G.index[Permutation.transposition(3, 4, n)]
        return self.epsilon(t1, t2)

    def to_json_dict(self) -> dict:
        G = self.group
        name = f"S{G.elements[0].n}" if G.is_symmetric_group() else "table"
        return {
            "group": name,
            "values": [[G.element_str(i), G.element_str(j), format_rat(v)]
                       for i, row in enumerate(self.values)
                       for j, v in enumerate(row) if v != 1],
        }


def epsilon_of(alpha: TwoCocycle):
    """The conjugation-coefficient function of a twisted group ring."""
    return alpha.epsilon


def epsilon_table(alpha: TwoCocycle) -> list[list[Fraction]]:
    n = alpha.group.order
    return [[alpha.epsilon(i, j) for j in range(n)] for i in range(n)]


# -- the Clifford-lift cocycle ----------------------------------------


def _clifford_mul(a: dict, b: dict) -> dict:
    # monomials are bitmasks over generators with e_i^2 = +1;
    # sign counts transpositions needed to merge the index sets
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            total = 0
            t = mb
            while t:
                low = t & (-t)
                total += bin(ma >> low.bit_length()).count("1")
                t ^= low
            key = ma ^ mb
            val = -ca * cb if total & 1 else ca * cb
            s = out.get(key, 0) + val
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _clifford_lift(s: Permutation) -> dict:
    out = {0: 1}
    for t in minimal_factorization(s):
        i, j = [p for p in range(1, s.n + 1) if t(p) != p]
        out = _clifford_mul(out, {1 << (i - 1): 1, 1 << (j - 1): -1})
    return out


def schur_cocycle_sn(n: int, validate=True, group: FiniteGroupTable = None) -> TwoCocycle:
    """The S_n 2-cocycle of the Clifford/Pin lift construction.

    alpha(t, t) = 1 on every transposition and epsilon(t, t') = -1 on
    disjoint commuting transpositions, so the class is the nontrivial
    one for n >= 4.  For n <= 3 the same table is still a valid cocycle
    but may be a coboundary (the Schur multiplier is trivial there).
    """
    if n < 2:
        raise ValueError("need n >= 2")
    G = group if group is not None else FiniteGroupTable.symmetric(n)
    if not (G.is_symmetric_group() and G.elements[0].n == n):
        raise GroupMismatch(f"group is not S_{n}")
    lifts = [_clifford_lift(s) for s in G.elements]
    order = G.order
    vals = [[ONE] * order for _ in range(order)]
    for i in range(order):
        li = lifts[i]
        for j in range(order):
            prod = _clifford_mul(li, lifts[j])
            target = lifts[G.mult[i][j]]
            key = next(iter(target))
            ratio = Fraction(prod[key], target[key])
            if prod != {m: ratio * c for m, c in target.items()}:
                raise AssertionError("Clifford product is not proportional to the lift")
            sign = 1 if ratio > 0 else -1
            if abs(ratio) != 1 and (abs(ratio).numerator & (abs(ratio).numerator - 1)):
                raise AssertionError(f"unexpected lift ratio {ratio}")
            vals[i][j] = rat(sign)
    return TwoCocycle(G, vals, validate=validate)


def length_defect_sign_cocycle(group: FiniteGroupTable, validate=True) -> TwoCocycle:
    """alpha(g,h) = (-1)^((|g|+|h|-|gh|)/2) on S_n.

    This is the unique normalized S_n cocycle with alpha(t,t) = -1 on
    transpositions (alpha(s,t) = 1 on every transversal pair); its
    epsilon is identically 1, so the class invariant on commuting
    pairs is trivial even though the table is a genuine sign twist.
    """
    if not group.is_symmetric_group():
        raise GroupMismatch("needs a symmetric group")
    lengths = [s.n - len(s.cycles(include_fixed=True)) for s in group.elements]
    order = group.order
    vals = [[ONE] * order for _ in range(order)]
    for i in range(order):
        for j in range(order):
            d2 = lengths[i] + lengths[j] - lengths[group.mult[i][j]]
            vals[i][j] = rat(-1 if (d2 // 2) % 2 else 1)
    return TwoCocycle(group, vals, validate=validate)


# -- nonabelian cocycles ----------------------------------------------


class NonabelianCocycle:
    """phi: G x G -> k* with phi(gh, k) = phi(g, hkh^-1) phi(h, k)."""

    def __init__(self, group: FiniteGroupTable, values, validate=True):
        self.group = group
        n = group.order
        self.values = [[rat(values[i][j]) for j in range(n)] for i in range(n)]
        if any(v == 0 for row in self.values for v in row):
            raise ValueError("values must be nonzero")
        e = group.e
        if any(self.values[e][j] != 1 or self.values[j][e] != 1 for j in range(n)):
            raise ValueError("not normalized at the identity")
        if validate:
            bad = self.identity_violation()
            if bad is not None:
                raise ValueError(f"nonabelian cocycle identity fails at {bad}")

    def identity_violation(self):
        G = self.group
        n = G.order
        for i in range(n):
            for j in range(n):
                ij = G.mult[i][j]
                for k in range(n):
                    if self.values[ij][k] != self.values[i][G.conj(j, k)] * self.values[j][k]:
                        return (G.element_str(i), G.element_str(j), G.element_str(k))
        return None

    def __call__(self, gi: int, hi: int) -> Fraction:
        return self.values[gi][hi]

    @classmethod
    def from_two_cocycle(cls, alpha: TwoCocycle) -> "NonabelianCocycle":
        n = alpha.group.order
        return cls(alpha.group,
                   [[alpha.epsilon(i, j) for j in range(n)] for i in range(n)],
                   validate=False)

    @classmethod
    def parity_cocycle(cls, group: FiniteGroupTable, p: int) -> "NonabelianCocycle":
        """phi(s,t) = (-1)^(p|s||t|) on a symmetric group."""
        if not group.is_symmetric_group():
            raise GroupMismatch("needs a symmetric group")
        lengths = [s.n - len(s.cycles(include_fixed=True)) for s in group.elements]
        n = group.order
        vals = [[rat(-1 if p and (lengths[i] * lengths[j]) % 2 else 1)
                 for j in range(n)] for i in range(n)]
        return cls(group, vals, validate=False)


class SuperGrading:
    """A homomorphism G -> Z/2Z given as a bit per element."""

    def __init__(self, group: FiniteGroupTable, bits):
        self.group = group
        self.bits = tuple(int(b) % 2 for b in bits)
        if len(self.bits) != group.order:
            raise ValueError("wrong length")
        for i in range(group.order):
            for j in range(group.order):
                if self.bits[group.mult[i][j]] != (self.bits[i] + self.bits[j]) % 2:
                    raise ValueError("not a homomorphism to Z/2Z")

    def __call__(self, gi: int) -> int:
        return self.bits[gi]

    @classmethod
    def trivial(cls, group: FiniteGroupTable) -> "SuperGrading":
        return cls(group, [0] * group.order)

    @classmethod
    def sign_grading(cls, group: FiniteGroupTable) -> "SuperGrading":
        """|sigma| mod 2 on a symmetric group."""
        if not group.is_symmetric_group():
            raise GroupMismatch("needs a symmetric group")
        return cls(group, [(s.n - len(s.cycles(include_fixed=True))) % 2
                           for s in group.elements])

    @classmethod
    def parity_grading(cls, group: FiniteGroupTable, p: int) -> "SuperGrading":
        if p % 2 == 0:
            return cls.trivial(group)
        return cls.sign_grading(group)


def rescale_pair(gamma, phi: NonabelianCocycle, lam):
    """Rescale a (gamma, phi) pair by generators 1_g -> lambda_g 1_g:

        gamma(g,h) -> lambda_g lambda_h / lambda_gh * gamma(g,h)
        phi(g,h)   -> lambda_h / lambda_(ghg^-1) * phi(g,h)

    gamma may be a TwoCocycle or any dict {(gi,hi): value} whose values
    support multiplication by a Fraction.  Raises BadUnitScaling when
    lambda_e != 1.
    """
    group = phi.group
    lam = _as_scale_list(group, lam)
    n = group.order
    if isinstance(gamma, TwoCocycle):
        if gamma.group is not group:
            raise GroupMismatch("gamma and phi on different groups")
        gvals = [[lam[i] * lam[j] / lam[group.mult[i][j]] * gamma.values[i][j]
                  for j in range(n)] for i in range(n)]
        new_gamma = TwoCocycle(group, gvals, validate=False)
    else:
        new_gamma = {}
        for (i, j), val in gamma.items():
            c = lam[i] * lam[j] / lam[group.mult[i][j]]
            if isinstance(val, (int, Fraction)):
                new_gamma[(i, j)] = c * rat(val)
            else:
                new_gamma[(i, j)] = tuple(c * x for x in val)
    pvals = [[lam[j] / lam[group.conj(i, j)] * phi.values[i][j]
              for j in range(n)] for i in range(n)]
    return new_gamma, NonabelianCocycle(group, pvals, validate=False)


def _transposition_indices(group: FiniteGroupTable) -> list[int]:
    return [i for i, s in enumerate(group.elements)
            if isinstance(s, Permutation) and len(s.cycles()) == 1
            and len(s.cycles()[0]) == 2]


def normalize_nonabelian_sn(phi: NonabelianCocycle):
    """Rescale an S_n nonabelian cocycle to phi(s,t) = (-1)^(p|s||t|).

    The parity p is read off phi(t,t) on transpositions; the input must
    be normalizable (phi(t,t') equal to the same (-1)^p on disjoint
    commuting transpositions).  The rescaling is solved class by class:
    within each conjugacy class the required lambda ratios are
    propagated from the minimal representative, generalizing the staged
    transposition rescaling of the inductive normalization proof.

    Returns (lambda list by element index, normalized phi, parity p).
    """
    G = phi.group
    if not G.is_symmetric_group():
        raise GroupMismatch("needs a symmetric group")
    n = G.elements[0].n
    taus = _transposition_indices(G)
    pvals = {phi(t, t) for t in taus}
    if len(pvals) > 1 or (pvals and pvals.pop() not in (1, -1)):
        raise NotNormalizable(f"phi(t,t) is not a constant sign: "
                              f"{sorted(format_rat(phi(t, t)) for t in taus)}")
    p = 0 if not taus or phi(taus[0], taus[0]) == 1 else 1
    for t1 in taus:
        for t2 in taus:
            if t1 != t2 and G.commute(t1, t2):
                if phi(t1, t2) != phi(taus[0], taus[0]):
                    raise NotNormalizable(
                        f"phi({G.element_str(t1)},{G.element_str(t2)}) = "
                        f"{format_rat(phi(t1, t2))} differs from phi(t,t)")
    target = NonabelianCocycle.parity_cocycle(G, p)
    lam = [None] * G.order
    lam[G.e] = ONE
    for cls_ in G.conjugacy_classes():
        rep = cls_[0]
        if lam[rep] is None:
            lam[rep] = ONE
        # propagate lambda_(ghg^-1) = lambda_h * phi(g,h) / target(g,h)
        frontier = [rep]
        while frontier:
            nxt = []
            for h in frontier:
                for g in range(G.order):
                    c = G.conj(g, h)
                    val = lam[h] * phi(g, h) / target(g, h)
                    if lam[c] is None:
                        lam[c] = val
                        nxt.append(c)
                    elif lam[c] != val:
                        raise NotNormalizable(
                            f"inconsistent rescaling on the class of "
                            f"{G.element_str(rep)} at {G.element_str(c)}")
            frontier = nxt
    _, normalized = rescale_pair({}, phi, lam)
    if normalized.values != target.values:
        raise NotNormalizable("rescaled cocycle does not reach the parity form")
    return lam, normalized, p


def twisted_group_ring(group: FiniteGroupTable, alpha: TwoCocycle = None,
                       sigma: SuperGrading = None):
    """The twisted group ring as a G-Frobenius algebra with 1-dim sectors:

        mult(g,h) = alpha(g,h)          eta(g, g^-1) = alpha(g, g^-1)
        chi_g = (-1)^sigma(g)           phi(g,h) = (-1)^(sigma(g)sigma(h)) eps(g,h)
    """
    from .gfrob import GFrobeniusAlgebra

    if alpha is None:
        alpha = TwoCocycle.trivial(group)
    if sigma is None:
        sigma = SuperGrading.trivial(group)
    if (alpha.group is not group and alpha.group.mult != group.mult) \
            or (sigma.group is not group and sigma.group.mult != group.mult):
        raise GroupMismatch("alpha/sigma on a different group")
    n = group.order
    sector_labels = [(group.element_str(i),) for i in range(n)]
    sector_degrees = [(ZERO,) for _ in range(n)]
    sector_parity = [sigma(i) for i in range(n)]
    mult = {}
    for i in range(n):
        for j in range(n):
            mult[(i, j)] = {(0, 0): {0: alpha(i, j)}}
    action = {}
    for i in range(n):
        for j in range(n):
            val = alpha.epsilon(i, j)
            if sigma(i) and sigma(j):
                val = -val
            action[(i, j)] = ((val,),)
    chi = [rat(-1 if sigma(i) else 1) for i in range(n)]
    metric = [((alpha(i, group.inv[i]),),) for i in range(n)]
    zero = [ZERO] * n
    name = "k[G]"
    if not alpha.is_trivial():
        name = "k^a[G]"
    if any(sigma.bits):
        name += "^super"
    return GFrobeniusAlgebra(
        group=group, name=name, sector_labels=sector_labels,
        sector_degrees=sector_degrees, sector_parity=sector_parity,
        unit=(ONE,), chi=chi, mult=mult, action=action, metric=metric,
        s=list(zero), s_plus=list(zero), s_minus=list(zero))


def cocycle_to_json(alpha: TwoCocycle, path=None) -> str:
    text = json.dumps(alpha.to_json_dict(), indent=1, sort_keys=True) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def cocycle_from_json_dict(data: dict, group: FiniteGroupTable = None) -> TwoCocycle:
    if group is None:
        name = data.get("group", "")
        if not (isinstance(name, str) and name.startswith("S") and name[1:].isdigit()):
            raise ValueError(f"cannot infer group from {data.get('group')!r}")
        group = FiniteGroupTable.symmetric(int(name[1:]))
    n = group.order
    vals = [[ONE] * n for _ in range(n)]
    for row in data["values"]:
        g, h, v = row
        vals[group.parse_element(g)][group.parse_element(h)] = rat(v)
    return TwoCocycle(group, vals)
