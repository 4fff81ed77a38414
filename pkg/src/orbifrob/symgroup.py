"""Symmetric-group combinatorics: cycles, orbits, transversality, defects.

Composition convention, fixed once for the whole package: the product
``s * t`` applies ``t`` first and then ``s``.  Points are 1-based in
all notation and serialization ("(1 2)(3 4)"); internally a permutation
stores the tuple of images of 1..n.
"""

from __future__ import annotations

import itertools
import re
from typing import Iterable, Sequence


class SizeMismatch(Exception):
    pass


class NotAJointOrbit(Exception):
    pass


class Permutation:
    __slots__ = ("n", "imgs")

    def __init__(self, images: Sequence[int]):
        imgs = tuple(int(x) for x in images)
        n = len(imgs)
        if sorted(imgs) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {imgs}")
        self.n = n
        self.imgs = imgs

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, i: int, j: int, n: int) -> "Permutation":
        if i == j or not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"bad transposition ({i} {j}) in S_{n}")
        imgs = list(range(1, n + 1))
        imgs[i - 1], imgs[j - 1] = j, i
        return cls(imgs)

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "Permutation":
        imgs = list(range(1, n + 1))
        for cyc in cycles:
            cyc = list(cyc)
            if len(set(cyc)) != len(cyc):
                raise ValueError(f"repeated point in cycle {cyc}")
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                if not 1 <= a <= n:
                    raise ValueError(f"point {a} outside 1..{n}")
                imgs[a - 1] = b
        return cls(imgs)

    @classmethod
    def parse(cls, text: str, n: int) -> "Permutation":
        """Accepts cycle notation "(1 2)(3 4)" (commas also allowed),
        "()" / "e" for the identity, or an image list "[2,1,3]"."""
        text = text.strip()
        if text in ("()", "e", ""):
            return cls.identity(n)
        if text.startswith("["):
            parts = [p for p in re.split(r"[\[\],\s]+", text) if p]
            return cls([int(p) for p in parts])
        if not re.fullmatch(r"(\(\s*\d+(?:[,\s]+\d+)*\s*\))+", text):
            raise ValueError(f"cannot parse permutation {text!r}")
        cycles = []
        for group in re.findall(r"\(([^()]*)\)", text):
            pts = [int(p) for p in re.split(r"[,\s]+", group.strip()) if p]
            if pts:
                cycles.append(pts)
        return cls.from_cycles(cycles, n)

    def __call__(self, i: int) -> int:
        return self.imgs[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.n != other.n:
            raise SizeMismatch(f"S_{self.n} vs S_{other.n}")
        oi = other.imgs
        si = self.imgs
        return Permutation(tuple(si[oi[i] - 1] for i in range(self.n)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.imgs, start=1):
            inv[j - 1] = i
        return Permutation(inv)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.imgs == other.imgs

    def __hash__(self):
        return hash(self.imgs)

    def __lt__(self, other):
        return self.imgs < other.imgs

    def is_identity(self) -> bool:
        return all(self.imgs[i] == i + 1 for i in range(self.n))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        """Cycle decomposition; each cycle starts at its minimum, cycles
        ordered by minimum."""
        seen = [False] * self.n
        out = []
        for start in range(1, self.n + 1):
            if seen[start - 1]:
                continue
            cyc = [start]
            seen[start - 1] = True
            j = self(start)
            while j != start:
                cyc.append(j)
                seen[j - 1] = True
                j = self(j)
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(p) for p in c) + ")" for c in cycs)

    def image_list(self) -> list[int]:
        return list(self.imgs)

    def __repr__(self):
        return self.cycle_string()


class OrbitPartition:
    """Partition of 1..n into sorted blocks, blocks ordered by minimum."""

    __slots__ = ("n", "blocks", "_block_of")

    def __init__(self, n: int, blocks: Iterable[Iterable[int]]):
        canon = sorted((tuple(sorted(set(b))) for b in blocks), key=lambda b: b[0])
        covered = [p for b in canon for p in b]
        if sorted(covered) != list(range(1, n + 1)):
            raise ValueError(f"blocks {canon} do not partition 1..{n}")
        self.n = n
        self.blocks = tuple(canon)
        self._block_of = {}
        for bi, b in enumerate(self.blocks):
            for p in b:
                self._block_of[p] = bi

    def block_index(self, point: int) -> int:
        return self._block_of[point]

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __eq__(self, other):
        return (isinstance(other, OrbitPartition)
                and self.n == other.n and self.blocks == other.blocks)

    def __repr__(self):
        return "OrbitPartition(%s)" % (", ".join("{%s}" % " ".join(map(str, b))
                                                 for b in self.blocks))


def _orbit_ids(perms: Sequence[Permutation], n: int) -> list[int]:
    # plain union-find over 0..n-1 driven by all generator images
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in perms:
        imgs = s.imgs
        for i in range(n):
            a, b = find(i), find(imgs[i] - 1)
            if a != b:
                parent[b] = a
    return [find(i) for i in range(n)]


def joint_orbits(perms: Sequence[Permutation]) -> OrbitPartition:
    """Orbits of the subgroup generated by the given permutations."""
    if not perms:
        raise ValueError("need at least one permutation")
    n = perms[0].n
    if any(p.n != n for p in perms):
        raise SizeMismatch("permutations of different degree")
    roots = _orbit_ids(perms, n)
    blocks: dict[int, list[int]] = {}
    for i, r in enumerate(roots):
        blocks.setdefault(r, []).append(i + 1)
    return OrbitPartition(n, blocks.values())


def cycle_data(s: Permutation):
    """(orbits of <s>, l = number of orbits, |s| = n - l)."""
    orbits = joint_orbits([s])
    l = len(orbits)
    return orbits, l, s.n - l


def length(s: Permutation) -> int:
    """Minimal number of transpositions: |s| = n - #orbits."""
    return s.n - len(joint_orbits([s]))


def is_transversal(s: Permutation, t: Permutation) -> bool:
    """|st| = |s| + |t|, i.e. the fixed spaces intersect transversally."""
    if s.n != t.n:
        raise SizeMismatch(f"S_{s.n} vs S_{t.n}")
    return length(s * t) == length(s) + length(t)


def minimal_factorization(s: Permutation) -> list[Permutation]:
    """Deterministic list of |s| transpositions multiplying to s.

    Each cycle (a1 a2 ... ak), a1 minimal, contributes
    (a1 a2)(a2 a3)...(a_{k-1} a_k) in that order; cycles by minimum.
    The product of the returned list (rightmost applied first) is s.
    """
    out = []
    for cyc in s.cycles():
        for a, b in zip(cyc, cyc[1:]):
            out.append(Permutation.transposition(a, b, s.n))
    return out


def orbit_count_on(s: Permutation, block: Sequence[int]) -> int:
    """Number of <s>-orbits inside an s-invariant block of points."""
    pts = set(block)
    seen = set()
    count = 0
    for p in sorted(pts):
        if p in seen:
            continue
        count += 1
        q = p
        while q not in seen:
            seen.add(q)
            q = s(q)
            if q not in pts:
                raise NotAJointOrbit(f"block {sorted(pts)} not invariant under {s}")
    return count


def graph_defect(s: Permutation, t: Permutation, block: Sequence[int]) -> int:
    """Defect of a joint orbit B of <s, t>: half of
    |s|_B + |t|_B + |st|_B - 2|s,t|_B, all codimensions inside B.

    Equals (|B| + 2 - o_s(B) - o_t(B) - o_st(B)) / 2 where o counts
    orbits on B.  Nonnegative integer; 0 exactly on transversal blocks.
    """
    b = tuple(sorted(set(block)))
    joint = joint_orbits([s, t])
    if b not in joint.blocks:
        raise NotAJointOrbit(f"{list(b)} is not a joint orbit of {s}, {t}")
    size = len(b)
    o_s = orbit_count_on(s, b)
    o_t = orbit_count_on(t, b)
    o_st = orbit_count_on(s * t, b)
    # codimension form: |s|_B = |B| - o_s(B) etc., |s,t|_B = |B| - 1
    num = (size - o_s) + (size - o_t) + (size - o_st) - 2 * (size - 1)
    if num % 2 != 0 or num < 0:
        raise AssertionError(f"graph defect not a nonnegative integer for {s},{t},{b}")
    return num // 2


def graph_defect_table(s: Permutation, t: Permutation) -> dict[tuple[int, ...], int]:
    """Defect of every joint orbit of <s, t>, keyed by block."""
    return {b: graph_defect(s, t, b) for b in joint_orbits([s, t])}


def centralizer_generators(s: Permutation) -> list[Permutation]:
    """Generators of Z(s): one cycle of s per cycle length, plus the
    block swaps of adjacent same-length cycles (aligned with s so they
    commute with it)."""
    n = s.n
    by_len: dict[int, list[tuple[int, ...]]] = {}
    for cyc in s.cycles(include_fixed=True):
        by_len.setdefault(len(cyc), []).append(cyc)
    gens = []
    for k in sorted(by_len):
        cycles_k = sorted(by_len[k], key=lambda c: c[0])
        if k > 1:
            gens.append(Permutation.from_cycles([cycles_k[0]], n))
        for c1, c2 in zip(cycles_k, cycles_k[1:]):
            imgs = list(range(1, n + 1))
            for a, b in zip(c1, c2):
                imgs[a - 1], imgs[b - 1] = b, a
            gens.append(Permutation(imgs))
    if not gens:
        gens.append(Permutation.identity(n))
    return gens


def all_permutations(n: int):
    """All of S_n in lexicographic image order (S_0 = {empty map})."""
    for imgs in itertools.permutations(range(1, n + 1)):
        yield Permutation(imgs)


def generate_subgroup(gens: Sequence[Permutation]) -> set[Permutation]:
    if not gens:
        raise ValueError("need generators")
    n = gens[0].n
    seen = {Permutation.identity(n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g * x
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen
