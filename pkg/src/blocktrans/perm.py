"""Permutation groups: stabilizer chains, orbits, subdegrees, block systems.

Points are 1-based at the public surface. Internally a permutation is a
0-based tuple ``a`` with ``a[i]`` the image of ``i``. Products act left to
right: ``(p * q)(x) = q(p(x))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, prod
from typing import Iterable, Sequence

from .errors import IntransitiveGroupError, ValidationError

Perm0 = tuple[int, ...]


def _mul(p: Perm0, q: Perm0) -> Perm0:
    return tuple([q[x] for x in p])


def _inv(p: Perm0) -> Perm0:
    r = [0] * len(p)
    for i, x in enumerate(p):
        r[x] = i
    return tuple(r)


class Permutation:
    """A bijection of ``{1..n}`` given by its image list."""

    __slots__ = ("_a",)

    def __init__(self, images: Sequence[int]):
        a = tuple(int(x) - 1 for x in images)
        n = len(a)
        if n == 0:
            raise ValidationError("permutation of degree 0")
        if sorted(a) != list(range(n)):
            raise ValidationError(f"images {list(images)} are not a bijection on 1..{n}")
        self._a = a

    @classmethod
    def _raw(cls, a: Perm0) -> Permutation:
        p = cls.__new__(cls)
        p._a = a
        return p

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls._raw(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> Permutation:
        """Build from disjoint 1-based cycles, e.g. ``from_cycles(4, (1, 2), (3, 4))``."""
        a = list(range(n))
        seen: set[int] = set()
        for cyc in cycles:
            for x in cyc:
                if not 1 <= x <= n or x in seen:
                    raise ValidationError(f"bad cycle {tuple(cyc)} for degree {n}")
                seen.add(x)
            for i, x in enumerate(cyc):
                a[x - 1] = cyc[(i + 1) % len(cyc)] - 1
        return cls._raw(tuple(a))

    @property
    def degree(self) -> int:
        return len(self._a)

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(x + 1 for x in self._a)

    def __call__(self, point: int) -> int:
        return self._a[point - 1] + 1

    def __mul__(self, other: Permutation) -> Permutation:
        if other.degree != self.degree:
            raise ValidationError("degree mismatch in product")
        return Permutation._raw(_mul(self._a, other._a))

    def inverse(self) -> Permutation:
        return Permutation._raw(_inv(self._a))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self._a))

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self._a == other._a

    def __hash__(self) -> int:
        return hash(self._a)

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(len(self._a)):
            if i in seen or self._a[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self._a[i]
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self._a[j]
            out.append(tuple(x + 1 for x in cyc))
        return out

    def __repr__(self) -> str:
        cyc = self.cycles()
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"
        return f"Permutation<{self.degree}>{body}"


@dataclass(frozen=True)
class BlockSystem:
    """A nontrivial partition of the points preserved by a group."""

    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        sizes = {len(c) for c in self.classes}
        pts = sorted(p for c in self.classes for p in c)
        if len(sizes) != 1 or pts != list(range(1, len(pts) + 1)):
            raise ValidationError("classes must be equal-sized and partition 1..n")
        if self.c < 2 or self.d < 2:
            raise ValidationError("block system must be nontrivial")

    @property
    def c(self) -> int:
        return len(self.classes[0])

    @property
    def d(self) -> int:
        return len(self.classes)

    def class_of(self, point: int) -> tuple[int, ...]:
        for cl in self.classes:
            if point in cl:
                return cl
        raise ValidationError(f"point {point} not covered")

    def is_invariant(self, perm: Permutation) -> bool:
        target = set(map(frozenset, self.classes))
        return all(frozenset(perm(p) for p in cl) in target for cl in self.classes)


@dataclass(frozen=True)
class SubdegreeProfile:
    point: int
    orbit_sizes: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.orbit_sizes)


class _Chain:
    """Stabilizer chain built by deterministic Schreier-Sims.

    ``transversals[i]`` maps each point of the basic orbit of ``base[i]`` to a
    pair ``(u, u^-1)`` with ``u`` sending ``base[i]`` there.
    """

    def __init__(self, gens: list[Perm0], n: int, prefix: Sequence[int] = ()):
        self.n = n
        self.identity = tuple(range(n))
        self.base: list[int] = list(prefix)
        for g in gens:
            if all(g[b] == b for b in self.base):
                self.base.append(_moved_point(g))
        self.sgens: list[list[Perm0]] = [
            [g for g in gens if all(g[b] == b for b in self.base[:i])] for i in range(len(self.base))
        ]
        self.transversals: list[dict[int, tuple[Perm0, Perm0]]] = []
        for i in range(len(self.base)):
            t = {self.base[i]: (self.identity, self.identity)}
            self._extend(t, self.sgens[i])
            self.transversals.append(t)
        self._run()

    def _extend(self, t: dict, gens: list[Perm0]) -> None:
        queue = list(t)
        while queue:
            x = queue.pop()
            u = t[x][0]
            for g in gens:
                y = g[x]
                if y not in t:
                    w = _mul(u, g)
                    t[y] = (w, _inv(w))
                    queue.append(y)

    def strip(self, h: Perm0, start: int = 0) -> tuple[Perm0, int]:
        for level in range(start, len(self.base)):
            b = h[self.base[level]]
            t = self.transversals[level]
            if b not in t:
                return h, level
            h = _mul(h, t[b][1])
        return h, len(self.base)

    def _run(self) -> None:
        checked: list[set] = [set() for _ in self.base]
        i = len(self.base) - 1
        while i >= 0:
            found = None
            t = self.transversals[i]
            for beta in list(t):
                u = t[beta][0]
                for si, s in enumerate(self.sgens[i]):
                    if (beta, si) in checked[i]:
                        continue
                    checked[i].add((beta, si))
                    h = _mul(_mul(u, s), t[s[beta]][1])
                    y, j = self.strip(h, i + 1)
                    if y != self.identity:
                        found = (y, j)
                        break
                if found:
                    break
            if found is None:
                i -= 1
                continue
            y, j = found
            if j == len(self.base):
                b = _moved_point(y)
                self.base.append(b)
                self.sgens.append([])
                self.transversals.append({b: (self.identity, self.identity)})
                checked.append(set())
            for level in range(i + 1, j + 1):
                self.sgens[level].append(y)
                self._extend(self.transversals[level], [y])
                self._extend(self.transversals[level], self.sgens[level])
            i = j

    def order(self) -> int:
        return prod(len(t) for t in self.transversals)


def _moved_point(g: Perm0) -> int:
    for i, x in enumerate(g):
        if x != i:
            return i
    raise ValidationError("identity has no moved point")


class PermGroup:
    """Finitely generated permutation group of degree ``n``.

    The stabilizer chain is built on first use. ``base`` optionally fixes a
    prefix of base points (1-based); the rest is chosen as the smallest point
    moved by a generator.
    """

    def __init__(self, generators: Iterable[Permutation], degree: int | None = None,
                 base: Sequence[int] = ()):
        gens = list(generators)
        if not gens:
            if degree is None:
                raise ValidationError("a group needs at least one generator or a degree")
            gens = [Permutation.identity(degree)]
        n = gens[0].degree
        if degree is not None and degree != n:
            raise ValidationError(f"generator degree {n} differs from declared degree {degree}")
        for g in gens:
            if not isinstance(g, Permutation):
                raise ValidationError(f"not a Permutation: {g!r}")
            if g.degree != n:
                raise ValidationError("generators have unequal degrees")
        for b in base:
            if not 1 <= b <= n:
                raise ValidationError(f"base point {b} out of range 1..{n}")
        self.degree = n
        self.generators = tuple(gens)
        self._gens0 = [g._a for g in gens if not g.is_identity()]
        self._prefix = tuple(b - 1 for b in base)
        self._chain: _Chain | None = None

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, ngens={len(self.generators)})"

    @property
    def chain(self) -> _Chain:
        if self._chain is None:
            self._chain = _Chain(self._gens0, self.degree, self._prefix)
        return self._chain

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(b + 1 for b in self.chain.base)

    @property
    def basic_orbit_sizes(self) -> tuple[int, ...]:
        return tuple(len(t) for t in self.chain.transversals)

    def order(self) -> int:
        return self.chain.order()

    def _check_point(self, point: int) -> None:
        if not isinstance(point, int) or not 1 <= point <= self.degree:
            raise ValidationError(f"point {point!r} out of range 1..{self.degree}")

    def sift(self, perm: Permutation) -> tuple[Permutation, int]:
        """Strip ``perm`` through the chain; returns residue and the level reached."""
        if perm.degree != self.degree:
            raise ValidationError("degree mismatch")
        h, level = self.chain.strip(perm._a)
        return Permutation._raw(h), level

    def __contains__(self, perm: Permutation) -> bool:
        residue, level = self.sift(perm)
        return level == len(self.chain.base) and residue.is_identity()

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return all(g in other for g in self.generators)

    def orbit(self, point: int) -> frozenset[int]:
        self._check_point(point)
        return frozenset(x + 1 for x in _orbit0(self._gens0, point - 1))

    def orbits(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        out = []
        for p in range(1, self.degree + 1):
            if p not in seen:
                o = self.orbit(p)
                seen |= o
                out.append(o)
        return out

    def is_transitive(self) -> bool:
        return len(self.orbit(1)) == self.degree

    def _require_transitive(self) -> None:
        if not self.is_transitive():
            raise IntransitiveGroupError(
                f"group has {len(self.orbits())} orbits on 1..{self.degree}; operation needs a transitive group"
            )

    def stabilizer(self, point: int) -> PermGroup:
        self._check_point(point)
        ch = _Chain(self._gens0, self.degree, (point - 1,))
        gens = ch.sgens[1] if len(ch.sgens) > 1 else []
        return PermGroup([Permutation._raw(g) for g in gens], degree=self.degree)

    def subdegrees(self, point: int = 1) -> SubdegreeProfile:
        self._check_point(point)
        self._require_transitive()
        stab = self.stabilizer(point)
        sizes = tuple(sorted(len(o) for o in stab.orbits()))
        return SubdegreeProfile(point, sizes)

    def minimal_block(self, seed: Iterable[int]) -> list[frozenset[int]]:
        """Finest invariant partition with all of ``seed`` in one class."""
        seed0 = [p - 1 for p in seed]
        for p in seed0:
            self._check_point(p + 1)
        return [frozenset(x + 1 for x in c) for c in _minimal_partition(self._gens0, self.degree, seed0)]

    def block_systems(self) -> list[BlockSystem]:
        """All nontrivial block systems, sorted by class size then classes."""
        self._require_transitive()
        n = self.degree
        found: dict[frozenset[int], BlockSystem] = {}

        def add(part: list[frozenset[int]]) -> frozenset[int] | None:
            if len(part) in (1, n):
                return None
            cl = next(c for c in part if 1 in c)
            if cl not in found:
                found[cl] = BlockSystem(tuple(sorted(tuple(sorted(c)) for c in part)))
            return cl

        frontier = [cl for beta in range(2, n + 1) if (cl := add(self.minimal_block((1, beta))))]
        frontier = list(dict.fromkeys(frontier))
        # joins of known blocks through point 1 until closed
        while frontier:
            new = []
            known = list(found)
            for a in frontier:
                for b in known:
                    if a <= b or b <= a:
                        continue
                    cl = add(self.minimal_block(a | b))
                    if cl is not None and cl not in known and cl not in new:
                        new.append(cl)
            frontier = new
        return sorted(found.values(), key=lambda s: (s.c, s.classes))

    def is_primitive(self) -> bool:
        return self.is_transitive() and not self.block_systems()

    def is_t_homogeneous(self, t: int) -> bool:
        n = self.degree
        if not 1 <= t <= n // 2:
            raise ValidationError(f"t={t} outside 1..{n // 2}")
        start = (1 << t) - 1
        return len(set_orbit(self, start)) == comb(n, t)


def _orbit0(gens: list[Perm0], x: int) -> set[int]:
    seen = {x}
    queue = [x]
    while queue:
        y = queue.pop()
        for g in gens:
            z = g[y]
            if z not in seen:
                seen.add(z)
                queue.append(z)
    return seen


def _minimal_partition(gens: list[Perm0], n: int, seed: list[int]) -> list[list[int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue = []
    for s in seed[1:]:
        a, b = find(seed[0]), find(s)
        if a != b:
            parent[b] = a
            queue.append((a, b))
    while queue:
        x, y = queue.pop()
        for g in gens:
            a, b = find(g[x]), find(g[y])
            if a != b:
                parent[b] = a
                queue.append((a, b))
    classes: dict[int, list[int]] = {}
    for x in range(n):
        classes.setdefault(find(x), []).append(x)
    return list(classes.values())


def mask_image_tables(perm: Permutation) -> list[list[int]]:
    """Byte-wise lookup tables mapping a point bitmask through ``perm``."""
    a = perm._a
    tables = []
    for chunk in range((len(a) + 7) // 8):
        tab = [0] * 256
        for m in range(1, 256):
            low = m & -m
            bit = low.bit_length() - 1 + 8 * chunk
            tab[m] = tab[m ^ low] | (1 << a[bit]) if bit < len(a) else tab[m ^ low]
        tables.append(tab)
    return tables


def apply_mask(tables: list[list[int]], mask: int) -> int:
    out = 0
    for tab in tables:
        out |= tab[mask & 255]
        mask >>= 8
    return out


def set_orbit(g: PermGroup, mask: int) -> set[int]:
    """Orbit of a point subset, given as a bitmask (bit ``i`` is point ``i+1``)."""
    tabs = [mask_image_tables(p) for p in g.generators if not p.is_identity()]
    seen = {mask}
    queue = [mask]
    while queue:
        m = queue.pop()
        for t in tabs:
            y = apply_mask(t, m)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def group_order(g: PermGroup) -> int:
    return g.order()


def orbit(g: PermGroup, point: int) -> frozenset[int]:
    return g.orbit(point)


def point_stabilizer(g: PermGroup, point: int) -> PermGroup:
    return g.stabilizer(point)


def subdegrees(g: PermGroup, point: int = 1) -> SubdegreeProfile:
    return g.subdegrees(point)


def block_systems(g: PermGroup) -> list[BlockSystem]:
    return g.block_systems()


def is_t_homogeneous(g: PermGroup, t: int) -> bool:
    return g.is_t_homogeneous(t)
