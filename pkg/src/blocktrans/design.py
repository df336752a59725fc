"""Designs as block sets: orbit construction, t-design verification, parameters.

Blocks are sorted tuples of 1-based points; a design's block list is kept in
lexicographic order. Subsets are also handled as bitmasks (bit ``i`` is point
``i+1``) where that is cheaper.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, gcd
from pathlib import Path
from typing import Iterable

from .errors import InfeasibleParametersError, NotADesignError, ValidationError
from .perm import PermGroup, set_orbit


@dataclass(frozen=True)
class DesignParams:
    v: int
    b: int
    r: int
    k: int
    lam: int
    t: int

    @property
    def nontrivial(self) -> bool:
        return self.t < self.k < self.v - 1

    def label(self) -> str:
        return f"{self.t}-({self.v},{self.k},{self.lam})"


@dataclass(frozen=True)
class Design:
    v: int
    k: int
    blocks: tuple[tuple[int, ...], ...]
    verified: DesignParams | None = field(default=None, compare=False)

    @classmethod
    def from_blocks(cls, v: int, blocks: Iterable[Iterable[int]]) -> Design:
        bl = [tuple(sorted(b)) for b in blocks]
        if not bl:
            raise ValidationError("a design needs at least one block")
        k = len(bl[0])
        for b in bl:
            if len(b) != k:
                raise ValidationError(f"block {b} has size {len(b)}, expected {k}")
            if len(set(b)) != k:
                raise ValidationError(f"block {b} repeats a point")
            if b[0] < 1 or b[-1] > v:
                raise ValidationError(f"block {b} leaves the point range 1..{v}")
        bl.sort()
        for a, b in zip(bl, bl[1:]):
            if a == b:
                raise ValidationError(f"repeated block {a}: designs here are simple")
        return cls(v, k, tuple(bl))

    @classmethod
    def from_masks(cls, v: int, masks: Iterable[int]) -> Design:
        return cls.from_blocks(v, (mask_to_block(m) for m in masks))

    @property
    def b(self) -> int:
        return len(self.blocks)

    def masks(self) -> list[int]:
        return [block_to_mask(b) for b in self.blocks]

    def relabel(self, perm) -> Design:
        """Image of the design under a point permutation (a ``Permutation`` or 1-based image list)."""
        f = perm if callable(perm) else (lambda p: perm[p - 1])
        return Design.from_blocks(self.v, ([f(p) for p in b] for b in self.blocks))


def block_to_mask(block: Iterable[int]) -> int:
    m = 0
    for p in block:
        m |= 1 << (p - 1)
    return m


def mask_to_block(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def block_orbit(g: PermGroup, base_block: Iterable[int]) -> Design:
    """The design whose blocks are all images of ``base_block`` under ``g``."""
    base = sorted(set(base_block))
    if not base:
        raise ValidationError("base block is empty")
    if base[0] < 1 or base[-1] > g.degree:
        raise ValidationError(f"base block {base} leaves the point range 1..{g.degree}")
    return Design.from_masks(g.degree, set_orbit(g, block_to_mask(base)))


def derive_params(v: int, k: int, lam: int, t: int = 3) -> DesignParams:
    if not v > k > t >= 1 or lam < 1:
        raise ValidationError(f"need v > k > t >= 1 and lambda >= 1, got v={v} k={k} t={t} lambda={lam}")
    b_num, b_den = lam * comb(v, t), comb(k, t)
    if b_num % b_den:
        raise InfeasibleParametersError(f"b = {b_num}/{b_den} is not an integer")
    b = b_num // b_den
    if (b * k) % v:
        raise InfeasibleParametersError(f"r = bk/v = {b * k}/{v} is not an integer")
    return DesignParams(v=v, b=b, r=b * k // v, k=k, lam=lam, t=t)


def verify_design(d: Design, t: int = 3) -> DesignParams:
    """Count blocks over every t-subset; return parameters or raise ``NotADesignError``."""
    if not 1 <= t <= d.k:
        raise ValidationError(f"t={t} outside 1..k={d.k}")
    counts: Counter = Counter()
    for b in d.blocks:
        counts.update(combinations(b, t))
    first = None
    for s in combinations(range(1, d.v + 1), t):
        c = counts.get(s, 0)
        if first is None:
            first = (s, c)
        elif c != first[1]:
            raise NotADesignError(t, (first, (s, c)))
    lam = first[1]
    reps = Counter(p for b in d.blocks for p in b)
    r_values = {reps.get(p, 0) for p in range(1, d.v + 1)}
    if len(r_values) != 1:
        raise NotADesignError(1, _witness_points(reps, d.v))
    r = r_values.pop()
    # parameter identities: vr = bk and lambda*C(v,t) = b*C(k,t)
    if d.v * r != d.b * d.k or lam * comb(d.v, t) != d.b * comb(d.k, t):
        raise AssertionError("counting identities failed on a constant-count design")
    return DesignParams(v=d.v, b=d.b, r=r, k=d.k, lam=lam, t=t)


def _witness_points(reps: Counter, v: int):
    base = reps.get(1, 0)
    other = next(p for p in range(2, v + 1) if reps.get(p, 0) != base)
    return ((1,), base), ((other,), reps.get(other, 0))


def verified(d: Design, t: int = 3) -> Design:
    return Design(d.v, d.k, d.blocks, verify_design(d, t))


@dataclass(frozen=True)
class Pencil:
    point: int
    blocks_through: frozenset[int]

    def __len__(self) -> int:
        return len(self.blocks_through)


def pencil(d: Design, point: int) -> Pencil:
    if not 1 <= point <= d.v:
        raise ValidationError(f"point {point} out of range 1..{d.v}")
    return Pencil(point, frozenset(i for i, b in enumerate(d.blocks) if point in b))


def pencil_pair_counts(g: PermGroup, d: Design, point: int) -> list[tuple[int, list[tuple[int, int]]]]:
    """For each nontrivial suborbit at ``point``: its size and the pencil profile.

    The profile lists ``(|O|, mu)`` per orbit ``O`` of the point stabilizer on the
    pencil, where ``mu`` is how many suborbit points a block of ``O`` contains.
    Double counting pairs inside the suborbit gives
    ``sum |O| * C(mu, 2) == lambda * C(size, 2)`` for a 3-design.
    """
    stab = g.stabilizer(point)
    pen = [d.blocks[i] for i in sorted(pencil(d, point).blocks_through)]
    pen_masks = {block_to_mask(b) for b in pen}
    orbits: list[set[int]] = []
    seen: set[int] = set()
    for m in sorted(pen_masks):
        if m not in seen:
            o = set_orbit(stab, m)
            if not o <= pen_masks:
                raise ValidationError("pencil is not invariant under the point stabilizer")
            seen |= o
            orbits.append(o)
    out = []
    for gamma in sorted(stab.orbits(), key=min):
        if point in gamma:
            continue
        gmask = block_to_mask(gamma)
        profile = []
        for o in orbits:
            mus = {bin(m & gmask).count("1") for m in o}
            if len(mus) != 1:
                raise AssertionError("intersection size not constant on a stabilizer orbit")
            profile.append((len(o), mus.pop()))
        out.append((len(gamma), profile))
    return out


def is_flag_transitive(g: PermGroup, d: Design) -> bool:
    """True when the group is transitive on incident (point, block) pairs."""
    if not g.is_transitive():
        return False
    p = pencil(d, 1)
    first = block_to_mask(d.blocks[min(p.blocks_through)])
    return len(set_orbit(g.stabilizer(1), first)) == len(p)


def ag2_planes_design(dim: int) -> Design:
    """Points and planes of AG(dim, 2): 4-subsets of GF(2)^dim summing to zero."""
    if not 3 <= dim <= 6:
        raise ValidationError("dim must be in 3..6")
    n = 1 << dim
    blocks = []
    for a, b, c in combinations(range(n), 3):
        e = a ^ b ^ c
        if e > c:
            blocks.append((a + 1, b + 1, c + 1, e + 1))
    return Design.from_blocks(n, blocks)


# ---------------------------------------------------------------- file format

def format_design(d: Design) -> str:
    lines = [f"{d.v} {d.k}"] + [" ".join(map(str, b)) for b in d.blocks]
    return "\n".join(lines) + "\n"


def parse_design(text: str) -> Design:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValidationError("empty design file")
    head = lines[0].split()
    if len(head) != 2 or not all(h.isdigit() for h in head):
        raise ValidationError(f"line 1: expected 'v k', got {lines[0]!r}")
    v, k = map(int, head)
    blocks = []
    for i, ln in enumerate(lines[1:], start=2):
        toks = ln.split()
        if not all(t.isdigit() for t in toks):
            raise ValidationError(f"line {i}: non-integer point")
        blocks.append([int(t) for t in toks])
    d = Design.from_blocks(v, blocks)
    if d.k != k:
        raise ValidationError(f"header says k={k}, blocks have size {d.k}")
    return d


def read_design(path: str | Path) -> Design:
    return parse_design(Path(path).read_text(encoding="utf-8"))


def write_design(d: Design, path: str | Path) -> None:
    Path(path).write_text(format_design(d), encoding="utf-8")


# ---------------------------------------------------------------- orbit search

def intersection_pattern(block: Iterable[int], classes: Iterable[Iterable[int]]) -> tuple[int, ...]:
    """Sizes of ``block`` meeting each class, in weakly decreasing order (zeros kept)."""
    bset = set(block)
    return tuple(sorted((len(bset.intersection(c)) for c in classes), reverse=True))


@dataclass(frozen=True)
class OrbitDesign:
    """One block orbit of a search, with its parameters when it is a t-design."""

    representative: tuple[int, ...]
    design: Design
    params: DesignParams | None


def pattern_orbits(g: PermGroup, pattern: Iterable[int], t: int = 3) -> list[OrbitDesign]:
    """All block orbits of k-subsets with the given class-intersection pattern.

    ``pattern`` is matched against every block system of ``g`` with exactly
    ``len(pattern)`` classes (pad with zeros for more classes). Orbits come in
    order of their lexicographically least block; each is checked for the
    t-design property.
    """
    pat = tuple(sorted(pattern, reverse=True))
    k = sum(pat)
    systems = [s for s in g.block_systems() if s.d == len(pat)]
    if not systems or k < 1:
        return []
    candidates = set()
    for block in combinations(range(1, g.degree + 1), k):
        if any(intersection_pattern(block, s.classes) == pat for s in systems):
            candidates.add(block_to_mask(block))
    out = []
    # cheap necessary condition: b * C(k, t) divisible by C(v, t)
    need = comb(g.degree, t) // gcd(comb(g.degree, t), comb(k, t)) if t <= k else 1
    while candidates:
        rep = min(candidates, key=lambda m: mask_to_block(m))
        orb = set_orbit(g, rep)
        candidates -= orb
        d = Design.from_masks(g.degree, orb)
        params = None
        if t <= k and d.b % need == 0:
            try:
                params = verify_design(d, t)
            except NotADesignError:
                params = None
        out.append(OrbitDesign(mask_to_block(rep), d, params))
    out.sort(key=lambda o: o.representative)
    return out



def subset_orbit_designs(g: PermGroup, k: int, t: int = 3) -> list[OrbitDesign]:
    """Every orbit of ``g`` on k-subsets that is a t-design, by least representative."""
    if not 1 <= t <= k <= g.degree:
        raise ValidationError(f"need 1 <= t <= k <= {g.degree}, got t={t} k={k}")
    need = comb(g.degree, t) // gcd(comb(g.degree, t), comb(k, t))
    seen: set[int] = set()
    out = []
    for block in combinations(range(1, g.degree + 1), k):
        m = block_to_mask(block)
        if m in seen:
            continue
        orb = set_orbit(g, m)
        seen |= orb
        if len(orb) % need:
            continue
        d = Design.from_masks(g.degree, orb)
        try:
            out.append(OrbitDesign(block, d, verify_design(d, t)))
        except NotADesignError:
            pass
    return out
