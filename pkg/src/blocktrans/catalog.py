"""Group catalogs: the text format, named constructions, bundled fixtures.

Catalog format, one record per blank-line separated paragraph::

    GROUP S8wrS2
    DEGREE 16
    GEN 2 1 3 4 5 6 7 8 9 10 11 12 13 14 15 16
    GEN ...

Each ``GEN`` line lists the 1-based images of points ``1..n``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .errors import CatalogParseError, ValidationError
from .perm import Permutation, PermGroup


@dataclass(frozen=True)
class GroupRecord:
    name: str
    degree: int
    generators: tuple[Permutation, ...]

    def __post_init__(self):
        if not self.generators:
            raise ValidationError(f"record {self.name!r} has no generators")
        for g in self.generators:
            if g.degree != self.degree:
                raise ValidationError(f"record {self.name!r}: generator degree {g.degree} != {self.degree}")

    def group(self) -> PermGroup:
        return PermGroup(self.generators, degree=self.degree)


@dataclass
class Catalog:
    records: list[GroupRecord]
    source: str = "builtin"
    _by_name: dict[str, GroupRecord] = field(init=False, repr=False)

    def __post_init__(self):
        self._by_name = {}
        for r in self.records:
            if r.name in self._by_name:
                raise ValidationError(f"duplicate record name {r.name!r}")
            self._by_name[r.name] = r

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    def __getitem__(self, name: str) -> GroupRecord:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"no group {name!r} in catalog {self.source}") from None

    def names(self) -> list[str]:
        return [r.name for r in self.records]


def parse_catalog(text: str, source: str = "<text>") -> Catalog:
    records: list[GroupRecord] = []
    seen: set[str] = set()
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        para = []
        while i < len(lines) and lines[i].strip():
            para.append((i + 1, lines[i]))
            i += 1
        records.append(_parse_record(para, seen))
        seen.add(records[-1].name)
    return Catalog(records, source)


def _parse_record(para: list[tuple[int, str]], seen: set[str]) -> GroupRecord:
    lineno, line = para[0]
    m = re.fullmatch(r"\s*GROUP\s+(\S+)\s*", line)
    if not m:
        raise CatalogParseError("expected 'GROUP <name>'", lineno, _col(line))
    name = m.group(1)
    if name in seen:
        raise CatalogParseError(f"duplicate group name {name!r}", lineno, line.index(name) + 1)
    if len(para) < 2:
        raise CatalogParseError(f"group {name!r}: missing DEGREE line", lineno + 1)
    lineno, line = para[1]
    m = re.fullmatch(r"\s*DEGREE\s+(\d+)\s*", line)
    if not m or int(m.group(1)) < 1:
        raise CatalogParseError("expected 'DEGREE <n>' with n >= 1", lineno, _col(line))
    n = int(m.group(1))
    gens = []
    for lineno, line in para[2:]:
        tokens = line.split()
        if tokens[0] != "GEN":
            raise CatalogParseError(f"expected 'GEN', found {tokens[0]!r}", lineno, _col(line))
        imgs = []
        for tok in tokens[1:]:
            if not tok.isdigit():
                raise CatalogParseError(f"not a point: {tok!r}", lineno, _token_col(line, tok))
            imgs.append(int(tok))
        if len(imgs) != n:
            raise CatalogParseError(f"generator has {len(imgs)} images, degree is {n}", lineno, _col(line))
        if sorted(imgs) != list(range(1, n + 1)):
            dup = next((p for p in imgs if imgs.count(p) > 1 or not 1 <= p <= n), imgs[0])
            raise CatalogParseError(f"generator is not a bijection on 1..{n} (bad image {dup})",
                                    lineno, _col(line))
        gens.append(Permutation(imgs))
    if not gens:
        raise CatalogParseError(f"group {name!r} has no generators", para[-1][0])
    return GroupRecord(name, n, tuple(gens))


def _col(line: str) -> int:
    return len(line) - len(line.lstrip()) + 1


def _token_col(line: str, tok: str) -> int:
    return re.search(r"(?<!\S)" + re.escape(tok) + r"(?!\S)", line).start() + 1


def serialize_catalog(catalog: Catalog) -> str:
    chunks = []
    for r in catalog.records:
        lines = [f"GROUP {r.name}", f"DEGREE {r.degree}"]
        lines += ["GEN " + " ".join(map(str, g.images)) for g in r.generators]
        chunks.append("\n".join(lines) + "\n")
    return "\n".join(chunks)


def normalize_catalog_text(text: str) -> str:
    """Canonical spacing: single spaces, one blank line between records."""
    paras, cur = [], []
    for line in text.splitlines():
        if line.strip():
            cur.append(" ".join(line.split()))
        elif cur:
            paras.append(cur)
            cur = []
    if cur:
        paras.append(cur)
    return "\n".join("\n".join(p) + "\n" for p in paras)


def load_catalog(path: str | Path) -> Catalog:
    path = Path(path)
    return parse_catalog(path.read_text(encoding="utf-8"), source=str(path))


# ---------------------------------------------------------------- constructions

def _perm(n: int, f) -> Permutation:
    """Permutation of 1..n from a 0-based point map."""
    return Permutation([f(i) + 1 for i in range(n)])


def symmetric_group(n: int) -> PermGroup:
    if n == 1:
        return PermGroup([], degree=1)
    gens = [Permutation.from_cycles(n, (1, 2))]
    if n > 2:
        gens.append(Permutation.from_cycles(n, tuple(range(1, n + 1))))
    return PermGroup(gens)


def alternating_group(n: int) -> PermGroup:
    if n < 3:
        return PermGroup([], degree=n)
    cyc = tuple(range(1, n + 1)) if n % 2 else tuple(range(2, n + 1))
    return PermGroup([Permutation.from_cycles(n, (1, 2, 3)), Permutation.from_cycles(n, cyc)])


def cyclic_group(n: int) -> PermGroup:
    return PermGroup([_perm(n, lambda i: (i + 1) % n)])


def trivial_group(n: int) -> PermGroup:
    return PermGroup([], degree=n)


def wreath_product(base: PermGroup, d: int) -> PermGroup:
    """``H wr S_d`` in imprimitive action: class ``j`` holds points ``j*c+1 .. (j+1)*c``."""
    c = base.degree
    n = c * d
    gens: list[Permutation] = []
    for h in base.generators:
        if not h.is_identity():
            gens.append(_perm(n, lambda i, h=h: h(i + 1) - 1 if i < c else i))
    if d > 1:
        gens.append(_perm(n, lambda i: (i + c) % n))
        if d > 2:
            gens.append(_perm(n, lambda i: i + c if i < c else i - c if i < 2 * c else i))
    return PermGroup(gens or [Permutation.identity(n)], degree=n)


def wreath_product_imprimitive(c: int, d: int) -> PermGroup:
    """``S_c wr S_d`` acting on ``c*d`` points with ``d`` classes of size ``c``."""
    if c < 2 or d < 2:
        raise ValidationError("wreath product needs c, d >= 2")
    return wreath_product(symmetric_group(c), d)


def _gf8_mul(a: int, b: int) -> int:
    # GF(8) = GF(2)[x]/(x^3 + x + 1)
    r = 0
    for i in range(3):
        if b >> i & 1:
            r ^= a << i
    for i in (4, 3):
        if r >> i & 1:
            r ^= 0b1011 << (i - 3)
    return r


def affine_group(dim: int) -> PermGroup:
    """AGL(dim, 2) on the 2^dim vectors; vector ``x`` is point ``x+1``."""
    n = 1 << dim
    gens = [_perm(n, lambda x: x ^ 1)]
    if dim > 1:
        gens.append(_perm(n, lambda x: ((x << 1) | (x >> (dim - 1))) & (n - 1)))  # coordinate cycle
        gens.append(_perm(n, lambda x: x ^ ((x >> 1) & 1)))  # transvection x0 += x1
    return PermGroup(gens)


def hyperplane_stabilizer_affine(dim: int = 4) -> PermGroup:
    """Stabilizer in AGL(dim, 2) of the parallel class of the hyperplane ``x_top = 0``."""
    n = 1 << dim
    low = (1 << (dim - 1)) - 1
    top = dim - 1
    sub = affine_group(dim - 1)
    gens = [_perm(n, lambda x, g=g: (g((x & low) + 1) - 1) | (x & ~low)) for g in sub.generators]
    gens.append(_perm(n, lambda x: x ^ (x >> top & 1)))  # e_top -> e_top + e_0
    gens.append(_perm(n, lambda x: x ^ (1 << top)))
    return PermGroup(gens)


def pgl2_7() -> PermGroup:
    """PGL(2,7) on the projective line; ``x`` in GF(7) is point ``x+1``, infinity is 8."""
    inf = 7

    def inv_neg(x):
        if x == inf:
            return 0
        if x == 0:
            return inf
        return (-pow(x, -1, 7)) % 7

    return PermGroup([
        _perm(8, lambda x: x if x == inf else (x + 1) % 7),
        _perm(8, lambda x: x if x == inf else (3 * x) % 7),
        _perm(8, inv_neg),
    ])


def affine_line_gf8(semilinear: bool = False) -> PermGroup:
    """AGL(1,8), or AGammaL(1,8) when ``semilinear``; element ``x`` is point ``x+1``."""
    gens = [_perm(8, lambda x: x ^ 1), _perm(8, lambda x: _gf8_mul(x, 2))]
    if semilinear:
        gens.append(_perm(8, lambda x: _gf8_mul(x, x)))
    return PermGroup(gens)


_FIXTURE_BUILDERS = {
    "S8wrS2": lambda: wreath_product_imprimitive(8, 2),
    "A8wrS2": lambda: wreath_product(alternating_group(8), 2),
    "AGL(3,2)wrS2": lambda: wreath_product(affine_group(3), 2),
    "PGL(2,7)wrS2": lambda: wreath_product(pgl2_7(), 2),
    "AGammaL(1,8)wrS2": lambda: wreath_product(affine_line_gf8(True), 2),
    "AGL(1,8)wrS2": lambda: wreath_product(affine_line_gf8(False), 2),
    "2^4:(2^3:L3(2))": lambda: hyperplane_stabilizer_affine(4),
    "S4wrS2wrS2": lambda: wreath_product(wreath_product_imprimitive(4, 2), 2),
    "S4wrS4": lambda: wreath_product_imprimitive(4, 4),
    "S2wrS8": lambda: wreath_product_imprimitive(2, 8),
    "C16": lambda: cyclic_group(16),
}


@lru_cache(maxsize=1)
def builtin_fixtures() -> Catalog:
    """Sample of transitive imprimitive groups of degree 16."""
    records = [GroupRecord(name, 16, build().generators) for name, build in _FIXTURE_BUILDERS.items()]
    return Catalog(records, source="builtin")


_PARAMETRIC = [
    (re.compile(r"S(\d+)wrS(\d+)"), lambda c, d: wreath_product_imprimitive(c, d)),
    (re.compile(r"S(\d+)"), symmetric_group),
    (re.compile(r"A(\d+)"), alternating_group),
    (re.compile(r"C(\d+)"), cyclic_group),
    (re.compile(r"Id(\d+)"), trivial_group),
    (re.compile(r"AGL\((\d+),2\)"), affine_group),
]


def builtin_group(name: str) -> GroupRecord:
    """Fixture by name, or a parametric family: ``S16``, ``A8``, ``C5``, ``Id16``, ``S8wrS2``, ``AGL(3,2)``."""
    cat = builtin_fixtures()
    if name in cat.names():
        return cat[name]
    for pat, build in _PARAMETRIC:
        m = pat.fullmatch(name)
        if m:
            g = build(*map(int, m.groups()))
            return GroupRecord(name, g.degree, g.generators)
    raise KeyError(f"unknown builtin group {name!r}")


def resolve_group_source(source: str) -> list[GroupRecord]:
    """``builtin:<name>``, ``builtin`` (all fixtures), ``file:<path>#<name>``, ``file:<path>`` or a bare path."""
    if source == "builtin":
        return list(builtin_fixtures())
    if source.startswith("builtin:"):
        return [builtin_group(source[len("builtin:"):])]
    path = source[len("file:"):] if source.startswith("file:") else source
    name = None
    if "#" in path:
        path, name = path.rsplit("#", 1)
    cat = load_catalog(path)
    if name is not None:
        return [cat[name]]
    return list(cat)
