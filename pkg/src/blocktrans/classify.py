"""Isomorphism testing and classification of designs on few points.

``canonical_form`` runs an individualization-refinement search over point
labelings. Each node refines an ordered point partition until it is equitable
with respect to the incidence structure. Nodes are pruned three ways:

* by node invariant (the refinement trace), against the best leaf so far;
* by automorphisms already found, which identify sibling branches;
* by backjumping when a leaf reproduces the first or the best leaf.

Leaves are ordered by ``(trace, relabeled block list)``; the least leaf is the
canonical form. Block lists compare as lists of sorted point tuples.
"""

from __future__ import annotations

import hashlib
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .design import Design, verify_design
from .errors import NotADesignError, ValidationError
from .perm import Permutation

MAX_POINTS = 24


@dataclass(frozen=True)
class CanonicalForm:
    relabeled_blocks: tuple[tuple[int, ...], ...]
    certificate: Permutation = field(compare=False)
    v: int = 0

    def design(self) -> Design:
        return Design.from_blocks(self.v, self.relabeled_blocks)


def block_intersection_histograms(d: Design, chunk: int = 1024) -> np.ndarray:
    """Row ``i`` counts, for ``s = 0..k``, the blocks meeting block ``i`` in ``s`` points."""
    b, k = d.b, d.k
    inc = np.zeros((b, d.v), dtype=np.float32)
    blocks = np.asarray(d.blocks) - 1
    inc[np.repeat(np.arange(b), k), blocks.ravel()] = 1
    out = np.zeros((b, k + 1), dtype=np.int64)
    for start in range(0, b, chunk):
        m = (inc[start:start + chunk] @ inc.T).astype(np.int64)
        for s in range(k + 1):
            out[start:start + chunk, s] = (m == s).sum(axis=1)
    return out


@dataclass
class _Leaf:
    path: tuple[int, ...]
    trace: list
    cert: bytes
    labels: np.ndarray


def _cmp(a: list, b: list) -> int:
    for x, y in zip(a, b):
        if x != y:
            return -1 if x < y else 1
    return 1 if len(a) > len(b) else 0


class _Search:
    def __init__(self, d: Design, hist: np.ndarray | None = None):
        self.v = d.v
        self.b = d.b
        self.k_base = d.k + 1
        self.blocks = np.asarray(d.blocks, dtype=np.int64) - 1
        self.inc_blk = np.repeat(np.arange(self.b), d.k)
        self.inc_pt = self.blocks.ravel()
        self.autos: list[np.ndarray] = []
        self.first: _Leaf | None = None
        self.best: _Leaf | None = None
        self.leaves = 0
        self.nodes = 0

        # initial colour: replication number and the pencil's intersection profile
        if hist is None:
            hist = block_intersection_histograms(d)
        prof = np.zeros((self.v, d.k + 1), dtype=np.int64)
        np.add.at(prof, self.inc_pt, hist[self.inc_blk])
        reps = np.bincount(self.inc_pt, minlength=self.v)
        sig = np.column_stack([reps, prof])
        keys, color = np.unique(sig, axis=0, return_inverse=True)
        self.root_trace = [(len(keys), _digest(keys))]
        self.root = color.reshape(-1)

    def refine(self, color: np.ndarray) -> tuple[np.ndarray, list]:
        trace = []
        v = self.v
        while True:
            nc = int(color.max()) + 1
            bsig = np.bincount(self.inc_blk * nc + color[self.inc_pt], minlength=self.b * nc).reshape(self.b, nc)
            if self.k_base ** nc < 2 ** 62:
                # mixed-radix code: integer order equals lexicographic row order
                code = bsig @ (self.k_base ** np.arange(nc - 1, -1, -1, dtype=np.int64))
                bkeys, binv, bcnt = np.unique(code, return_inverse=True, return_counts=True)
            else:
                bkeys, binv, bcnt = np.unique(bsig, axis=0, return_inverse=True, return_counts=True)
            binv = binv.reshape(-1)
            nb = len(bkeys)
            psig = np.bincount(self.inc_pt * nb + binv[self.inc_blk], minlength=v * nb).reshape(v, nb)
            rows = [(c,) + tuple(r) for c, r in zip(color.tolist(), psig.tolist())]
            pkeys = sorted(set(rows))
            trace.append((len(pkeys), _digest(bkeys, bcnt, np.array(pkeys))))
            if len(pkeys) == nc:
                return color, trace
            rank = {key: i for i, key in enumerate(pkeys)}
            color = np.array([rank[r] for r in rows])

    @staticmethod
    def individualize(color: np.ndarray, p: int) -> np.ndarray:
        c = color[p]
        new = color.copy()
        new[color >= c] += 1
        new[p] = c
        return new

    def run(self) -> _Leaf:
        color, trace = self.refine(self.root)
        self.search(color, (), self.root_trace + trace)
        return self.best

    def search(self, color: np.ndarray, path: tuple[int, ...], trace: list) -> int | None:
        self.nodes += 1
        if self.best is not None and _cmp(trace, self.best.trace) > 0:
            return None
        sizes = np.bincount(color)
        if sizes.max() == 1:
            return self.leaf(color, path, trace)
        nontrivial = np.flatnonzero(sizes > 1)
        target = nontrivial[np.argmin(sizes[nontrivial])]
        members = np.flatnonzero(color == target)
        explored: list[int] = []
        for w in members.tolist():
            if explored and self.same_orbit(w, explored, path):
                continue
            explored.append(w)
            child, tr = self.refine(self.individualize(color, w))
            jump = self.search(child, path + (w,), trace + tr)
            if jump is not None and jump < len(path):
                return jump
        return None

    def leaf(self, labels: np.ndarray, path: tuple[int, ...], trace: list) -> int | None:
        self.leaves += 1
        rel = np.sort(labels[self.blocks], axis=1)
        rel = rel[np.lexsort(rel.T[::-1])]
        cert = rel.astype(np.uint8).tobytes()
        leaf = _Leaf(path, trace, cert, labels)
        if self.first is None:
            self.first = self.best = leaf
            return None
        for ref in (self.first, self.best):
            if ref.cert == cert and ref.trace == trace:
                inv = np.empty_like(labels)
                inv[labels] = np.arange(self.v)
                self.autos.append(inv[ref.labels])
                return next(i for i, (a, b) in enumerate(zip(path, ref.path)) if a != b)
        if (trace, cert) < (self.best.trace, self.best.cert):
            self.best = leaf
        return None

    def same_orbit(self, w: int, explored: list[int], path: tuple[int, ...]) -> bool:
        gens = [g for g in self.autos if all(g[p] == p for p in path)]
        if not gens:
            return False
        parent = list(range(self.v))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in gens:
            for x, y in enumerate(g.tolist()):
                a, b = find(x), find(y)
                if a != b:
                    parent[a] = b
        roots = {find(e) for e in explored}
        return find(w) in roots


def _digest(*arrays: np.ndarray) -> int:
    h = hashlib.blake2b(digest_size=8)
    for a in arrays:
        a = np.ascontiguousarray(a, dtype=np.int64)
        h.update(np.asarray(a.shape, dtype=np.int64).tobytes())
        h.update(a.tobytes())
    return int.from_bytes(h.digest(), "big")


def canonical_form(d: Design, _hist: np.ndarray | None = None) -> CanonicalForm:
    if d.v > MAX_POINTS:
        raise ValidationError(f"canonical labeling supports at most {MAX_POINTS} points, got {d.v}")
    best = _Search(d, _hist).run()
    rel = np.frombuffer(best.cert, dtype=np.uint8).reshape(d.b, d.k).astype(int) + 1
    return CanonicalForm(
        relabeled_blocks=tuple(tuple(r) for r in rel.tolist()),
        certificate=Permutation((best.labels + 1).tolist()),
        v=d.v,
    )


def search_stats(d: Design) -> dict[str, int]:
    """Node, leaf and automorphism counts of one canonical-labeling run."""
    s = _Search(d)
    s.run()
    return {"nodes": s.nodes, "leaves": s.leaves, "automorphisms": len(s.autos)}


def is_isomorphic(d1: Design, d2: Design) -> bool:
    if (d1.v, d1.k, d1.b) != (d2.v, d2.k, d2.b):
        return False
    return canonical_form(d1) == canonical_form(d2)


def lambda3(d: Design) -> int | None:
    """``lambda`` if the design is a 3-design, else ``None``."""
    if d.k < 3:
        return None
    try:
        return verify_design(d, 3).lam
    except NotADesignError:
        return None


def cheap_invariants(d: Design, hist: np.ndarray | None = None) -> tuple:
    if hist is None:
        hist = block_intersection_histograms(d)
    return (d.b, lambda3(d), tuple(hist.sum(axis=0).tolist()))


def iso_classes(ds: Sequence[Design]) -> list[list[int]]:
    """Partition design indices into isomorphism classes, ordered by least index."""
    if not ds:
        return []
    vk = {(d.v, d.k) for d in ds}
    if len(vk) > 1:
        raise ValidationError(f"designs have mixed (v, k): {sorted(vk)}")
    buckets: dict[tuple, list[int]] = defaultdict(list)
    hists = {}
    for i, d in enumerate(ds):
        hists[i] = block_intersection_histograms(d)
        buckets[cheap_invariants(d, hists[i])].append(i)
    classes: list[list[int]] = []
    for idx in buckets.values():
        if len(idx) == 1:
            classes.append(idx)
            continue
        by_form: dict[CanonicalForm, list[int]] = {}
        for i in idx:
            by_form.setdefault(canonical_form(ds[i], hists[i]), []).append(i)
        classes.extend(by_form.values())
    return sorted(classes, key=min)
