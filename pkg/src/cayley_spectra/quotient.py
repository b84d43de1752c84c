"""Normal subgroups of G_k and the coset partition of the Cayley tree.

Finite-index normal subgroups are given as kernels of homomorphisms into a
permutation group: any assignment of involutions to the generators extends to
such a homomorphism.  Cosets of the kernel correspond to elements of the image,
which is enumerated by closure.

The infinite-index kernel of the projection onto two generators {m1, m2} is
handled separately by :class:`ZProjection`; its cosets are indexed by the
integers.
"""

from __future__ import annotations

import re
from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .group import GroupError, GroupParams, ReducedWord, _check_index, neighbors, reduce

DEFAULT_MAX_IMAGE = 10**4

Perm = tuple[int, ...]  # 0-based images: p[i] is where point i goes


class PartitionError(ValueError):
    pass


class ImageTooLargeError(PartitionError):
    pass


def perm_identity(m: int) -> Perm:
    return tuple(range(m))


def perm_mul(p: Perm, q: Perm) -> Perm:
    """Apply p, then q."""
    return tuple(q[i] for i in p)


def parse_cycles(text: str, m: int) -> Perm:
    """Parse cycle notation on points 1..m, e.g. ``"(1 2)(3 4)"`` or ``"id"``."""
    text = text.strip()
    img = list(range(m))
    if text in ("id", "()", "e", ""):
        return tuple(img)
    if not re.fullmatch(r"(\(\s*\d+(?:[\s,]+\d+)*\s*\)\s*)+", text):
        raise PartitionError(f"malformed cycle notation {text!r}")
    seen: set[int] = set()
    for body in re.findall(r"\(([^)]*)\)", text):
        pts = [int(t) for t in re.split(r"[\s,]+", body.strip())]
        for p in pts:
            if not 1 <= p <= m:
                raise PartitionError(f"point {p} outside 1..{m} in {text!r}")
            if p in seen:
                raise PartitionError(f"point {p} repeated in {text!r}")
            seen.add(p)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a - 1] = b - 1
    return tuple(img)


def format_cycles(p: Perm) -> str:
    seen = set()
    parts = []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        j = p[start]
        while j != start:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        parts.append("(" + " ".join(str(c + 1) for c in cyc) + ")")
    return "".join(parts) or "id"


@dataclass(frozen=True)
class InvolutiveHom:
    """Homomorphism G_k -> Sym(m) fixed by the images of the generators."""

    k: int
    m: int
    images: tuple[Perm, ...]

    def __post_init__(self) -> None:
        GroupParams(self.k)
        if self.m < 1:
            raise PartitionError("permutation degree m must be >= 1")
        if len(self.images) != self.k + 1:
            raise PartitionError(
                f"need {self.k + 1} generator images, got {len(self.images)}"
            )
        ident = perm_identity(self.m)
        for i, p in enumerate(self.images, start=1):
            if sorted(p) != list(ident):
                raise PartitionError(f"image of a{i} is not a permutation of 1..{self.m}")
            if perm_mul(p, p) != ident:
                raise PartitionError(f"image of a{i} is not an involution: {format_cycles(p)}")

    @classmethod
    def from_cycles(cls, k: int, m: int, images: Sequence[str]) -> InvolutiveHom:
        return cls(k, m, tuple(parse_cycles(s, m) for s in images))

    def image_of(self, x: ReducedWord) -> Perm:
        if x.k != self.k:
            raise GroupError(f"word over k={x.k} used with homomorphism over k={self.k}")
        p = perm_identity(self.m)
        for i in x.letters:
            p = perm_mul(p, self.images[i - 1])
        return p

    def to_dict(self) -> dict:
        return {"k": self.k, "m": self.m, "images": [format_cycles(p) for p in self.images]}


@dataclass(frozen=True)
class CosetPartition:
    """Cosets of ker(hom) with the neighbour-count matrix Q.

    ``cosets[i]`` is the image-group element labelling coset i; coset 0 is the
    kernel itself.  ``Q[i, j]`` counts the neighbours of a vertex of coset i
    lying in coset j.
    """

    hom: InvolutiveHom
    cosets: tuple[Perm, ...]
    representatives: tuple[ReducedWord, ...]
    Q: np.ndarray = field(compare=False, repr=False)
    name: str = "custom"
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def r(self) -> int:
        return len(self.cosets)

    @property
    def k(self) -> int:
        return self.hom.k

    def coset_of(self, x: ReducedWord) -> int:
        return self._index[self.hom.image_of(x)]

    label = coset_of

    def q_vector_of_word(self, x: ReducedWord) -> np.ndarray:
        counts = np.zeros(self.r, dtype=np.int64)
        for y in neighbors(x):
            counts[self.coset_of(y)] += 1
        return counts

    @property
    def q_h0(self) -> np.ndarray:
        return self.Q[0].copy()

    @property
    def n_h0(self) -> int:
        return int(np.count_nonzero(self.Q[0]))


def image_closure(hom: InvolutiveHom, cap: int = DEFAULT_MAX_IMAGE) -> tuple[list[Perm], list[ReducedWord]]:
    """Breadth-first enumeration of the image group, identity first.

    Returns the image elements and, for each, a reduced word mapping to it.
    """
    ident = perm_identity(hom.m)
    elems = [ident]
    reps = [ReducedWord((), hom.k)]
    seen = {ident: 0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        g, w = elems[i], reps[i]
        for m, a in enumerate(hom.images, start=1):
            h = perm_mul(g, a)
            if h in seen:
                continue
            if len(elems) >= cap:
                raise ImageTooLargeError(f"image group exceeds cap of {cap} elements")
            seen[h] = len(elems)
            elems.append(h)
            reps.append(reduce(w.letters + (m,), hom.k))
            queue.append(seen[h])
    return elems, reps


def q_matrix(hom: InvolutiveHom, cosets: Sequence[Perm]) -> np.ndarray:
    index = {g: i for i, g in enumerate(cosets)}
    r = len(cosets)
    Q = np.zeros((r, r), dtype=np.int64)
    for i, g in enumerate(cosets):
        for a in hom.images:
            Q[i, index[perm_mul(g, a)]] += 1
    return Q


def build_partition(hom: InvolutiveHom, name: str = "custom", cap: int = DEFAULT_MAX_IMAGE) -> CosetPartition:
    elems, reps = image_closure(hom, cap)
    Q = q_matrix(hom, elems)
    Q.setflags(write=False)
    return CosetPartition(
        hom=hom,
        cosets=tuple(elems),
        representatives=tuple(reps),
        Q=Q,
        name=name,
        _index={g: i for i, g in enumerate(elems)},
    )


# catalog ---------------------------------------------------------------------

def catalog_trivial(k: int) -> InvolutiveHom:
    return InvolutiveHom(k, 1, tuple((0,) for _ in range(k + 1)))


def catalog_h_A(k: int, A: Sequence[int]) -> InvolutiveHom:
    """Index-2 kernel: words with an even number of letters from A."""
    A = set(A)
    if not A:
        raise PartitionError("A must be nonempty")
    for i in A:
        _check_index(i, k)
    swap, ident = (1, 0), (0, 1)
    return InvolutiveHom(k, 2, tuple(swap if i in A else ident for i in range(1, k + 2)))


def catalog_even(k: int) -> InvolutiveHom:
    return catalog_h_A(k, range(1, k + 2))


def catalog_h_pair(k: int, i: int, j: int) -> InvolutiveHom:
    """Index-6 kernel onto Sym(3) that excludes a_i a_j."""
    _check_index(i, k)
    _check_index(j, k)
    if i == j:
        raise PartitionError("h_pair needs two distinct generators")
    images = []
    for m in range(1, k + 2):
        if m == i:
            images.append(parse_cycles("(1 2)", 3))
        elif m == j:
            images.append(parse_cycles("(2 3)", 3))
        else:
            images.append(perm_identity(3))
    return InvolutiveHom(k, 3, tuple(images))


def catalog_hcap(k: int, i: int = 1, j: int = 2) -> InvolutiveHom:
    """H_{i} ∩ H_{j}: both letter counts even.  Index 4, Klein four image."""
    _check_index(i, k)
    _check_index(j, k)
    if i == j:
        raise PartitionError("hcap needs two distinct generators")
    images = []
    for m in range(1, k + 2):
        if m == i:
            images.append(parse_cycles("(1 2)(3 4)", 4))
        elif m == j:
            images.append(parse_cycles("(1 3)(2 4)", 4))
        else:
            images.append(perm_identity(4))
    return InvolutiveHom(k, 4, tuple(images))


def _parse_index_list(body: str, k: int) -> list[int]:
    try:
        out = [int(t) for t in body.split(",") if t.strip()]
    except ValueError:
        raise PartitionError(f"bad generator list {body!r}") from None
    for i in out:
        _check_index(i, k)
    return out


def catalog_hom(name: str, k: int) -> InvolutiveHom:
    """Resolve a finite-index catalog name to its homomorphism."""
    name = name.strip()
    head, _, body = name.partition(":")
    if head == "trivial" and not body:
        return catalog_trivial(k)
    if head == "even" and not body:
        return catalog_even(k)
    if head == "hA":
        return catalog_h_A(k, _parse_index_list(body, k))
    if head == "hpair":
        idx = _parse_index_list(body, k)
        if len(idx) != 2:
            raise PartitionError(f"hpair needs two indices, got {name!r}")
        return catalog_h_pair(k, *idx)
    if head == "hcap":
        idx = _parse_index_list(body, k) if body else [1, 2]
        if len(idx) != 2:
            raise PartitionError(f"hcap needs two indices, got {name!r}")
        return catalog_hcap(k, *idx)
    raise PartitionError(f"unknown finite-index subgroup {name!r}")


def catalog_partition(name: str, k: int) -> CosetPartition:
    return build_partition(catalog_hom(name, k), name=name)


def catalog_names(k: int) -> list[str]:
    """Every finite-index catalog entry for order k."""
    gens = range(1, k + 2)
    names = ["trivial", "even"]
    for size in range(1, k + 2):
        for A in combinations(gens, size):
            names.append("hA:" + ",".join(map(str, A)))
    for i, j in combinations(gens, 2):
        names.append(f"hpair:{i},{j}")
    names.append("hcap")
    return names


# infinite index ----------------------------------------------------------------

@dataclass(frozen=True)
class ZProjection:
    """Kernel of the projection deleting every generator outside {m1, m2}."""

    k: int
    m1: int
    m2: int

    def __post_init__(self) -> None:
        GroupParams(self.k)
        _check_index(self.m1, self.k)
        _check_index(self.m2, self.k)
        if not self.m1 < self.m2:
            raise PartitionError("ZProjection needs m1 < m2")

    @classmethod
    def parse(cls, name: str, k: int) -> ZProjection:
        head, _, body = name.strip().partition(":")
        if head != "zM":
            raise PartitionError(f"not an infinite-index spec: {name!r}")
        idx = _parse_index_list(body, k) if body else [1, 2]
        if len(idx) != 2:
            raise PartitionError("zM takes exactly two generators (|M| = 2)")
        a, b = sorted(idx)
        return cls(k, a, b)

    @property
    def name(self) -> str:
        return f"zM:{self.m1},{self.m2}"

    def project(self, x: ReducedWord) -> tuple[int, ...]:
        kept = [i for i in x.letters if i in (self.m1, self.m2)]
        return reduce(kept, self.k).letters

    def z_coset_index(self, x: ReducedWord) -> int:
        if x.k != self.k:
            raise GroupError(f"word over k={x.k} used with projection over k={self.k}")
        p = self.project(x)
        if not p:
            return 0
        return len(p) if p[0] == self.m1 else -len(p)

    label = z_coset_index

    def z_neighbor_profile(self, x: ReducedWord) -> Counter:
        return Counter(self.z_coset_index(y) for y in neighbors(x))


def is_infinite_spec(name: str) -> bool:
    return name.strip().startswith("zM")
