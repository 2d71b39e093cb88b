"""Weyl groups as signed permutations of the positive roots.

An element is stored as a tuple ``signed_images`` where entry ``k`` is
``+(j+1)`` if it maps the k-th positive root to the j-th positive root and
``-(j+1)`` if it maps it to minus the j-th positive root.  The encoding is
unique per element, so subgroup and double-coset computations are plain set
operations, and the length function is the count of negative entries.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .errors import ContractError, ResourceLimitError
from .rootdata import (
    Coords,
    RootSystem,
    add_coords,
    levi_root_indices,
    mask_indices,
    validate_mask,
    zero_coords,
)

DEFAULT_WEYL_CAP = 1 << 20

SignedImages = tuple[int, ...]


@dataclass(frozen=True)
class WeylElement:
    signed_images: SignedImages
    length: int

    @property
    def is_identity(self) -> bool:
        return self.length == 0

    def image_of_root(self, k: int) -> tuple[int, int]:
        """Index and sign of the image of the k-th positive root."""
        s = self.signed_images[k]
        return (abs(s) - 1, 1 if s > 0 else -1)


def _length_of(images: SignedImages) -> int:
    return sum(1 for s in images if s < 0)


def _identity_images(n: int) -> SignedImages:
    return tuple(range(1, n + 1))


def compose_images(u: SignedImages, v: SignedImages) -> SignedImages:
    """Signed images of u∘v (apply v first, then u)."""
    out = []
    for sv in v:
        su = u[abs(sv) - 1]
        out.append(su if sv > 0 else -su)
    return tuple(out)


def _element(images: SignedImages) -> WeylElement:
    return WeylElement(images, _length_of(images))


@lru_cache(maxsize=None)
def _simple_reflection_images(rs: RootSystem, i: int) -> SignedImages:
    index = {coords: k for k, coords in enumerate(rs.positive_roots)}
    out = []
    for coords in rs.positive_roots:
        image = rs.reflect(coords, i)
        if image in index:
            out.append(index[image] + 1)
        else:
            neg = tuple(-c for c in image)
            if neg not in index:
                raise ContractError(f"reflection s_{i} left the root system")
            out.append(-(index[neg] + 1))
    return tuple(out)


def simple_reflection(rs: RootSystem, i: int) -> WeylElement:
    return _element(_simple_reflection_images(rs, i))


def _closure(rs: RootSystem, generator_images: tuple[SignedImages, ...],
             cap: int) -> tuple[WeylElement, ...]:
    identity = _identity_images(rs.num_positive)
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for w in frontier:
            for g in generator_images:
                gw = compose_images(g, w)
                if gw not in seen:
                    if len(seen) >= cap:
                        raise ResourceLimitError(
                            f"Weyl enumeration for {rs.type_name()} exceeds cap {cap}"
                            f" (at least {len(seen) + 1} elements)")
                    seen.add(gw)
                    nxt.append(gw)
        frontier = nxt
    elements = sorted((_element(im) for im in seen),
                      key=lambda w: (w.length, w.signed_images))
    return tuple(elements)


@lru_cache(maxsize=None)
def generate_weyl(rs: RootSystem, cap: int = DEFAULT_WEYL_CAP) -> tuple[WeylElement, ...]:
    """The full Weyl group, identity first, sorted by length."""
    gens = tuple(_simple_reflection_images(rs, i) for i in range(rs.rank))
    return _closure(rs, gens, cap)


@lru_cache(maxsize=None)
def parabolic_subgroup(rs: RootSystem, levi: int,
                       cap: int = DEFAULT_WEYL_CAP) -> tuple[WeylElement, ...]:
    """Subgroup generated by the reflections of the subset ``levi``."""
    validate_mask(levi, rs.rank)
    gens = tuple(_simple_reflection_images(rs, i) for i in mask_indices(levi))
    return _closure(rs, gens, cap)


# ---------------------------------------------------------------------------
# double cosets and the character exponents of their strata


@dataclass(frozen=True)
class DoubleCosetRep:
    """Minimal-length representative of a parabolic double coset, together
    with the exponent vectors of the two modulus characters attached to its
    stratum and the Levi subset it lands in."""

    w: WeylElement
    I: int
    J: int
    length: int
    gamma_exp: Coords
    delta_exp: Coords
    levi: int


def gamma_exponents(rs: RootSystem, w: WeylElement, I: int, J: int) -> Coords:
    """Sum of the positive roots outside the J-Levi that w sends to negative
    roots outside the (negated) I-Levi."""
    phi_j = levi_root_indices(rs, J)
    phi_i = levi_root_indices(rs, I)
    total = zero_coords(rs.rank)
    for k in range(rs.num_positive):
        if k in phi_j:
            continue
        j, sign = w.image_of_root(k)
        if sign < 0 and j not in phi_i:
            total = add_coords(total, rs.positive_roots[k])
    return total


def delta_exponents(rs: RootSystem, w: WeylElement, I: int, J: int) -> Coords:
    """Sum of the J-Levi positive roots that w keeps positive outside the
    I-Levi."""
    phi_j = levi_root_indices(rs, J)
    phi_i = levi_root_indices(rs, I)
    total = zero_coords(rs.rank)
    for k in phi_j:
        j, sign = w.image_of_root(k)
        if sign > 0 and j not in phi_i:
            total = add_coords(total, rs.positive_roots[k])
    return total


def intersect_levi(rs: RootSystem, w: WeylElement, I: int, J: int) -> int:
    """The subset of J whose simple roots w carries into I (as simple roots).

    Defined for minimal-length double-coset representatives only; for those,
    any beta in J landing inside the I-Levi must land on a simple root.
    """
    phi_i = levi_root_indices(rs, I)
    out = 0
    for b in mask_indices(J):
        j, sign = w.image_of_root(b)
        if sign < 0:
            raise ContractError(
                f"w(alpha_{b}) is negative; not a minimal double-coset representative")
        if j in phi_i:
            if j >= rs.rank:
                raise ContractError(
                    f"w(alpha_{b}) lies in the I-Levi but is not simple; "
                    "not a minimal double-coset representative")
            out |= 1 << j
    return out


def kostant_reps(rs: RootSystem, I: int, J: int,
                 elements: tuple[WeylElement, ...] | None = None) -> tuple[DoubleCosetRep, ...]:
    """One minimal-length representative per (W_I, W_J) double coset,
    sorted by length.  The cosets are checked to partition the group and the
    minimal-length element of each coset is checked to be unique."""
    validate_mask(I, rs.rank)
    validate_mask(J, rs.rank)
    group = elements if elements is not None else generate_weyl(rs)
    left = [x.signed_images for x in parabolic_subgroup(rs, I)]
    right = [y.signed_images for y in parabolic_subgroup(rs, J)]

    seen: set[SignedImages] = set()
    reps = []
    covered = 0
    for w in group:  # ascending length, so w is minimal in its coset
        if w.signed_images in seen:
            continue
        coset = {compose_images(x, compose_images(w.signed_images, y))
                 for x in left for y in right}
        seen |= coset
        covered += len(coset)
        minimal = [im for im in coset if _length_of(im) == w.length]
        if len(minimal) != 1:
            raise ContractError(
                f"double coset of length {w.length} in {rs.type_name()} has "
                f"{len(minimal)} minimal elements; expected a unique one")
        reps.append(DoubleCosetRep(
            w=w, I=I, J=J, length=w.length,
            gamma_exp=gamma_exponents(rs, w, I, J),
            delta_exp=delta_exponents(rs, w, I, J),
            levi=intersect_levi(rs, w, I, J),
        ))
    if covered != len(group):
        raise ContractError("double cosets do not partition the Weyl group")
    return tuple(reps)


# ---------------------------------------------------------------------------
# optional binary cache, one file per (series, rank)

_CACHE_MAGIC = b"WGC1"


def weyl_cache_path(cache_dir: str | Path, series: str, rank: int) -> Path:
    return Path(cache_dir) / f"weyl_{series}{rank}.bin"


def save_weyl_cache(rs: RootSystem, elements: tuple[WeylElement, ...],
                    cache_dir: str | Path) -> Path:
    path = weyl_cache_path(cache_dir, rs.series, rs.rank)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = rs.num_positive
    buf = [_CACHE_MAGIC,
           struct.pack("<cBII", rs.series.encode(), rs.rank, n, len(elements))]
    for w in elements:
        buf.append(struct.pack(f"<I{n}i", w.length, *w.signed_images))
    path.write_bytes(b"".join(buf))
    return path


def load_weyl_cache(rs: RootSystem, cache_dir: str | Path) -> tuple[WeylElement, ...] | None:
    """Load the cached group; returns None on a missing file or any header
    mismatch (the cache is then simply recomputed)."""
    path = weyl_cache_path(cache_dir, rs.series, rs.rank)
    try:
        raw = path.read_bytes()
    except OSError:
        return None
    header = struct.calcsize("<cBII")
    if len(raw) < 4 + header or raw[:4] != _CACHE_MAGIC:
        return None
    series, rank, n, count = struct.unpack_from("<cBII", raw, 4)
    if series.decode() != rs.series or rank != rs.rank or n != rs.num_positive:
        return None
    record = struct.calcsize(f"<I{n}i")
    if len(raw) != 4 + header + count * record:
        return None
    elements = []
    offset = 4 + header
    for _ in range(count):
        fields = struct.unpack_from(f"<I{n}i", raw, offset)
        offset += record
        elements.append(WeylElement(tuple(fields[1:]), fields[0]))
    return tuple(elements)


def load_or_generate(rs: RootSystem, cache_dir: str | Path | None,
                     cap: int = DEFAULT_WEYL_CAP) -> tuple[WeylElement, ...]:
    if cache_dir is None:
        return generate_weyl(rs, cap)
    cached = load_weyl_cache(rs, cache_dir)
    if cached is not None:
        return cached
    elements = generate_weyl(rs, cap)
    save_weyl_cache(rs, elements, cache_dir)
    return elements


def permutes_roots(rs: RootSystem, w: WeylElement) -> bool:
    """Check that the stored signed images really permute the root set and
    that the stored length matches the root action."""
    images = [abs(s) - 1 for s in w.signed_images]
    return sorted(images) == list(range(rs.num_positive)) and \
        w.length == _length_of(w.signed_images)
