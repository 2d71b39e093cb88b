"""Exact homological linear algebra over the integers.

Matrices carry arbitrary-precision integer entries: Smith normal form can
blow up intermediate values far past machine width, and a silently wrapped
divisor would corrupt every torsion answer downstream.  All complexes use the
cohomological (left-to-right) indexing ``differentials[k]: degree k -> k+1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Callable

from .errors import ConfigurationError, ContractError
from .rootdata import RootSystem, full_mask, mask_indices, mask_size, mask_str, validate_mask
from .ringcond import RingSpec

# ---------------------------------------------------------------------------
# integer matrices


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]  # row-major

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0 or len(self.entries) != self.rows * self.cols:
            raise ContractError("matrix shape does not match its entry count")

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def from_rows(cls, rows) -> "IntMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ContractError("ragged rows")
        return cls(len(rows), ncols, tuple(x for r in rows for x in r))

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(self.entry(i, j) for j in range(self.cols) for i in range(self.rows)))

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ContractError("matrix product shape mismatch")
        a, b = self.to_rows(), other.to_rows()
        out = []
        for i in range(self.rows):
            ai = a[i]
            for j in range(other.cols):
                out.append(sum(ai[k] * b[k][j] for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)


# ---------------------------------------------------------------------------
# Smith normal form with unimodular transforms


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


@dataclass(frozen=True)
class SmithForm:
    divisors: tuple[int, ...]
    u: IntMatrix  # rows x rows, unimodular
    v: IntMatrix  # cols x cols, unimodular

    @property
    def rank(self) -> int:
        return len(self.divisors)


def smith_normal_form(m: IntMatrix) -> SmithForm:
    """Diagonalize ``u * m * v = diag(divisors)`` with positive divisors in a
    divisibility chain and unimodular transforms built from elementary ops."""
    nr, nc = m.rows, m.cols
    d = m.to_rows()
    u = IntMatrix.identity(nr).to_rows()
    v = IntMatrix.identity(nc).to_rows()

    def row_combine(r1: int, r2: int, a: int, b: int, c: int, e: int) -> None:
        # (row r1, row r2) <- (a*r1 + b*r2, c*r1 + e*r2); a*e - b*c = ±1
        for mat in (d, u):
            m1, m2 = mat[r1], mat[r2]
            for k in range(len(m1)):
                m1[k], m2[k] = a * m1[k] + b * m2[k], c * m1[k] + e * m2[k]

    def col_combine(c1: int, c2: int, a: int, b: int, c: int, e: int) -> None:
        for mat in (d, v):
            for row in mat:
                row[c1], row[c2] = a * row[c1] + b * row[c2], c * row[c1] + e * row[c2]

    def clear_col_entry(t: int, i: int) -> None:
        a, b = d[t][t], d[i][t]
        if b == 0:
            return
        if a != 0 and b % a == 0:
            row_combine(t, i, 1, 0, -(b // a), 1)
        else:
            g, x, y = _xgcd(a, b)
            row_combine(t, i, x, y, -(b // g), a // g)

    def clear_row_entry(t: int, j: int) -> None:
        a, b = d[t][t], d[t][j]
        if b == 0:
            return
        if a != 0 and b % a == 0:
            col_combine(t, j, 1, 0, -(b // a), 1)
        else:
            g, x, y = _xgcd(a, b)
            col_combine(t, j, x, y, -(b // g), a // g)

    t = 0
    while t < min(nr, nc):
        pivot = None
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                val = abs(d[i][j])
                if val and (best is None or val < best):
                    best, pivot = val, (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != t:
            d[t], d[pi] = d[pi], d[t]
            u[t], u[pi] = u[pi], u[t]
        if pj != t:
            for mat in (d, v):
                for row in mat:
                    row[t], row[pj] = row[pj], row[t]
        while True:
            for i in range(t + 1, nr):
                clear_col_entry(t, i)
            if any(d[t][j] for j in range(t + 1, nc)):
                for j in range(t + 1, nc):
                    clear_row_entry(t, j)
            if any(d[i][t] for i in range(t + 1, nr)):
                continue
            # pivot must divide the whole trailing block for the chain property
            offender = None
            p = d[t][t]
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if d[i][j] % p:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            for k in range(nc):
                d[t][k] += d[offender][k]
            for k in range(nr):
                u[t][k] += u[offender][k]
        if d[t][t] < 0:
            for k in range(nc):
                d[t][k] = -d[t][k]
            for k in range(nr):
                u[t][k] = -u[t][k]
        t += 1

    divisors = [d[i][i] for i in range(t)]
    for a, b in zip(divisors, divisors[1:]):
        if b % a:
            raise ContractError("Smith normal form lost the divisibility chain")
    return SmithForm(tuple(divisors), IntMatrix.from_rows(u) if nr else IntMatrix.zero(0, 0),
                     IntMatrix.from_rows(v) if nc else IntMatrix.zero(0, 0))


def integer_rank(m: IntMatrix) -> int:
    return smith_normal_form(m).rank


# ---------------------------------------------------------------------------
# chain complexes


@dataclass(frozen=True)
class ChainComplex:
    """Graded free modules with integer differentials, ``differentials[k]``
    mapping degree-k chains to degree-(k+1) chains."""

    ranks: tuple[int, ...]
    differentials: tuple[IntMatrix, ...]
    labels: tuple[tuple[str, ...], ...] = field(default=())

    def __post_init__(self):
        if len(self.differentials) != max(len(self.ranks) - 1, 0):
            raise ContractError("differential count does not match the grading")
        for k, dk in enumerate(self.differentials):
            if (dk.rows, dk.cols) != (self.ranks[k + 1], self.ranks[k]):
                raise ContractError(f"differential {k} has shape {dk.rows}x{dk.cols}, "
                                    f"expected {self.ranks[k + 1]}x{self.ranks[k]}")
        for k in range(len(self.differentials) - 1):
            if not self.differentials[k + 1].mul(self.differentials[k]).is_zero():
                raise ContractError(f"d_{k + 1} d_{k} != 0 (sign rule or map rule is wrong)")
        if self.labels and len(self.labels) != len(self.ranks):
            raise ContractError("label count does not match the grading")

    @property
    def top_degree(self) -> int:
        return len(self.ranks) - 1

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * r for k, r in enumerate(self.ranks))


def complex_to_json_dict(c: ChainComplex) -> dict:
    return {
        "ranks": list(c.ranks),
        "differentials": [list(d.entries) for d in c.differentials],
        "labels": [list(l) for l in c.labels] if c.labels else [],
    }


def reverse_transpose(c: ChainComplex) -> ChainComplex:
    """The complex read right-to-left with transposed maps, as produced by
    applying a contravariant functor degreewise."""
    m = c.top_degree
    ranks = tuple(reversed(c.ranks))
    diffs = tuple(c.differentials[m - 1 - u].transpose() for u in range(m))
    labels = tuple(reversed(c.labels)) if c.labels else ()
    return ChainComplex(ranks, diffs, labels)


@dataclass(frozen=True)
class HomologyResult:
    """Per-degree description: free rank over the coefficient ring plus the
    moduli of the non-free cyclic summands."""

    free_ranks: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]

    def piece(self, k: int) -> tuple[int, tuple[int, ...]]:
        return self.free_ranks[k], self.torsion[k]

    def is_trivial(self) -> bool:
        return not any(self.free_ranks) and not any(self.torsion)

    def nonzero_degrees(self) -> tuple[int, ...]:
        return tuple(k for k in range(len(self.free_ranks))
                     if self.free_ranks[k] or self.torsion[k])

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * r for k, r in enumerate(self.free_ranks))


def homology_over_Z(c: ChainComplex) -> HomologyResult:
    n = len(c.ranks)
    snfs = [smith_normal_form(d) for d in c.differentials]
    free = []
    torsion = []
    for k in range(n):
        out_rank = snfs[k].rank if k < n - 1 else 0
        in_snf = snfs[k - 1] if k > 0 else None
        in_rank = in_snf.rank if in_snf else 0
        free.append(c.ranks[k] - out_rank - in_rank)
        torsion.append(tuple(x for x in (in_snf.divisors if in_snf else ()) if x > 1))
    return HomologyResult(tuple(free), tuple(torsion))


def _prime_powers(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            power = 1
            while n % p == 0:
                n //= p
                power *= p
            out.append(power)
        p += 1
    if n > 1:
        out.append(n)
    return out


def _prime_of(power: int) -> int:
    p = 2
    while power % p:
        p += 1
    return p


def _invariant_factors(moduli: list[int]) -> list[int]:
    """Canonical invariant-factor form (largest first) of a direct sum of
    cyclic groups; moduli of 1 disappear, coprime factors merge."""
    per_prime: dict[int, list[int]] = {}
    for m in moduli:
        for power in _prime_powers(m):
            per_prime.setdefault(_prime_of(power), []).append(power)
    for powers in per_prime.values():
        powers.sort(reverse=True)
    factors = []
    while any(per_prime.values()):
        factor = 1
        for powers in per_prime.values():
            if powers:
                factor *= powers.pop(0)
        factors.append(factor)
    return factors


def homology_with_coefficients(c: ChainComplex, spec: RingSpec) -> HomologyResult:
    """Homology over Q or Z/d.

    For Z/d the answer is assembled from the integer homology through the
    universal-coefficient splitting for complexes of free modules,
    ``H^k(C (x) Z/d) = H^k(C) (x) Z/d  (+)  Tor(H^{k+1}(C), Z/d)``:
    a cyclic integer summand Z/t contributes Z/gcd(t, d).  The collected
    cyclic pieces are normalized to invariant factors, so a summand counts
    toward the free rank exactly when its factor equals d itself.
    """
    if spec.d == 1:
        raise ConfigurationError("Z/1 is the zero ring; homology over it is degenerate")
    integral = homology_over_Z(c)
    if spec.is_rational:
        return HomologyResult(integral.free_ranks, tuple(() for _ in integral.free_ranks))

    from math import gcd
    n = len(c.ranks)
    free = []
    torsion = []
    for k in range(n):
        moduli = [spec.d] * integral.free_ranks[k]
        moduli += [gcd(t, spec.d) for t in integral.torsion[k]]
        if k + 1 < n:
            moduli += [gcd(t, spec.d) for t in integral.torsion[k + 1]]
        factors = _invariant_factors([m for m in moduli if m > 1])
        free.append(sum(1 for f in factors if f == spec.d))
        torsion.append(tuple(sorted(f for f in factors if f != spec.d)))
    return HomologyResult(tuple(free), tuple(torsion))


# ---------------------------------------------------------------------------
# subset-lattice complexes

RankFn = Callable[[int], int]
MapRule = Callable[[int, int], IntMatrix]


def lattice_degrees(rs: RootSystem, bottom: int) -> list[list[int]]:
    """Subsets between ``bottom`` and the full set, grouped by codimension
    ``|Delta \\ L|`` (= rank - |L|) and sorted within each degree."""
    validate_mask(bottom, rs.rank)
    free_bits = mask_indices(full_mask(rs.rank) & ~bottom)
    groups: list[list[int]] = [[] for _ in range(len(free_bits) + 1)]
    for extra in range(1 << len(free_bits)):
        mask = bottom
        for pos, bit in enumerate(free_bits):
            if extra >> pos & 1:
                mask |= 1 << bit
        groups[rs.rank - mask_size(mask)].append(mask)
    for g in groups:
        g.sort()
    return groups


def subset_lattice_complex(rs: RootSystem, bottom: int, coefficient_rank: RankFn,
                           map_rule: MapRule,
                           summand_label: Callable[[int, int], str] | None = None) -> ChainComplex:
    """Complex over the subsets ``bottom <= L <= Delta``, graded by
    ``|Delta \\ L|``, with the component from the L-summand to the
    (L minus beta)-summand signed by the 1-based position of beta in L.

    ``map_rule(L, beta)`` must return the unsigned block of shape
    ``coefficient_rank(L \\ beta) x coefficient_rank(L)``; the constructor
    asserts ``d d = 0`` and raises if the rule breaks the sign convention.
    """
    groups = lattice_degrees(rs, bottom)
    ranks_of: dict[int, int] = {}
    for group in groups:
        for mask in group:
            ranks_of[mask] = coefficient_rank(mask)
            if ranks_of[mask] < 0:
                raise ContractError("coefficient rank must be non-negative")

    offsets: list[dict[int, int]] = []
    ranks = []
    labels = []
    for group in groups:
        off: dict[int, int] = {}
        pos = 0
        degree_labels: list[str] = []
        for mask in group:
            off[mask] = pos
            r = ranks_of[mask]
            pos += r
            if summand_label is None:
                degree_labels.extend(f"L={mask_str(mask)}#{b}" for b in range(r))
            else:
                degree_labels.extend(summand_label(mask, b) for b in range(r))
        offsets.append(off)
        ranks.append(pos)
        labels.append(tuple(degree_labels))

    diffs = []
    for s in range(len(groups) - 1):
        block = [[0] * ranks[s] for _ in range(ranks[s + 1])]
        for mask in groups[s]:
            src_rank = ranks_of[mask]
            if src_rank == 0:
                continue
            members = mask_indices(mask)
            removable = [b for b in members if not bottom >> b & 1]
            for b in removable:
                target = mask & ~(1 << b)
                tgt_rank = ranks_of[target]
                component = map_rule(mask, b)
                if (component.rows, component.cols) != (tgt_rank, src_rank):
                    raise ContractError(
                        f"map rule for L={mask_str(mask)} minus alpha_{b} returned shape "
                        f"{component.rows}x{component.cols}, expected {tgt_rank}x{src_rank}")
                if tgt_rank == 0:
                    continue
                sign = -1 if members.index(b) % 2 == 0 else 1  # (-1)^(1-based position)
                r0 = offsets[s + 1][target]
                c0 = offsets[s][mask]
                for i in range(tgt_rank):
                    for j in range(src_rank):
                        val = component.entry(i, j)
                        if val:
                            block[r0 + i][c0 + j] += sign * val
        diffs.append(IntMatrix.from_rows(block) if ranks[s + 1] else IntMatrix.zero(0, ranks[s]))

    return ChainComplex(tuple(ranks), tuple(diffs), tuple(labels))


def exterior_row_complex(rs: RootSystem, bottom: int, t: int) -> ChainComplex:
    """Row complex of t-th exterior powers of the character lattices: the
    L-summand has one basis vector per t-subset of the complement of L, and
    each component map is the subset-inclusion matrix."""
    if t < 0:
        raise ConfigurationError("exterior power degree must be non-negative")
    delta = full_mask(rs.rank)

    def complement_subsets(mask: int) -> list[tuple[int, ...]]:
        return list(combinations(mask_indices(delta & ~mask), t))

    def rank_fn(mask: int) -> int:
        return comb(rs.rank - mask_size(mask), t)

    def rule(mask: int, beta: int) -> IntMatrix:
        src = complement_subsets(mask)
        tgt = complement_subsets(mask & ~(1 << beta))
        index = {s: i for i, s in enumerate(tgt)}
        rows = [[0] * len(src) for _ in range(len(tgt))]
        for j, s in enumerate(src):
            rows[index[s]][j] = 1
        return IntMatrix.from_rows(rows) if tgt else IntMatrix.zero(0, len(src))

    def label(mask: int, b: int) -> str:
        subset = complement_subsets(mask)[b]
        return f"L={mask_str(mask)}|w{{{','.join(map(str, subset))}}}"

    return subset_lattice_complex(rs, bottom, rank_fn, rule, label)
