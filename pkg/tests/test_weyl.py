import pytest

from steinberg_ext.errors import ContractError, ResourceLimitError
from steinberg_ext.rootdata import build_root_system, cartan_matrix, full_mask, parse_type
from steinberg_ext.weyl import (
    delta_exponents,
    gamma_exponents,
    generate_weyl,
    intersect_levi,
    kostant_reps,
    load_or_generate,
    load_weyl_cache,
    parabolic_subgroup,
    permutes_roots,
    save_weyl_cache,
    simple_reflection,
)

import oracles

SMALL_TYPES = ["A1", "A2", "A3", "B2", "B3", "C3", "G2"]


@pytest.mark.parametrize("name,order", [("A1", 2), ("A2", 6), ("B2", 8),
                                        ("A3", 24), ("B3", 48), ("C3", 48),
                                        ("G2", 12), ("F4", 1152)])
def test_group_orders(name, order):
    rs = build_root_system(*parse_type(name))
    group = generate_weyl(rs)
    assert len(group) == order
    assert group[0].is_identity


@pytest.mark.parametrize("name", ["A2", "B2", "G2"])
def test_order_matches_matrix_oracle(name):
    series, rank = parse_type(name)
    rs = build_root_system(series, rank)
    assert len(generate_weyl(rs)) == len(oracles.weyl_matrix_group(cartan_matrix(series, rank)))


def test_lengths_match_root_action():
    rs = build_root_system("B", 2)
    for w in generate_weyl(rs):
        assert permutes_roots(rs, w)
    # cross-check the length distribution against the matrix oracle
    series_lengths = sorted(w.length for w in generate_weyl(rs))
    cartan = cartan_matrix("B", 2)
    pos = oracles.positive_roots_oracle(cartan)
    oracle_lengths = sorted(oracles.matrix_length(m, pos)
                            for m in oracles.weyl_matrix_group(cartan))
    assert series_lengths == oracle_lengths


def test_enumeration_cap():
    rs = build_root_system("A", 3)
    with pytest.raises(ResourceLimitError):
        generate_weyl(rs, cap=10)


def test_parabolic_sizes():
    rs = build_root_system("A", 2)
    assert len(parabolic_subgroup(rs, 0)) == 1
    assert len(parabolic_subgroup(rs, 0b01)) == 2
    b2 = build_root_system("B", 2)
    assert parabolic_subgroup(b2, full_mask(2)) == generate_weyl(b2)


def test_kostant_examples():
    a2 = build_root_system("A", 2)
    reps = kostant_reps(a2, 0b01, 0b01)
    assert [r.length for r in reps] == [0, 1]

    a1 = build_root_system("A", 1)
    assert [r.length for r in kostant_reps(a1, 0, 0)] == [0, 1]
    assert len(kostant_reps(a1, 1, 1)) == 1

    for name in SMALL_TYPES:
        rs = build_root_system(*parse_type(name))
        assert len(kostant_reps(rs, full_mask(rs.rank), full_mask(rs.rank))) == 1


def test_kostant_counts_match_matrix_oracle():
    for name, I, J in [("A2", [0], [0]), ("A2", [0], [1]), ("B2", [1], [0, 1]),
                       ("A3", [0, 2], [1])]:
        series, rank = parse_type(name)
        rs = build_root_system(series, rank)
        cosets = oracles.double_coset_partition(cartan_matrix(series, rank), I, J)
        mask_i = sum(1 << i for i in I)
        mask_j = sum(1 << j for j in J)
        reps = kostant_reps(rs, mask_i, mask_j)
        assert len(reps) == len(cosets)


def test_double_cosets_partition_everything():
    # kostant_reps raises if the cosets fail to partition the group or if a
    # coset has a non-unique minimal element; sweeping all pairs exercises that
    for name in SMALL_TYPES:
        rs = build_root_system(*parse_type(name))
        full = full_mask(rs.rank)
        for I in range(full + 1):
            for J in range(full + 1):
                reps = kostant_reps(rs, I, J)
                assert [r.length for r in reps] == sorted(r.length for r in reps)
                assert reps[0].w.is_identity


def test_gamma_exponent_examples():
    a1 = build_root_system("A", 1)
    s = simple_reflection(a1, 0)
    assert gamma_exponents(a1, s, 0, 0) == (1,)

    a2 = build_root_system("A", 2)
    s1 = simple_reflection(a2, 1)
    assert gamma_exponents(a2, s1, 0b01, 0b01) == (0, 1)
    identity = generate_weyl(a2)[0]
    assert gamma_exponents(a2, identity, 0b11, 0b01) == (0, 0)


def test_delta_exponent_examples():
    a2 = build_root_system("A", 2)
    s1 = simple_reflection(a2, 1)
    assert delta_exponents(a2, s1, 0b01, 0b01) == (1, 0)
    identity = generate_weyl(a2)[0]
    assert delta_exponents(a2, identity, 0b11, 0b01) == (0, 0)
    for name in SMALL_TYPES:
        rs = build_root_system(*parse_type(name))
        w = generate_weyl(rs)[-1]
        assert delta_exponents(rs, w, 0b01, 0) == (0,) * rs.rank


def test_gamma_delta_match_matrix_action():
    # re-derive both exponent vectors from the matrix action on coordinates
    series, rank = "B", 2
    rs = build_root_system(series, rank)
    cartan = cartan_matrix(series, rank)
    positives = sorted(oracles.positive_roots_oracle(cartan))
    index = {v: k for k, v in enumerate(rs.positive_roots)}
    for w in generate_weyl(rs):
        matrix = tuple(zip(*[
            # column j: image of alpha_j read off the signed permutation
            _image_coords(rs, w, j) for j in range(rank)
        ]))
        for I in range(4):
            for J in range(4):
                gamma = [0] * rank
                delta = [0] * rank
                for v in positives:
                    image = oracles.mat_apply(matrix, v)
                    neg = all(x <= 0 for x in image)
                    in_j = all(c == 0 for i, c in enumerate(v) if not J >> i & 1)
                    image_abs = tuple(-x for x in image) if neg else image
                    in_i = all(c == 0 for i, c in enumerate(image_abs) if not I >> i & 1)
                    if not in_j and neg and not in_i:
                        for i, c in enumerate(v):
                            gamma[i] += c
                    if in_j and not neg and not in_i:
                        for i, c in enumerate(v):
                            delta[i] += c
                assert gamma_exponents(rs, w, I, J) == tuple(gamma)
                assert delta_exponents(rs, w, I, J) == tuple(delta)


def _image_coords(rs, w, j):
    k, sign = w.image_of_root(j)
    return tuple(sign * c for c in rs.positive_roots[k])


def test_gamma_zero_iff_identity():
    for name in SMALL_TYPES:
        rs = build_root_system(*parse_type(name))
        full = full_mask(rs.rank)
        for I in range(full + 1):
            for J in range(full + 1):
                for rep in kostant_reps(rs, I, J):
                    zero = rep.gamma_exp == (0,) * rs.rank
                    assert zero == rep.w.is_identity


def test_intersect_levi_examples():
    a2 = build_root_system("A", 2)
    identity = generate_weyl(a2)[0]
    assert intersect_levi(a2, identity, 0b01, 0b11) == 0b01
    assert intersect_levi(a2, identity, 0b11, 0b10) == 0b10
    s1 = simple_reflection(a2, 1)
    assert intersect_levi(a2, s1, 0b01, 0b01) == 0


def test_intersect_levi_contract_error():
    a2 = build_root_system("A", 2)
    s0 = simple_reflection(a2, 0)
    # s0 is not the minimal representative for (full, {alpha_1}): it carries
    # alpha_1 to the non-simple root alpha_0 + alpha_1 inside the full Levi
    with pytest.raises(ContractError):
        intersect_levi(a2, s0, 0b11, 0b10)


def test_levi_matches_double_coset_rep():
    for name in ["A2", "B2", "A3"]:
        rs = build_root_system(*parse_type(name))
        full = full_mask(rs.rank)
        for I in range(full + 1):
            for J in range(full + 1):
                for rep in kostant_reps(rs, I, J):
                    if rep.w.is_identity:
                        assert rep.levi == I & J


def test_cache_roundtrip(tmp_path):
    rs = build_root_system("B", 2)
    elements = generate_weyl(rs)
    save_weyl_cache(rs, elements, tmp_path)
    assert load_weyl_cache(rs, tmp_path) == elements
    # header mismatch: a different rank must refuse the file
    other = build_root_system("B", 3)
    assert load_weyl_cache(other, tmp_path) is None
    assert load_or_generate(other, tmp_path) == generate_weyl(other)
    assert load_weyl_cache(other, tmp_path) == generate_weyl(other)


def test_cache_rejects_corruption(tmp_path):
    rs = build_root_system("A", 2)
    path = save_weyl_cache(rs, generate_weyl(rs), tmp_path)
    raw = path.read_bytes()
    path.write_bytes(raw[:-3])
    assert load_weyl_cache(rs, tmp_path) is None
