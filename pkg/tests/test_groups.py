import pytest
from fractions import Fraction

from corestar.errors import ValidationError
from corestar.groups import (close_group, reflection_scan,
                             validate_class_function,
                             class_function_on_elements,
                             mat_mul, mat_rank, mat_identity, mat_sub)
from corestar.poly import p_xvar, p_mul, p_add, p_scale, p_diff_x

NEG_I = [[-1, 0], [0, -1]]
ROT_J = [[0, 1], [-1, 0]]
SWAP2 = [[0, 1], [1, 0]]
SWAP4 = [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]

PI2 = tuple(tuple(Fraction(v) for v in row) for row in ((0, 1), (-1, 0)))
PI4 = tuple(tuple(Fraction(v) for v in row)
            for row in ((0, 1, 0, 0), (-1, 0, 0, 0),
                        (0, 0, 0, 1), (0, 0, -1, 0)))


def test_close_group_z2():
    G = close_group([NEG_I], 2)
    assert len(G.elements) == 2
    # canonical order sorts by matrix entries, so -I lands at index 0
    assert G.identity_index == 1
    assert G.elements == sorted(G.elements)
    assert G.mult_table[0][0] == G.identity_index
    assert G.inverse[0] == 0


def test_close_group_z4_structure():
    G = close_group([ROT_J], 2)
    assert len(G.elements) == 4
    for a in range(4):
        for b in range(4):
            assert G.mult_table[a][b] == G.mult_table[b][a]  # abelian
        assert G.mult_table[a][G.inverse[a]] == G.identity_index
    assert len(G.conjugacy_classes) == 4


def test_close_group_s3_conjugacy():
    # the standard integral representation of the symmetric group on 3 letters
    G = close_group([[[0, -1], [1, -1]], SWAP2], 2)
    assert len(G.elements) == 6
    sizes = sorted(len(members) for _rep, members in G.conjugacy_classes)
    assert sizes == [1, 2, 3]
    # class representatives are the lowest element index in each class
    for rep, members in G.conjugacy_classes:
        assert rep == min(members)


def test_close_group_rejects_infinite_and_singular():
    with pytest.raises(ValidationError):
        close_group([[[1, 1], [0, 1]]], 2, max_order=64)  # shear never closes
    with pytest.raises(ValidationError):
        close_group([[[1, 0], [0, 0]]], 2)


def test_reflection_scan_z2():
    G = close_group([NEG_I], 2)
    refl = reflection_scan(G, PI2)
    gi = G.index[tuple(tuple(Fraction(v) for v in r) for r in NEG_I)]
    assert refl.l_gamma[G.identity_index] == 0
    assert refl.l_gamma[gi] == 2 and refl.is_reflection[gi]
    # (1-gamma) = 2I, so the twisted bivector is 4 pi
    assert refl.pi_gamma[gi] == tuple(tuple(4 * v for v in row) for row in PI2)
    assert refl.reflections() == [gi]


def test_reflection_scan_rejects_non_symplectic():
    G = close_group([SWAP2], 2)
    with pytest.raises(ValidationError) as ei:
        reflection_scan(G, PI2)  # swap sends pi to -pi in dim 2
    assert "preserve" in str(ei.value)


def test_reflection_scan_rejects_degenerate_or_skewless():
    G = close_group([NEG_I], 2)
    with pytest.raises(ValidationError):
        reflection_scan(G, ((Fraction(0), Fraction(0)),
                            (Fraction(0), Fraction(0))))
    with pytest.raises(ValidationError):
        reflection_scan(G, ((Fraction(1), Fraction(0)),
                            (Fraction(0), Fraction(1))))


def test_reflection_scan_block_swap_dim4():
    G = close_group([SWAP4], 4)
    refl = reflection_scan(G, PI4)
    gi = G.index[tuple(tuple(Fraction(v) for v in r) for r in SWAP4)]
    assert refl.l_gamma[gi] == 2 and refl.is_reflection[gi]
    # twisted bivector is supported on the image of (1-gamma)
    M = G.elements[gi]
    one_minus = mat_sub(mat_identity(4), M)
    assert mat_rank(one_minus) == 2
    pg = refl.pi_gamma[gi]
    assert any(any(row) for row in pg)


def test_class_function_validation_and_zero_fill():
    G = close_group([NEG_I], 2)
    refl = reflection_scan(G, PI2)
    gi = refl.reflections()[0]
    cf = validate_class_function(G, refl, {str(gi): "1/3"})
    assert cf.as_dict()[gi] == Fraction(1, 3)
    with pytest.raises(ValidationError):
        validate_class_function(G, refl, {str(G.identity_index): "1"})
    with pytest.raises(ValidationError):
        validate_class_function(G, refl, {"7": "1"})
    # unassigned reflection classes get an explicit zero
    cf0 = validate_class_function(G, refl, {})
    assert cf0.as_dict()[gi] == 0


def test_class_function_conjugate_conflict():
    # wreath-type dim-4 group: diag(J, I) and the block swap generate
    # conjugate rotation blocks that must carry equal coefficients
    dJI = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    G = close_group([dJI, SWAP4], 4)
    refl = reflection_scan(G, PI4)
    a = G.index[tuple(tuple(Fraction(v) for v in r) for r in dJI)]
    M = mat_mul(mat_mul(G.elements[G.index[tuple(
        tuple(Fraction(v) for v in r) for r in SWAP4)]], G.elements[a]),
        G.inv_matrices[G.index[tuple(tuple(Fraction(v) for v in r)
                                     for r in SWAP4)]])
    b = G.index[M]
    assert a != b and refl.is_reflection[a] and refl.is_reflection[b]
    with pytest.raises(ValidationError) as ei:
        validate_class_function(G, refl, {str(a): "1", str(b): "2"})
    assert "class" in str(ei.value)
    cf = validate_class_function(G, refl, {str(a): "1/2"})
    expanded = class_function_on_elements(G, cf)
    assert expanded[a] == expanded[b] == Fraction(1, 2)


def test_act_poly_respects_poisson_pairing():
    # gamma symplectic means the pi-pairing of derivatives is equivariant
    G = close_group([ROT_J], 2)
    gi = G.index[tuple(tuple(Fraction(v) for v in r) for r in ROT_J)]
    a = p_add(p_mul(p_xvar(2, 0), p_xvar(2, 0)), p_xvar(2, 1))
    b = p_add(p_mul(p_xvar(2, 0), p_xvar(2, 1)), p_scale(p_xvar(2, 0), 2))

    def poisson(u, v):
        out = {}
        for i in range(2):
            for j in range(2):
                if PI2[i][j]:
                    out = p_add(out, p_scale(
                        p_mul(p_diff_x(u, i), p_diff_x(v, j)), PI2[i][j]))
        return out

    lhs = G.act_poly(gi, poisson(a, b))
    rhs = poisson(G.act_poly(gi, a), G.act_poly(gi, b))
    assert lhs == rhs
