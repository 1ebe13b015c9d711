import pytest

from ldga.algebra import DGA, Element, GF, Generator, ZZ
from ldga.augment import (
    Augmentation,
    AugmentationError,
    PolySystem,
    conjugate,
    dimension_estimate,
    enumerate_augmentations,
    linear_part,
    parse_polysystem,
    roots_of_unity_count,
    torus_point_count,
    variety_points,
)
from ldga.cedga import (
    build_dga,
    load_dsl,
    trefoil_projection,
    twist_linearized,
    unknot_dsl_dga,
)

AB_VARIETY = parse_polysystem("var a b; eq a*b + 1;")


# ---------------------------------------------------------------------------
# augmentation enumeration
# ---------------------------------------------------------------------------

def test_unknot_dsl_single_augmentation():
    augs = enumerate_augmentations(unknot_dsl_dga(), 2)
    assert len(augs) == 1
    assert augs[0].values == ()


def test_trefoil_five_augmentations():
    dga = build_dga(trefoil_projection())
    augs = enumerate_augmentations(dga, 2)
    assert len(augs) == 5
    oracle = enumerate_augmentations(dga, 2, oracle=True)
    assert [a.values for a in augs] == [a.values for a in oracle]


def test_twist_augmentation_counts():
    dga = twist_linearized(5)
    assert len(enumerate_augmentations(dga, 2)) == 4
    # all c_i forced to zero; a and b free over any field
    assert len(enumerate_augmentations(dga, 4)) == 16


def test_augmentations_reverified_post_hoc():
    dga = build_dga(trefoil_projection())
    for eps in enumerate_augmentations(dga, 2):
        for g in dga.generators:
            assert eps.evaluate(dga, dga.diff_of(g.name)) == 0


def test_backtracker_matches_oracle_on_nonlinear_system():
    text = "coeff F2\ngen e 1\ngen x 0\ngen y 0\ngen z 0\nd e = x*y*z + x + y\n"
    dga = load_dsl(text)
    fast = enumerate_augmentations(dga, 2)
    slow = enumerate_augmentations(dga, 2, oracle=True)
    assert [a.values for a in fast] == [a.values for a in slow]
    dga4 = load_dsl(text.replace("F2", "F4"))
    assert (
        [a.values for a in enumerate_augmentations(dga4, 4)]
        == [a.values for a in enumerate_augmentations(dga4, 4, oracle=True)]
    )


# ---------------------------------------------------------------------------
# conjugation and linearization
# ---------------------------------------------------------------------------

def test_conjugate_zero_augmentation_is_identity():
    dga = build_dga(trefoil_projection())
    zero = Augmentation.build(GF(2), {})
    if zero.is_valid(dga):
        assert conjugate(dga, zero).differential == dga.differential
    # the trefoil's zero assignment is not an augmentation (constant terms),
    # so exercise the identity on the twist builtin instead
    tw = twist_linearized(5)
    zero = Augmentation.build(GF(2), {})
    conj = conjugate(tw, zero)
    f2 = {name: el for name, el in conj.differential.items()}
    for name, el in f2.items():
        assert el == Element.build(
            GF(2),
            {w: 1 for w, c in tw.diff_of(name).terms if c % 2},
        )


def test_conjugate_char2_toy():
    dga = load_dsl("coeff F2\ngen e 1\ngen c 0\nd e = c*c + c\n")
    eps = Augmentation.build(GF(2), {"c": 1})
    conj = conjugate(dga, eps)
    assert conj.diff_of("e") == Element.build(GF(2), {("c", "c"): 1, ("c",): 1})


def test_conjugate_rejects_invalid_augmentation():
    dga = load_dsl("coeff F2\ngen e 1\ngen c 0\nd e = c\n")
    with pytest.raises(AugmentationError):
        conjugate(dga, Augmentation.build(GF(2), {"c": 1}))


def test_conjugated_dga_admits_zero_augmentation():
    dga = build_dga(trefoil_projection())
    for eps in enumerate_augmentations(dga, 2):
        conj = conjugate(dga, eps)
        zero = Augmentation.build(GF(2), {})
        assert zero.is_valid(conj)
        assert any(a.values == () for a in enumerate_augmentations(conj, 2))


def test_linear_part_toy():
    dga = load_dsl("coeff F2\ngen e 1\ngen c 0\nd e = c*c + c\n")
    cx = linear_part(dga)
    assert cx.bases == {0: ("c",), 1: ("e",)}
    assert cx.matrix(1) == [[1]]


def test_linear_part_of_twist_matches_builtin():
    cx = linear_part(twist_linearized(5))
    e_basis = cx.bases[1]
    c_basis = cx.bases[0]
    m = cx.matrix(1)
    assert m[c_basis.index("c5")][e_basis.index("e0")] == 1
    assert m[c_basis.index("c1")][e_basis.index("e1")] == -1
    assert m[c_basis.index("c2")][e_basis.index("e3")] == 1
    assert m[c_basis.index("c3")][e_basis.index("e3")] == -1


def test_linear_part_zero_differential():
    dga = DGA(ZZ, (Generator("x", 0), Generator("e", 1)), {})
    cx = linear_part(dga)
    assert all(all(v == 0 for v in row) for row in cx.matrix(1))


def test_linear_part_rejects_constant_terms():
    dga = build_dga(trefoil_projection())
    with pytest.raises(AugmentationError, match="constant"):
        linear_part(dga)


# ---------------------------------------------------------------------------
# varieties and point counts
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("q", [2, 4, 8, 16])
def test_ab_variety_counts(q):
    assert variety_points(AB_VARIETY, q) == q - 1


def test_empty_system_full_affine_space():
    sys2 = PolySystem(("a", "b"), ())
    assert variety_points(sys2, 4) == 16


def test_frobenius_square():
    sysq = parse_polysystem("var x; eq x^2;")
    assert variety_points(sysq, 4) == 1


def test_polysystem_rejects_undeclared_variables():
    with pytest.raises(AugmentationError, match="undeclared"):
        parse_polysystem("var a; eq a*b;")


def test_variety_enumeration_cap():
    big = PolySystem(tuple(f"x{i}" for i in range(9)), ())
    with pytest.raises(AugmentationError, match="cap"):
        variety_points(big, 2)


@pytest.mark.parametrize("k", range(1, 13))
@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16])
def test_roots_of_unity_brute_force(k, q):
    f = GF(q)
    brute = sum(1 for x in f.elements() if f.pow(x, k) == f.one)
    assert roots_of_unity_count(k, q) == brute


def test_roots_of_unity_examples():
    assert roots_of_unity_count(1, 16) == 1
    assert roots_of_unity_count(2, 4) == 1
    assert roots_of_unity_count(3, 4) == 3
    assert roots_of_unity_count(6, 4) == 3


def test_torus_point_count_examples():
    assert torus_point_count(0, [], 5) == 1
    assert torus_point_count(2, [], 4) == 9
    assert torus_point_count(1, [3], 4) == 9


@pytest.mark.parametrize("k", [0, 1, 2])
@pytest.mark.parametrize("q", [2, 4, 8])
def test_torus_count_matches_variety_oracle(k, q):
    variables = []
    eqs = []
    for i in range(k):
        variables += [f"x{i}", f"y{i}"]
        eqs.append(f"eq x{i}*y{i} - 1;")
    system = parse_polysystem(f"var {' '.join(variables)};" + "".join(eqs)) if k else PolySystem((), ())
    assert torus_point_count(k, [], q) == variety_points(system, q)


# ---------------------------------------------------------------------------
# dimension estimates
# ---------------------------------------------------------------------------

def test_dimension_line():
    est = dimension_estimate({2: 1, 4: 3, 8: 7, 16: 15})
    assert est.stable
    assert abs(est.estimate - 1) < 0.25


def test_dimension_plane():
    # (q-1)^2 growth: the estimate approaches 2; at these small orders the
    # successive slopes still differ by more than the 0.2 stability window
    est = dimension_estimate({2: 1, 4: 9, 8: 49})
    assert abs(est.estimate - 2) < 0.5
    assert not est.stable
    est2 = dimension_estimate({4: 9, 8: 49, 16: 225})
    assert abs(est2.estimate - 2) < 0.25


def test_dimension_finite_set():
    est = dimension_estimate({2: 1, 4: 1, 8: 1})
    assert est.estimate == 0
    assert est.stable


def test_dimension_empty_variety():
    est = dimension_estimate({2: 0, 4: 0})
    assert est.estimate == float("-inf")


def test_dimension_needs_two_orders():
    with pytest.raises(AugmentationError):
        dimension_estimate({2: 1})
