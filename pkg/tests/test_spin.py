import pytest

from ldga.algebra import DGA, Element, GF, Generator, ZZ
from ldga.augment import Augmentation, enumerate_augmentations, linear_part
from ldga.cedga import build_dga, m821_grid, twist_linearized
from ldga.diagram import grid_to_front, resolve
from ldga.linhom import (
    GradedModule,
    HOMOLOGICAL,
    LinearizedComplex,
    as_cohomological,
    homology_field,
    homology_integral,
    poincare,
    reduce_complex_mod_p,
)
from ldga.spin import (
    SpinError,
    iterate_schedule,
    kunneth_s1,
    spin_chords,
    spin_complex_stable,
    spun_polynomial,
    stable_bound,
    stable_bound_complex,
    transport_augmentation,
)


def twist_complex(n=5):
    return linear_part(twist_linearized(n))


# ---------------------------------------------------------------------------
# stability bound and chord sets
# ---------------------------------------------------------------------------

def test_stable_bound_twist():
    assert stable_bound(twist_linearized(5)) == 2


def test_stable_bound_single_generator():
    dga = DGA(ZZ, (Generator("e", 1),), {})
    assert stable_bound(dga) == 1


def test_stable_bound_degree_spread():
    dga = DGA(ZZ, tuple(Generator(f"g{d}", d) for d in (-1, 0, 1, 2)), {})
    assert stable_bound(dga) == 4


def test_stable_bound_empty():
    with pytest.raises(SpinError):
        stable_bound(DGA(ZZ, (), {}))


def test_spin_chords_twist():
    chords = spin_chords(twist_linearized(5), 3)
    assert chords.count() == 26
    assert chords.degrees() == [0, 1, 3, 4]
    assert len(chords.chords_of_degree(0)) == 7
    assert len(chords.chords_of_degree(3)) == 7


def test_spin_chords_small_sphere_allowed():
    chords = spin_chords(twist_linearized(5), 1)
    assert chords.degrees() == [0, 1, 2]
    assert chords.count() == 26


# ---------------------------------------------------------------------------
# stable-range complexes
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("m", [3, 4, 5])
def test_spin_complex_stable_twist(m):
    spun = spin_complex_stable(twist_complex(5), m)
    h = homology_integral(spun)
    assert h.entries == {0: (2, ()), 1: (1, ()), m: (2, ()), m + 1: (1, ())}


def test_spin_complex_rejects_small_sphere():
    with pytest.raises(SpinError, match="stable range"):
        spin_complex_stable(twist_complex(5), 2)


def test_spin_zero_complex():
    cx = LinearizedComplex(ZZ, {0: ("x",), 1: ("e",)}, {1: [[0]]})
    spun = spin_complex_stable(cx, 3)
    h = homology_integral(spun)
    assert h.entries == {0: (1, ()), 1: (1, ()), 3: (1, ()), 4: (1, ())}


def test_spun_field_dims_are_block_sums():
    cx = reduce_complex_mod_p(twist_complex(5), 2)
    spun = spin_complex_stable(cx, 3)
    dims = homology_field(spun).dims()
    base = homology_field(cx).dims()
    expect = dict(base)
    for d, k in base.items():
        expect[d + 3] = expect.get(d + 3, 0) + k
    assert dims == expect


@pytest.mark.parametrize("m", [3, 4, 5])
def test_spun_polynomial_identity(m):
    # stable spinning multiplies the Poincare polynomial by (1 + t^m)
    cx = reduce_complex_mod_p(twist_complex(7), 2)
    p = poincare(as_cohomological(homology_field(cx)))
    spun = spin_complex_stable(cx, m)
    p_spun = poincare(as_cohomological(homology_field(spun)))
    assert p_spun.as_dict() == spun_polynomial(p, m).as_dict()


# ---------------------------------------------------------------------------
# Kunneth for circle spinning
# ---------------------------------------------------------------------------

def test_kunneth_m821_dims():
    h = GradedModule("F2", HOMOLOGICAL, {-1: (1, ()), 0: (4, ()), 1: (2, ())})
    spun = kunneth_s1(h)
    assert spun.dims() == {-1: 1, 0: 5, 1: 6, 2: 2}
    assert spun.dims()[-1] == 1


def test_kunneth_zero_module():
    h = GradedModule("F2", HOMOLOGICAL, {})
    assert kunneth_s1(h).is_zero()


def test_kunneth_polynomial_identity():
    from ldga.augment import conjugate

    dga = build_dga(resolve(grid_to_front(m821_grid())))
    eps = enumerate_augmentations(dga, 2)[0]
    h = homology_field(linear_part(conjugate(dga, eps)))
    p = poincare(as_cohomological(h))
    spun = kunneth_s1(h)
    assert poincare(as_cohomological(spun)).as_dict() == p.multiply_one_plus_tm(1).as_dict()


def test_kunneth_rejects_integral():
    h = GradedModule("Z", HOMOLOGICAL, {0: (1, ())})
    with pytest.raises(SpinError):
        kunneth_s1(h)


# ---------------------------------------------------------------------------
# augmentation transport
# ---------------------------------------------------------------------------

def spun_stable_dga(dga: DGA, m: int) -> DGA:
    """South + north copies with the differential acting blockwise."""
    gens = [Generator(f"{g.name}^S", g.degree) for g in dga.generators]
    gens += [Generator(f"{g.name}^N", g.degree + m) for g in dga.generators]
    diff = {}
    for tag in ("S", "N"):
        for g in dga.generators:
            el = dga.diff_of(g.name)
            diff[f"{g.name}^{tag}"] = Element.build(
                dga.ring,
                {tuple(f"{f}^{tag}" for f in w): c for w, c in el.terms},
            )
    return DGA(dga.ring, tuple(gens), diff)


def test_transport_twist_augmentation():
    dga = twist_linearized(5)
    eps = enumerate_augmentations(dga, 2)[-1]
    chords = spin_chords(dga, 3)
    moved = transport_augmentation(eps, chords, dga)
    for name, value in eps.values:
        assert moved.value(f"{name}^S") == value
    assert all(k.endswith("^S") for k, _ in moved.values)


def test_transport_zero_augmentation():
    dga = twist_linearized(5)
    zero = Augmentation.build(GF(2), {})
    moved = transport_augmentation(zero, spin_chords(dga, 3), dga)
    assert moved.values == ()


def test_transport_requires_big_sphere():
    dga = twist_linearized(5)
    eps = enumerate_augmentations(dga, 2)[0]
    with pytest.raises(SpinError):
        transport_augmentation(eps, spin_chords(dga, 1), dga)


def test_transport_rejects_negative_degrees():
    dga = DGA(ZZ, (Generator("x", -1), Generator("y", 0)), {})
    eps = Augmentation.build(GF(2), {})
    with pytest.raises(SpinError, match="non-negative"):
        transport_augmentation(eps, spin_chords(dga, 3), dga)


def test_spun_augmentation_count_is_preserved():
    # the graded augmentations of the stable spun DGA biject with the source's
    dga = twist_linearized(5)
    spun = spun_stable_dga(dga, 3)
    assert len(enumerate_augmentations(spun, 2)) == len(enumerate_augmentations(dga, 2))
    assert len(enumerate_augmentations(spun, 4)) == len(enumerate_augmentations(dga, 4))
    chords = spin_chords(dga, 3)
    assert len(chords.chords_of_degree(0)) == len(dga.generators_of_degree(0))


def test_transported_augmentation_kills_spun_differential():
    dga = twist_linearized(5)
    spun = spun_stable_dga(dga, 3)
    for eps in enumerate_augmentations(dga, 2):
        moved = transport_augmentation(eps, spin_chords(dga, 3), dga)
        from ldga.algebra import change_coefficients

        spun2 = change_coefficients(spun, GF(2))
        assert moved.is_valid(spun2)


# ---------------------------------------------------------------------------
# iterated schedules
# ---------------------------------------------------------------------------

def test_iterate_single_stage():
    dga = twist_linearized(5)
    stages = iterate_schedule(dga, twist_complex(5), [3])
    assert len(stages) == 1
    h = homology_integral(stages[0].complex)
    assert h.entries == {0: (2, ()), 1: (1, ()), 3: (2, ()), 4: (1, ())}


def test_iterate_recomputes_bound():
    dga = twist_linearized(5)
    stages = iterate_schedule(dga, twist_complex(5), [3, 8])
    assert stages[1].bound == 5
    degrees = sorted(stages[1].complex.bases)
    assert degrees == [0, 1, 3, 4, 8, 9, 11, 12]


def test_iterate_empty_schedule():
    dga = twist_linearized(5)
    assert iterate_schedule(dga, twist_complex(5), []) == []


def test_iterate_rejects_bad_stage():
    dga = twist_linearized(5)
    with pytest.raises(SpinError, match="stage 1"):
        iterate_schedule(dga, twist_complex(5), [3, 5])
