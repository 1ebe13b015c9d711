import pytest

from ldga.algebra import Element, ZT, ZZ, validate
from ldga.cedga import (
    DGAValidationError,
    DiskBudgetExceeded,
    DSLError,
    boundary_words,
    build_dga,
    builtin,
    dump_dsl,
    load_dsl,
    m821_grid,
    trefoil_projection,
    twist_linearized,
    unknot_dsl_dga,
    unknot_projection,
)
from ldga.diagram import grid_to_front, resolve


# ---------------------------------------------------------------------------
# diagram-derived DGAs
# ---------------------------------------------------------------------------

def test_unknot_differential():
    # The resolved unknot carries two embedded disks (cusp teardrop and west
    # lobe), which cancel mod 2; over Z[t, t^-1] they are the familiar 1 + t.
    dga = build_dga(unknot_projection())
    assert [g.degree for g in dga.generators] == [1]
    assert dga.diff_of(dga.generators[0].name).is_zero
    words = boundary_words(unknot_projection(), "e1")
    assert sorted(words) == [(), ()]


def test_trefoil_differential_frozen():
    dga = build_dga(trefoil_projection())
    degrees = {g.name: g.degree for g in dga.generators}
    assert degrees == {"c1": 0, "c2": 0, "c3": 0, "e1": 1, "e2": 1}
    ring = dga.ring
    assert dga.diff_of("c1").is_zero
    assert dga.diff_of("c2").is_zero
    assert dga.diff_of("c3").is_zero
    assert dga.diff_of("e1") == Element.build(
        ring, {(): 1, ("c1",): 1, ("c3",): 1, ("c1", "c2", "c3"): 1}
    )
    assert dga.diff_of("e2") == Element.build(
        ring, {(): 1, ("c1",): 1, ("c3",): 1, ("c3", "c2", "c1"): 1}
    )


def test_diagram_dgas_validate():
    for proj in (unknot_projection(), trefoil_projection(),
                 resolve(grid_to_front(m821_grid()))):
        dga = build_dga(proj)
        assert validate(dga).ok


def test_index_identity_on_all_disks():
    proj = resolve(grid_to_front(m821_grid()))
    degrees = {c.name: c.degree for c in proj.crossings}
    for c in proj.crossings:
        for word in boundary_words(proj, c.name):
            assert degrees[c.name] - sum(degrees[b] for b in word) == 1


def test_jobs_do_not_change_result():
    proj = resolve(grid_to_front(m821_grid()))
    assert build_dga(proj, jobs=1) == build_dga(proj, jobs=3)


def test_budget_exhaustion_is_loud():
    proj = resolve(grid_to_front(m821_grid()))
    with pytest.raises(DiskBudgetExceeded, match="LDGA_DISK_BUDGET"):
        build_dga(proj, budget=5)


def test_crossing_relabeling_matches_after_rename():
    from ldga.diagram import FrontDiagram, LCUSP, RCUSP, CROSS

    events = [(LCUSP, 0), (LCUSP, 2), (CROSS, 1), (CROSS, 1), (CROSS, 1),
              (RCUSP, 2), (RCUSP, 0)]
    plain = build_dga(build_proj := resolve(FrontDiagram(events)))
    renamed = build_dga(resolve(FrontDiagram(events, labels={0: "x", 1: "y", 2: "z"})))
    mapping = {"x": "c1", "y": "c2", "z": "c3"}
    for g in renamed.generators:
        target = mapping.get(g.name, g.name)
        expect = plain.diff_of(target)
        got = renamed.diff_of(g.name)
        translated = Element.build(
            plain.ring,
            {tuple(mapping.get(f, f) for f in w): c for w, c in got.terms},
        )
        assert translated == expect


# ---------------------------------------------------------------------------
# DSL
# ---------------------------------------------------------------------------

def test_dsl_toy_roundtrip():
    text = "coeff F2\ngen e 1\ngen c 0\nd e = c*c + c\n"
    dga = load_dsl(text)
    # dump is canonical (terms sorted), and reloading reproduces the DGA
    assert dump_dsl(dga) == "coeff F2\ngen e 1\ngen c 0\nd e = c + c*c\n"
    assert load_dsl(dump_dsl(dga)) == dga


def test_dsl_rejects_degree_violation():
    with pytest.raises(DGAValidationError, match="validation"):
        load_dsl("coeff F2\ngen c 0\nd c = 1\n")


def test_dsl_unknot_over_laurent():
    dga = load_dsl("coeff Z[t]\ngen a 1\nd a = 1 + t\n")
    assert validate(dga).ok
    assert dga.ring is ZT
    from ldga.augment import enumerate_augmentations

    augs = enumerate_augmentations(dga, 2)
    assert len(augs) == 1
    assert augs[0].t_value == 1  # -1 in F2


def test_dsl_parse_error_positions():
    with pytest.raises(DSLError, match="line 2"):
        load_dsl("coeff F2\ngen $ 1\n")
    with pytest.raises(DSLError, match="unknown factor"):
        load_dsl("coeff F2\ngen e 1\nd e = q\n")
    with pytest.raises(DSLError, match="coeff"):
        load_dsl("gen e 1\n")
    with pytest.raises(DSLError, match="t requires"):
        load_dsl("coeff F2\ngen e 1\nd e = t\n")


def test_dsl_integral_signs():
    dga = load_dsl("coeff Z\ngen c1 0\ngen c2 0\ngen e 1\nd e = c1 - c2\n")
    assert dga.diff_of("e") == Element.build(ZZ, {("c1",): 1, ("c2",): -1})
    assert "c1 - c2" in dump_dsl(dga)


def test_dsl_laurent_exponents():
    dga = load_dsl("coeff Z[t]\ngen a 1\nd a = 1 + t^-1\n")
    assert validate(dga).ok
    assert "t^-1" in dump_dsl(dga)
    assert load_dsl(dump_dsl(dga)) == dga


def test_dump_roundtrip_builtins():
    for name in ("twist:5", "twist:7"):
        dga = builtin(name)
        assert load_dsl(dump_dsl(dga)) == dga


# ---------------------------------------------------------------------------
# builtins
# ---------------------------------------------------------------------------

def test_twist_generator_counts():
    dga = twist_linearized(5)
    assert len(dga.generators) == 13
    assert len(dga.generators_of_degree(0)) == 7
    assert len(dga.generators_of_degree(1)) == 6


def test_twist_differential_case_split():
    dga = twist_linearized(7)
    assert dga.diff_of("e0") == Element.build(ZZ, {("c7",): 1})
    assert dga.diff_of("e1") == Element.build(ZZ, {("c1",): -1})
    assert dga.diff_of("e3") == Element.build(ZZ, {("c2",): 1, ("c3",): -1})
    assert dga.diff_of("e4") == Element.build(ZZ, {("c3",): -1, ("c4",): 1})


def test_twist_rejects_bad_n():
    with pytest.raises(ValueError):
        twist_linearized(4)
    with pytest.raises(ValueError):
        twist_linearized(3)


def test_builtin_dispatch():
    assert builtin("twist:5") == twist_linearized(5)
    assert builtin("twist_linearized(7)") == twist_linearized(7)
    assert builtin("m821_grid").size == 8
    assert len(builtin("unknot").crossings) == 1
    assert len(builtin("trefoil").crossings) == 5
    assert builtin("unknot_dsl") == unknot_dsl_dga()
    with pytest.raises(ValueError):
        builtin("nope")


def test_m821_fixture_copies_agree():
    from importlib import resources
    from pathlib import Path

    pkg = resources.files("ldga.fixtures").joinpath("m821.json").read_text()
    repo = Path(__file__).resolve().parents[1] / "fixtures" / "m821.json"
    assert pkg == repo.read_text()
