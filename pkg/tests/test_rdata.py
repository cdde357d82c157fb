import random
from fractions import Fraction

import pytest

from weylfan import rdata, roots
from weylfan.errors import MissingPair
from weylfan.rdata import ChartPoint, ProjectiveRatio, RData


def sys(*factors):
    return roots.build_root_system(roots.RootSystemSpec.parse(factors))


def a2_pairs(r):
    alpha = r.root_index((1, -1, 0))
    beta = r.root_index((0, 1, -1))
    gamma = r.root_index((1, 0, -1))
    return alpha, beta, gamma


def test_projective_ratio_canonical():
    assert ProjectiveRatio.of(2, 4) == ProjectiveRatio.of(1, 2)
    assert ProjectiveRatio.of(-3, 3) == ProjectiveRatio.of(1, -1)
    assert ProjectiveRatio.of(0, 5) == ProjectiveRatio.of(0, 1)
    assert ProjectiveRatio.of(7, 0) == ProjectiveRatio.of(1, 0)
    assert ProjectiveRatio.of(2, 1).swap() == ProjectiveRatio.of(1, 2)
    with pytest.raises(ValueError):
        ProjectiveRatio.of(0, 0)


def test_validate_examples():
    r = sys(("A", 2))
    alpha, beta, gamma = a2_pairs(r)
    good = RData.of({alpha: ProjectiveRatio.of(1, 1),
                     beta: ProjectiveRatio.of(2, 1),
                     gamma: ProjectiveRatio.of(2, 1)})
    assert rdata.validate_rdata(r, good) == []
    bad = RData.of({alpha: ProjectiveRatio.of(1, 1),
                    beta: ProjectiveRatio.of(2, 1),
                    gamma: ProjectiveRatio.of(1, 1)})
    violations = rdata.validate_rdata(r, bad)
    assert violations
    i, j = sorted((alpha, beta))
    assert (i, j, gamma) in violations

    a1 = sys(("A", 1))
    pos = a1.positive[0]
    assert rdata.validate_rdata(a1, RData.of({pos: ProjectiveRatio.of(5, 3)})) == []


def test_validate_missing_pair():
    r = sys(("A", 2))
    alpha, beta, _ = a2_pairs(r)
    with pytest.raises(MissingPair):
        rdata.validate_rdata(r, RData.of({alpha: ProjectiveRatio.of(1, 1),
                                          beta: ProjectiveRatio.of(1, 1)}))


def test_ratio_orientation_swap():
    r = sys(("A", 2))
    alpha, _, _ = a2_pairs(r)
    d = rdata.universal_rdata_at(
        r, ChartPoint(chart=tuple(sorted(a2_pairs(r)[:2])), coords=(Fraction(2), Fraction(3))))
    t = rdata.ratio_for(r, d, alpha)
    assert rdata.ratio_for(r, d, r.neg[alpha]) == t.swap()


def test_universal_rdata_examples():
    r = sys(("A", 2))
    alpha, beta, gamma = a2_pairs(r)
    chart = tuple(sorted((alpha, beta)))
    coords = tuple(Fraction(2) if i == alpha else Fraction(3) for i in chart)
    d = rdata.universal_rdata_at(r, ChartPoint(chart=chart, coords=coords))
    assert rdata.ratio_for(r, d, gamma) == ProjectiveRatio.of(6, 1)
    assert rdata.validate_rdata(r, d) == []

    # torus fixed point: every chart-positive pair degenerates to (0:1)
    zero = rdata.universal_rdata_at(r, ChartPoint(chart=chart, coords=(Fraction(0), Fraction(0))))
    for i in (alpha, beta, gamma):
        assert rdata.ratio_for(r, zero, i) == ProjectiveRatio.of(0, 1)

    a1 = sys(("A", 1))
    pos = a1.positive[0]
    d1 = rdata.universal_rdata_at(a1, ChartPoint(chart=(pos,), coords=(Fraction(1),)))
    assert rdata.ratio_for(a1, d1, pos) == ProjectiveRatio.of(1, 1)


def test_rdata_to_point_roundtrip_examples():
    r = sys(("A", 2))
    alpha, beta, gamma = a2_pairs(r)
    chart = tuple(sorted((alpha, beta)))
    coords = tuple(Fraction(2) if i == alpha else Fraction(3) for i in chart)
    p = ChartPoint(chart=chart, coords=coords)
    d = rdata.universal_rdata_at(r, p)
    q = rdata.rdata_to_point(r, d)
    assert rdata.universal_rdata_at(r, q) == d
    # generic interior point: the first chart works, so coords match some chart
    assert set(q.chart) in [set(s) for s in roots.enumerate_simple_root_sets(r)]

    # all ratios (1:1): the torus identity, any chart, coords all 1
    ident = RData.of({i: ProjectiveRatio.of(1, 1) for i in r.positive})
    q = rdata.rdata_to_point(r, ident)
    assert all(x == 1 for x in q.coords)

    # universal data at a torus fixed point comes back as the zero point
    zero = rdata.universal_rdata_at(r, ChartPoint(chart=chart, coords=(Fraction(0), Fraction(0))))
    q = rdata.rdata_to_point(r, zero)
    assert all(x == 0 for x in q.coords)
    assert set(q.chart) == set(chart)


def random_chart_point(r, rng, zero_prob=0.25):
    sets = roots.enumerate_simple_root_sets(r)
    chart = sets[rng.randrange(len(sets))]
    coords = []
    for _ in chart:
        if rng.random() < zero_prob:
            coords.append(Fraction(0))
        else:
            coords.append(Fraction(rng.choice([x for x in range(-6, 7) if x]),
                                   rng.randrange(1, 6)))
    return ChartPoint(chart=chart, coords=tuple(coords))


@pytest.mark.parametrize("factors", [(("A", 2),), (("A", 3),), (("B", 2),),
                                     (("C", 3),), (("D", 3),), (("G", 2),)])
def test_functor_roundtrip_random(factors):
    r = sys(*factors)
    rng = random.Random(hash(factors) & 0xFFFF)
    for _ in range(60):
        p = random_chart_point(r, rng)
        d = rdata.universal_rdata_at(r, p)
        assert rdata.validate_rdata(r, d) == []
        q = rdata.rdata_to_point(r, d)
        assert rdata.universal_rdata_at(r, q) == d
        if q.chart == p.chart:
            assert q.coords == p.coords


@pytest.mark.parametrize("factors", [(("A", 1),), (("A", 2),), (("A", 3),),
                                     (("B", 2),), (("B", 3),), (("C", 3),),
                                     (("D", 4),), (("G", 2),)])
def test_verify_relation_generation(factors):
    assert rdata.verify_relation_generation(sys(*factors))


def test_orbit_rdata_pattern():
    r = sys(("A", 2))
    alpha, beta, gamma = a2_pairs(r)
    # v = v_1 in coordinates dual to the base: (1, 0)
    pat = rdata.orbit_rdata_pattern(r, (1, 0))
    assert pat[alpha] == rdata.ZERO_ONE
    assert pat[gamma] == rdata.ZERO_ONE
    assert pat[beta] == rdata.FREE
    assert all(v == rdata.FREE for v in rdata.orbit_rdata_pattern(r, (0, 0)).values())
    # v = v_1 + v_2 = (0, 1): exactly the pairs positive on v degenerate
    pat = rdata.orbit_rdata_pattern(r, (0, 1))
    assert pat[beta] == rdata.ZERO_ONE
    assert pat[gamma] == rdata.ZERO_ONE
    assert pat[alpha] == rdata.FREE


def test_rdata_json_roundtrip():
    r = sys(("A", 2))
    alpha, beta, gamma = a2_pairs(r)
    d = RData.of({alpha: ProjectiveRatio.of(1, 1),
                  beta: ProjectiveRatio.of(2, 1),
                  gamma: ProjectiveRatio.of(2, 1)})
    j = rdata.rdata_to_json(r, d)
    assert rdata.rdata_from_json(r, j) == d
    p = rdata.rdata_to_point(r, d)
    pj = rdata.chart_point_to_json(r, p)
    assert rdata.chart_point_from_json(r, pj) == p
