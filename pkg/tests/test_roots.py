import json
import math

import mpmath
import pytest

import _oracles as oracle
from heightlab.errors import DomainError, PrecisionExhausted
from heightlab.families import laguerre_poly
from heightlab.poly import IntPoly, mul
from heightlab.roots import ConjugateSet, find_roots, refine

GOLDEN = IntPoly([-1, -1, 1])

# squarefree polynomials used across the numeric tests
BATTERY = [
    IntPoly([-1, -1, 1]),
    IntPoly([1, 0, 1]),
    IntPoly([-1, 0, 0, 0, 1]),
    IntPoly([-2, 0, 0, 1]),
    IntPoly([-3, 0, 2]),
    IntPoly([-3, 2]),
    IntPoly([-1, -1, 0, 0, 0, 1]),
    IntPoly([7, 1, 0, 3]),
    IntPoly([1, -3, 0, 1]),
    mul(IntPoly([1, 0, 1]), IntPoly([-2, 0, 1])),
    laguerre_poly(4),
    laguerre_poly(5),
    laguerre_poly(8),
]


@pytest.fixture(autouse=True)
def wide_mp():
    # enclosures can be far tighter than the default 53-bit context
    with mpmath.workdps(150):
        yield


def contains(disk, z) -> bool:
    return abs(disk.center - z) <= disk.radius


def test_golden_ratio_disks():
    cs = find_roots(GOLDEN, 60)
    phi = (1 + mpmath.sqrt(5)) / 2
    assert cs.n == 2
    assert all(d.is_real for d in cs.enclosures)
    assert contains(cs.enclosures[1], phi) and contains(cs.enclosures[0], 1 - phi)


def test_roots_of_unity():
    cs = find_roots(IntPoly([-1, 0, 0, 0, 1]), 60)
    for z in (1, -1, 1j, -1j):
        assert sum(contains(d, mpmath.mpc(z)) for d in cs.enclosures) == 1


def test_contract_radius():
    for p in BATTERY:
        cs = find_roots(p, 80)
        for d in cs.enclosures:
            assert d.radius <= mpmath.mpf(2) ** -80 * max(1, abs(d.center))


@pytest.mark.parametrize("p", BATTERY, ids=lambda p: str(p.coeffs))
def test_each_oracle_root_in_exactly_one_disk(p):
    cs = find_roots(p, 60)
    with mpmath.workdps(40):
        for r in oracle.roots(list(p.coeffs), 40):
            assert sum(contains(d, r) for d in cs.enclosures) == 1


def test_laguerre_center_product():
    cs = find_roots(laguerre_poly(4), 60)
    prod = mpmath.fprod(abs(c) for c in cs.centers)
    assert abs(prod - 24) < 1e-12


def test_refine_contract():
    cs = find_roots(GOLDEN, 60)
    fine = refine(cs, 40)
    for d in fine.enclosures:
        assert d.radius <= mpmath.mpf(2) ** -100 * max(1, abs(d.center))
    same = refine(cs, 0)
    assert all(b.radius <= a.radius for a, b in zip(cs.enclosures, same.enclosures))


def test_refine_cube_root():
    cs = refine(find_roots(IntPoly([-2, 0, 0, 1]), 60), 60)
    real = [d for d in cs.enclosures if d.is_real]
    assert len(real) == 1
    assert abs(real[0].center - mpmath.cbrt(2)) < 1e-18
    assert contains(real[0], mpmath.cbrt(2))


def test_conjugate_symmetry():
    cs = find_roots(laguerre_poly(5), 60)
    centers = cs.centers
    for c in centers:
        assert any(abs(c.conjugate() - d) < 1e-30 for d in centers)


def test_errors():
    with pytest.raises(DomainError, match="repeated"):
        find_roots(IntPoly([1, 2, 1]), 60)
    with pytest.raises(DomainError):
        find_roots(IntPoly.zero(), 60)
    with pytest.raises(DomainError):
        find_roots(IntPoly([5]), 60)
    with pytest.raises(PrecisionExhausted):
        find_roots(GOLDEN, 9000)


def test_json_round_trip():
    cs = find_roots(laguerre_poly(4), 60)
    data = json.loads(json.dumps(cs.to_json()))
    assert set(data) == {"polynomial", "precision_bits", "roots"}
    assert all(set(r) == {"re", "im", "radius"} for r in data["roots"])
    back = ConjugateSet.from_json(data)
    for old, new in zip(cs.enclosures, back.enclosures):
        assert new.contains_disk(old)


def test_canonical_order_is_stable():
    a = find_roots(laguerre_poly(8), 60)
    b = find_roots(laguerre_poly(8), 200)
    for x, y in zip(a.enclosures, b.enclosures):
        assert x.contains_disk(y) or abs(x.center - y.center) <= x.radius
    res = [float(c.real) for c in a.centers]
    assert res == sorted(res) or all(res[i] <= res[i + 1] + 1e-9 for i in range(len(res) - 1))
    assert math.isclose(float(mpmath.fsum(a.centers).real), -8.0, rel_tol=1e-12)
