import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cubicsod.pflab import (
    CubicForm,
    DegenerateSpan,
    DependentBasis,
    EnumerationBound,
    FieldSpec,
    HomogeneousForm,
    NotSkew,
    SkewForm,
    batched_rref,
    determinant,
    generate_instance,
    grassmannian_count,
    grassmannian_points,
    interpolate,
    load_form,
    load_instance,
    make_field,
    matmul,
    monomials,
    pfaffian,
    pfaffian_cubic,
    pfaffian_polynomial,
    projective_count,
    projective_points,
    random_form,
    random_skew,
    rank,
    s_count_report,
    s_points,
    singular_cubic_model,
    singular_points,
    skew_from_upper,
    transpose,
    upper_entries,
    wedge,
    xv_count_report,
    xv_points,
)

F7, Q, F2 = make_field(7), make_field(0), make_field(2)


def brute_det(field, m):
    """Independent oracle: Leibniz expansion."""
    n = len(m)
    total = field.zero
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = field.one
        for i in range(n):
            term = field.mul(term, m[i][perm[i]])
        total = field.add(total, term) if sign > 0 else field.sub(total, term)
    return total


# ---- fields -----------------------------------------------------------------


@pytest.mark.parametrize("p,k", [(2, 1), (2, 3), (3, 2), (7, 1), (7, 2)])
def test_field_axioms(p, k):
    f = make_field(p, k)
    els = f.elements()
    assert (f.add_t[els, f.neg_t[els]] == 0).all()
    assert (f.mul_t[f.nonzero(), f.inv_t[f.nonzero()]] == 1).all()
    a, b, c = np.meshgrid(els, els, els[: min(len(els), 9)], indexing="ij")
    assert (f.mul_t[a, f.add_t[b, c]] == f.add_t[f.mul_t[a, b], f.mul_t[a, c]]).all()
    assert (f.mul_t[f.mul_t[a, b], c] == f.mul_t[a, f.mul_t[b, c]]).all()
    # characteristic p and the multiplicative group is cyclic of order q - 1
    assert all(f.pow(int(x), f.size - 1) == 1 for x in f.nonzero())


def test_field_spec_validation():
    with pytest.raises(ValueError):
        FieldSpec(6)
    with pytest.raises(ValueError):
        FieldSpec(7, 5)
    assert str(FieldSpec(7, 2)) == "F_7^2"
    assert make_field(0).inv(Fraction(2, 3)) == Fraction(3, 2)


# ---- Pfaffians --------------------------------------------------------------


def symplectic(field):
    upper = [field.zero] * 15
    m = skew_from_upper(field, upper)
    rows = [list(r) for r in m.entries]
    for i in (0, 2, 4):
        rows[i][i + 1] = field.one
        rows[i + 1][i] = field.neg(field.one)
    return SkewForm(tuple(map(tuple, rows)), field)


@pytest.mark.parametrize("field", [F7, Q], ids=["F7", "Q"])
def test_symplectic_pfaffian(field):
    assert symplectic(field).pfaffian() == field.one


def test_rank_four_pfaffian_vanishes():
    rng = np.random.default_rng(1)
    for _ in range(20):
        u, v, x, y = (rng.integers(0, 7, 6) for _ in range(4))
        a, b = wedge(F7, list(u), list(v)), wedge(F7, list(x), list(y))
        m = skew_from_upper(F7, [F7.add(s, t) for s, t in zip(upper_entries(a), upper_entries(b))])
        assert m.pfaffian() == 0


def test_non_skew_rejected():
    with pytest.raises(NotSkew):
        pfaffian(F7, [[1, 0], [0, 0]])
    with pytest.raises(NotSkew):
        SkewForm(((0, 1), (1, 0)), F7)


@pytest.mark.parametrize("field", [F7, Q], ids=["F7", "Q"])
def test_pf_squared_is_det(field):
    rng = np.random.default_rng(7)
    for _ in range(200):
        m = random_skew(field, rng)
        pf = m.pfaffian()
        assert field.mul(pf, pf) == determinant(field, m.entries)


def test_det_matches_leibniz():
    rng = np.random.default_rng(3)
    for field in (F7, Q):
        for n in (2, 3, 4, 5):
            m = [[field.elem(int(x)) for x in row] for row in rng.integers(-9, 10, (n, n))]
            assert determinant(field, m) == brute_det(field, m)


@pytest.mark.parametrize("field", [F7, Q], ids=["F7", "Q"])
def test_congruence_covariance(field):
    rng = np.random.default_rng(11)
    for _ in range(200):
        m = random_skew(field, rng)
        a = [[field.elem(int(x)) for x in row] for row in rng.integers(-9, 10, (6, 6))]
        lhs = pfaffian(field, matmul(field, matmul(field, transpose(a), m.entries), a))
        assert lhs == field.mul(determinant(field, a), m.pfaffian())


def test_generic_pfaffian_polynomial():
    poly = pfaffian_polynomial(F7)
    assert poly.degree == 3 and len(poly.coeffs) == 15
    rng = np.random.default_rng(5)
    for _ in range(20):
        m = random_skew(F7, rng)
        assert poly.evaluate(upper_entries(m)) == m.pfaffian()


def test_rank_two_forms_are_singular_on_pfaffian():
    poly = pfaffian_polynomial(F7)
    grads = poly.gradient()
    rng = np.random.default_rng(9)
    for _ in range(50):
        w = wedge(F7, list(rng.integers(0, 7, 6)), list(rng.integers(0, 7, 6)))
        pt = upper_entries(w)
        assert poly.evaluate(pt) == 0
        assert all(g.evaluate(pt) == 0 for g in grads)


# ---- Pfaffian cubic ---------------------------------------------------------


def test_pfaffian_cubic_degree():
    rng = np.random.default_rng(0)
    for _ in range(20):
        basis = [random_skew(F7, rng) for _ in range(6)]
        assert pfaffian_cubic(basis).degree == 3


def test_pfaffian_cubic_matches_evaluation():
    rng = np.random.default_rng(2)
    basis = [random_skew(F7, rng) for _ in range(6)]
    cubic = pfaffian_cubic(basis)
    monos = monomials(6, 3)
    assert len(monos) == 56
    pts, vals = [], []
    # interpolation from values of Pf at 56 points recovers the coefficients
    while len(pts) < 56:
        x = [int(c) for c in rng.integers(0, 7, 6)]
        row = [F7.one] * 0
        cand = pts + [x]
        rows = [[_mono(F7, p, m) for m in monos] for p in cand]
        if rank(F7, rows) == len(cand):
            pts.append(x)
            comb = skew_from_upper(F7, [_lin(F7, basis, x, i, j) for i in range(6) for j in range(i + 1, 6)])
            vals.append(comb.pfaffian())
    assert interpolate(F7, 6, 3, pts, vals) == cubic


def _mono(field, pt, m):
    t = field.one
    for x, e in zip(pt, m):
        t = field.mul(t, field.pow(x, e))
    return t


def _lin(field, basis, x, i, j):
    acc = field.zero
    for c, b in zip(x, basis):
        acc = field.add(acc, field.mul(c, b.entries[i][j]))
    return acc


def test_dependent_basis():
    rng = np.random.default_rng(4)
    b = [random_skew(F7, rng) for _ in range(5)]
    with pytest.raises(DependentBasis):
        pfaffian_cubic(b + [b[0]])


def test_common_kernel_is_degenerate():
    # forms not involving e_5 all have e_5 in their kernel
    basis = []
    for k in range(6):
        upper = [0] * 15
        idx = [(i, j) for i in range(6) for j in range(i + 1, 6) if j != 5]
        i, j = idx[k]
        upper[[(a, c) for a in range(6) for c in range(a + 1, 6)].index((i, j))] = 1
        basis.append(skew_from_upper(F7, upper))
    with pytest.raises(DegenerateSpan):
        pfaffian_cubic(basis)


def test_zero_cubic_rejected():
    with pytest.raises(ValueError):
        CubicForm(F7, 6, 3, {})


# ---- forms ------------------------------------------------------------------


def test_form_json_roundtrip():
    rng = np.random.default_rng(0)
    f = random_form(F7, 6, 3, rng)
    back = HomogeneousForm.from_json(json.loads(json.dumps(f.to_json())))
    assert back == f
    assert f.to_json()["field"] == {"q": 7, "k": 1}
    q = HomogeneousForm(Q, 2, 2, {(2, 0): Fraction(1, 3), (1, 1): Fraction(-2)})
    assert HomogeneousForm.from_json(q.to_json()) == q


def test_evaluate_many_matches_evaluate():
    rng = np.random.default_rng(1)
    f = random_form(make_field(7, 2), 4, 3, rng)
    pts = rng.integers(0, 49, (30, 4))
    assert list(f.evaluate_many(pts)) == [f.evaluate([int(c) for c in p]) for p in pts]


def test_form_extension():
    rng = np.random.default_rng(1)
    f = random_form(F7, 3, 2, rng)
    g = f.extend(make_field(7, 2))
    assert all(g.evaluate(p) == f.evaluate(p) for p in itertools.product(range(7), repeat=3))
    with pytest.raises(ValueError):
        f.extend(make_field(5, 2))


# ---- enumeration ------------------------------------------------------------


@pytest.mark.parametrize("q", [2, 3, 5, 7])
@pytest.mark.parametrize("n", range(1, 6))
def test_projective_counts(n, q):
    chunks = list(projective_points(n, make_field(q)))
    pts = np.concatenate(chunks)
    assert len(pts) == projective_count(n, q)
    if len(pts) < 50_000:
        assert len({tuple(p) for p in pts}) == len(pts)
    first = pts[np.arange(len(pts)), (pts != 0).argmax(axis=1)]
    assert (first == 1).all()


def test_p5_f7():
    assert projective_count(5, 7) == 19608


def test_grassmannian_f2():
    mats = np.concatenate(list(grassmannian_points(F2)))
    assert len(mats) == grassmannian_count(2, 6, 2) == 63 * 31 // 3 == 651
    red, _, rk = batched_rref(mats, F2)
    assert (rk == 2).all() and (red == mats).all()


def test_batched_rref_against_rank():
    rng = np.random.default_rng(3)
    mats = rng.integers(0, 7, (200, 3, 5))
    mats[::7, 2] = mats[::7, 0]
    _, _, rk = batched_rref(mats, F7)
    assert list(rk) == [rank(F7, m.tolist()) for m in mats]


def test_enumeration_bound():
    with pytest.raises(EnumerationBound):
        next(projective_points(5, F7, bound=1000))


def test_fermat_is_smooth():
    fermat = CubicForm(F7, 6, 3, {tuple(3 if j == i else 0 for j in range(6)): 1 for i in range(6)})
    assert singular_points(fermat) == []


def test_singular_model_vertex():
    rng = np.random.default_rng(0)
    for _ in range(20):
        F2q, F3c = random_form(F7, 5, 2, rng), random_form(F7, 5, 3, rng)
        F = singular_cubic_model(F2q, F3c)
        assert (1, 0, 0, 0, 0, 0) in singular_points(F)
        assert F.evaluate([1, 0, 0, 0, 0, 0]) == 0
        assert F.partial(0).evaluate([1, 0, 0, 0, 0, 0]) == 0


def test_singular_model_cone_and_degrees():
    rng = np.random.default_rng(0)
    F3c = random_form(F7, 5, 3, rng)
    F = singular_cubic_model(HomogeneousForm(F7, 5, 2, {}), F3c)
    assert all(m[0] == 0 for m in F.coeffs)
    with pytest.raises(ValueError):
        singular_cubic_model(F3c, F3c)


def test_s_points_plane():
    F2q = HomogeneousForm(F7, 5, 2, {(0, 2, 0, 0, 0): 1})
    F3c = HomogeneousForm(F7, 5, 3, {(0, 0, 3, 0, 0): 1})
    pts = s_points(F2q, F3c)
    assert len(pts) == 57 == projective_count(2, 7)
    assert all(p[1] == p[2] == 0 for p in pts)


def test_s_points_smoothness_report():
    rng = np.random.default_rng(0)
    F2q, F3c = random_form(F7, 5, 2, rng), random_form(F7, 5, 3, rng)
    pts, rep = s_points(F2q, F3c, report=True)
    assert rep.point_count == len(pts) > 0
    assert "rational points" in rep.to_json()["scope"]
    # brute-force Jacobian rank at each point
    grads = [F2q.gradient(), F3c.gradient()]
    sing = [p for p in pts if rank(F7, [[g.evaluate(p) for g in gs] for gs in grads]) < 2]
    assert sorted(sing) == rep.singular


def test_s_counts_look_like_a_surface():
    inst = load_instance(generate_instance(7, 1))
    rep = s_count_report(inst["F2"], inst["F3"], ext=2)
    assert 1.5 < rep.dimension_estimate < 2.5


def test_xv_zero_forms_give_grassmannian():
    zero = SkewForm(((0,) * 6,) * 6, F2)
    assert len(xv_points([zero] * 6)) == 651


def brute_xv(basis, field):
    out = []
    for chunk in grassmannian_points(field):
        for m in chunk:
            u, v = [int(c) for c in m[0]], [int(c) for c in m[1]]
            if all(b(u, v) == 0 for b in basis):
                out.append(m)
    return out


@pytest.mark.parametrize("q,nforms", [(2, 6), (3, 6), (2, 3), (3, 2)])
def test_xv_matches_grassmannian_scan(q, nforms):
    f = make_field(q)
    rng = np.random.default_rng(q + nforms)
    basis = [random_skew(f, rng) for _ in range(nforms)]
    got = {tuple(m.ravel()) for m in xv_points(basis)}
    want = {tuple(m.ravel()) for m in brute_xv(basis, f)}
    assert got == want


def test_xv_report_single_field():
    inst = load_instance(generate_instance(7, 3))
    rep = xv_count_report(inst["basis"])
    assert rep.counts[1] > 0 and rep.dimension_estimate is None


def test_instance_roundtrip_and_load_form():
    doc = generate_instance(7, 5)
    inst = load_instance(json.dumps(doc))
    assert inst["seed"] == 5 and len(inst["basis"]) == 6
    F = load_form(doc)
    assert F == singular_cubic_model(inst["F2"], inst["F3"])
    assert load_form(F.to_json()) == F
