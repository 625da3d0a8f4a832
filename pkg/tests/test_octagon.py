import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from known import HALF_POINT, IMPLICIT_SUM, IMPLICIT_SUM_CLOSED, unstable_chain
from oracle import GridBox, concretize, saturate_naive
from strategies import grid, octagon_pairs, octagons
from octolyze.dbm import Dbm, leq
from octolyze.numeric import INF
from octolyze.octagon import (
    Kind,
    Octagon,
    OctConstraint,
    _strong_close_exact,
    bar,
    equals,
    forget,
    format_constraints,
    from_constraints,
    is_coherent,
    is_empty,
    is_included,
    is_strongly_closed,
    join,
    meet,
    parse_constraint,
    parse_constraints,
    project,
    restrict,
    strong_closure,
    to_constraints,
    widen,
)

F = Fraction
I = INF


def best_cover(points, n_vars) -> Octagon:
    """Tightest octagon around a finite point set, entry by entry."""

    def form(p, idx):
        return p[idx // 2] if idx % 2 == 0 else -p[idx // 2]

    k = 2 * n_vars
    a = [[max(form(p, j) - form(p, i) for p in points) for j in range(k)] for i in range(k)]
    return Octagon(n_vars, Dbm(a))


# -- encoding -------------------------------------------------------------------


def test_bar():
    assert bar(0) == 1 and bar(5) == 4
    assert all(bar(bar(i)) == i for i in range(10))


def test_constraint_cells():
    assert OctConstraint.sum(0, 1, 3).cells() == [(3, 0, 3), (1, 2, 3)]
    assert OctConstraint.diff(0, 1, 3).cells() == [(2, 0, 3), (1, 3, 3)]
    assert OctConstraint.neg_sum(0, 1, 3).cells() == [(0, 3, 3), (2, 1, 3)]
    assert OctConstraint.upper(1, 2).cells() == [(3, 2, 4)]
    assert OctConstraint.lower(1, F(3, 2)).cells() == [(2, 3, -3)]


def test_constraint_validation():
    with pytest.raises(ValueError):
        OctConstraint.sum(1, 1, 0)
    with pytest.raises(ValueError):
        OctConstraint(Kind.UPPER, 0, 1, 0)
    with pytest.raises(ValueError):
        OctConstraint.upper(0, INF)


def test_from_constraints():
    assert IMPLICIT_SUM[1, 0] == 2 and IMPLICIT_SUM[3, 2] == 4
    assert sum(v != I for v in IMPLICIT_SUM.dbm.entries.ravel()) == 2
    m = HALF_POINT
    assert (m[0, 2], m[3, 1], m[3, 0], m[1, 2], m[2, 3]) == (0, 0, 3, 3, -3)
    assert sum(v != I for v in m.dbm.entries.ravel()) == 5
    assert from_constraints(2, []) == Octagon.top(2)
    with pytest.raises(ValueError):
        from_constraints(2, [OctConstraint.upper(2, 0)])


def test_from_constraints_keeps_tightest():
    m = from_constraints(1, [OctConstraint.upper(0, 3), OctConstraint.upper(0, 1)])
    assert m[1, 0] == 2


def test_to_constraints():
    cs = to_constraints(strong_closure(IMPLICIT_SUM))
    assert OctConstraint.sum(0, 1, 3) in cs
    assert to_constraints(Octagon.top(3)) == []
    assert [c.kind for c in cs] == [Kind.UPPER, Kind.UPPER, Kind.SUM]


@given(octagons(boxed=False))
def test_to_constraints_round_trip(m):
    back = from_constraints(m.n_vars, to_constraints(m))
    assert equals(back, m)
    assert is_coherent(back)


def test_constraint_text():
    names = ["a", "i", "m"]
    for text in ["a + i <= 3", "a - m <= -1/2", "-i - m <= 0", "m <= 4", "a >= -2"]:
        assert parse_constraint(text, names).format(names) == text
    assert parse_constraint("-x + y <= 2", {"x": 0, "y": 1}) == OctConstraint.diff(1, 0, 2)
    assert parse_constraint("-v0 <= 3") == OctConstraint.lower(0, -3)
    assert parse_constraint("v3 >= 1.5") == OctConstraint.lower(3, F(3, 2))
    with pytest.raises(ValueError):
        parse_constraint("2 v0 <= 1")
    with pytest.raises(ValueError):
        parse_constraint("q <= 1", names)
    text = "# bounds\nv0 <= 1\n\nv1 <= 2  # second\n"
    assert from_constraints(2, parse_constraints(text)) == IMPLICIT_SUM
    assert format_constraints(IMPLICIT_SUM) == "v0 <= 1\nv1 <= 2\n"


# -- strong closure -------------------------------------------------------------


def test_strong_closure_example():
    s = strong_closure(IMPLICIT_SUM)
    assert s == IMPLICIT_SUM_CLOSED
    assert s[1, 2] == 3 and s[3, 0] == 3
    assert equals(IMPLICIT_SUM, IMPLICIT_SUM_CLOSED)


def test_half_point():
    assert not is_empty(HALF_POINT)
    assert project(HALF_POINT, 0) == (F(3, 2), F(3, 2))
    assert project(HALF_POINT, 1) == (F(3, 2), F(3, 2))
    assert concretize(HALF_POINT, GridBox.of((0, 3, F(1, 2)), (0, 3, F(1, 2)))) == {(F(3, 2), F(3, 2))}
    assert concretize(HALF_POINT, GridBox.of((0, 3, 1), (0, 3, 1))) == set()


def test_empty_octagons():
    m = from_constraints(1, [OctConstraint.upper(0, 0), OctConstraint.lower(0, 1)])
    assert is_empty(m)
    assert strong_closure(m).is_bottom
    assert is_empty(Octagon.bottom(2))
    with pytest.raises(ValueError):
        project(m, 0)


def test_project_top():
    assert project(Octagon.top(2), 1) == (-INF, INF)


@given(octagons())
def test_strong_closure_matches_naive_saturation(m):
    s = strong_closure(m)
    if s.is_bottom:
        assert concretize(m, grid(m.n_vars)) == set()
        return
    assert s == saturate_naive(m)


@given(octagons(boxed=False))
def test_strong_closure_properties(m):
    s = strong_closure(m)
    if s.is_bottom:
        return
    assert strong_closure(s) == s
    assert is_strongly_closed(s)
    assert is_coherent(s)
    assert leq(s.dbm, m.dbm)
    a = s.dbm.entries
    n = a.shape[0]
    for i, j in itertools.product(range(n), repeat=2):
        assert a[i, j] <= (a[i, bar(i)] + a[bar(j), j]) / 2
        assert all(a[i, j] <= a[i, k] + a[k, j] for k in range(n))
    assert all(a[i, i] == 0 for i in range(n))


@given(octagons())
def test_strong_closure_keeps_the_set(m):
    box = grid(m.n_vars)
    assert concretize(strong_closure(m), box) == concretize(m, box)


@given(octagons(), st.data())
def test_strong_closure_is_a_normal_form(m, data):
    # tightening some entries to implied values keeps the set, so the
    # closures must coincide
    s = strong_closure(m)
    if s.is_bottom:
        return
    n = 2 * m.n_vars
    cells = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=6))
    a = m.dbm.entries.copy()
    for i, j in cells:
        a[i, j] = s[i, j]
        a[bar(j), bar(i)] = s[i, j]
    other = Octagon(m.n_vars, Dbm(a.tolist()))
    assert strong_closure(other) == s


@given(octagons(max_vars=2))
def test_strong_closure_saturation(m):
    s = strong_closure(m)
    if s.is_bottom:
        return
    pts = concretize(m, grid(m.n_vars))
    sign = lambda k: 1 if k % 2 == 0 else -1  # noqa: E731
    n = 2 * m.n_vars
    for i, j in itertools.product(range(n), repeat=2):
        if s[i, j] != I:
            assert any(sign(j) * p[j // 2] - sign(i) * p[i // 2] == s[i, j] for p in pts)


@given(octagons())
def test_emptiness_matches_grid(m):
    assert is_empty(m) == (concretize(m, grid(m.n_vars)) == set())


def test_exact_fallback_agrees_with_fast_path():
    big = 2**55
    m = from_constraints(
        2,
        [
            OctConstraint.upper(0, big),
            OctConstraint.lower(1, F(-big, 3)),
            OctConstraint.diff(0, 1, F(1, 7)),
        ],
    )
    s = strong_closure(m)
    assert s == Octagon(2, Dbm(_strong_close_exact(m.dbm.entries.copy()).tolist()))
    assert project(s, 0) == (-INF, big)
    assert project(s, 1) == (F(-big, 3), INF)


@given(octagons(boxed=False))
def test_fast_path_agrees_with_exact(m):
    s = strong_closure(m)
    if not s.is_bottom:
        assert s == Octagon(m.n_vars, Dbm(_strong_close_exact(m.dbm.entries.copy()).tolist()))


# -- comparison -----------------------------------------------------------------


def test_inclusion_examples():
    small = from_constraints(1, [OctConstraint.upper(0, 1)])
    big = from_constraints(1, [OctConstraint.upper(0, 2)])
    assert is_included(small, big) and not is_included(big, small)
    assert is_included(Octagon.bottom(1), small)
    assert not is_included(small, Octagon.bottom(1))
    with pytest.raises(ValueError):
        is_included(small, Octagon.top(2))


@given(octagon_pairs())
def test_inclusion_matches_grid(pair):
    m, n = pair
    box = grid(m.n_vars)
    gm, gn = concretize(m, box), concretize(n, box)
    assert is_included(m, n) == (gm <= gn)
    assert equals(m, n) == (gm == gn)


# -- lattice operators ----------------------------------------------------------


def test_meet_and_join_examples():
    one = from_constraints(1, parse_constraints("v0 <= 1\nv0 >= 1"))
    minus_one = from_constraints(1, parse_constraints("v0 <= -1\nv0 >= -1"))
    hull = join(one, minus_one)
    assert to_constraints(hull) == [OctConstraint.lower(0, -1), OctConstraint.upper(0, 1)]
    assert equals(meet(IMPLICIT_SUM, Octagon.top(2)), IMPLICIT_SUM)
    assert meet(one, minus_one).is_bottom
    assert join(Octagon.bottom(1), one) == strong_closure(one)
    assert join(one, Octagon.bottom(1)) == strong_closure(one)
    assert meet(Octagon.bottom(1), one).is_bottom


@given(octagon_pairs())
def test_meet_is_exact(pair):
    m, n = pair
    box = grid(m.n_vars)
    assert concretize(meet(m, n), box) == concretize(m, box) & concretize(n, box)


@given(octagon_pairs(max_vars=2))
def test_join_is_the_best_cover(pair):
    m, n = pair
    box = grid(m.n_vars)
    union = concretize(m, box) | concretize(n, box)
    j = join(m, n)
    assert concretize(j, box) >= union
    if not union:
        assert j.is_bottom
        return
    best = best_cover(union, m.n_vars)
    assert j == best
    assert is_strongly_closed(j)


@given(octagon_pairs(max_vars=2), st.lists(st.integers(0, 3), min_size=16, max_size=16))
def test_join_below_every_cover(pair, slack):
    m, n = pair
    box = grid(m.n_vars)
    union = concretize(m, box) | concretize(n, box)
    if not union:
        return
    best = best_cover(union, m.n_vars).dbm.entries
    k = 2 * m.n_vars
    cover = best.copy()
    for idx, (i, j) in enumerate(itertools.product(range(k), repeat=2)):
        if i != j:
            cover[i, j] += slack[idx % len(slack)]
    assert leq(join(m, n).dbm, Dbm(cover.tolist()))


def test_widen_examples():
    m = from_constraints(2, parse_constraints("v0 <= 1\nv0 - v1 <= 2"))
    n = from_constraints(2, parse_constraints("v0 <= 3\nv0 - v1 <= 2"))
    assert widen(m, m) == m
    w = widen(m, n)
    assert w[1, 0] == I and w[2, 0] == 2
    assert widen(Octagon.bottom(2), n) == n
    assert widen(m, Octagon.bottom(2)) == m


@given(octagon_pairs())
def test_widen_covers_both(pair):
    m, n = pair
    w = widen(m, strong_closure(n))
    box = grid(m.n_vars)
    assert concretize(w, box) >= concretize(m, box) | concretize(n, box)
    assert is_coherent(w)


@given(st.integers(1, 3).flatmap(lambda k: st.lists(octagons(k, k, boxed=False), min_size=2, max_size=40)))
def test_widening_terminates_on_any_sequence(seq):
    n = seq[0].n_vars
    limit = (2 * n) ** 2 + 1
    m = strong_closure(seq[0])
    steps = 0
    for x in itertools.cycle(seq[1:]):
        nxt = widen(m, strong_closure(x))
        steps += 1
        if nxt == m:
            break
        m = nxt
        assert steps <= limit
    assert steps <= limit


def test_unstable_chain():
    # closing the left argument of widening never stabilizes on this chain
    m = strong_closure(unstable_chain(0))
    trap = [m]
    for i in range(1, 6):
        trap.append(strong_closure(widen(trap[-1], strong_closure(unstable_chain(i)))))
    for a, b in zip(trap, trap[1:]):
        assert leq(a.dbm, b.dbm) and a != b
    good = [m]
    for i in range(1, 6):
        good.append(widen(good[-1], strong_closure(unstable_chain(i))))
    assert good[2] == good[3] == good[5]


def test_forget():
    point = from_constraints(2, parse_constraints("v0 <= 1\nv0 >= 1\nv1 <= 2\nv1 >= 2"))
    f = forget(point, 0)
    assert to_constraints(strong_closure(f)) == [OctConstraint.lower(1, 2), OctConstraint.upper(1, 2)]
    assert forget(Octagon.top(2), 0) == strong_closure(Octagon.top(2))
    m = from_constraints(2, parse_constraints("v0 + v1 <= 3\nv0 >= 1"))
    assert OctConstraint.upper(1, 2) in to_constraints(forget(m, 0))
    assert forget(Octagon.bottom(2), 0).is_bottom


@given(octagons(), st.integers(0, 2))
def test_forget_is_projection(m, k):
    k = k % m.n_vars
    box = grid(m.n_vars)
    shadow = {p[:k] + p[k + 1 :] for p in concretize(m, box)}
    got = {p[:k] + p[k + 1 :] for p in concretize(forget(m, k), box)}
    assert got == shadow


def test_restrict():
    m = from_constraints(3, parse_constraints("v0 - v1 <= 1\nv1 - v2 <= 1\nv2 <= 0"))
    r = restrict(m, [0, 2])
    assert to_constraints(r) == [
        OctConstraint.upper(0, 2),
        OctConstraint.upper(2, 0),
        OctConstraint.sum(0, 2, 2),
        OctConstraint.diff(0, 2, 2),
    ]


def test_operators_reject_mismatched_sizes():
    for op in (meet, join, widen, equals):
        with pytest.raises(ValueError):
            op(Octagon.top(1), Octagon.top(2))


def test_octagon_value_semantics():
    with pytest.raises(ValueError):
        Octagon(0, None)
    with pytest.raises(ValueError):
        Octagon(2, Dbm.top(2))
    with pytest.raises(ValueError):
        Octagon.bottom(1)[0, 0]
    assert Octagon.bottom(2) == Octagon.bottom(2)
    assert Octagon.bottom(2) != Octagon.top(2)
    assert "bottom" in repr(Octagon.bottom(1))
    assert "v0 + v1 <= 3" in repr(IMPLICIT_SUM_CLOSED)
