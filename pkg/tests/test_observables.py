"""Observable predicates: validation, triviality, noise content, minimal
sufficiency, extremality, and the per-observable monotones."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from gptwb.numerics import dot
from gptwb.observables import (
    PreconditionViolated,
    is_extreme_clean,
    is_indecomposable_effect,
    is_trivial,
    lambda_max_obs,
    lambda_min_obs,
    minimally_sufficient,
    mix_observables,
    noise_content,
    observable,
    observable_from_json,
    trivial_observable,
    uniform_trivial,
    validate,
)
from gptwb.spaces import (
    make_ball,
    make_classical,
    make_polygon,
    polygon_extreme_even,
    polygon_extreme_odd,
)
from conftest import random_observable


def hexagon_pair():
    sp = make_polygon(6)
    return sp, observable(sp, (polygon_extreme_even(6, 1), polygon_extreme_even(6, 4)))


# ------------------------------------------------------------------ validation
def test_trivial_observable_validates():
    sp = make_polygon(6)
    assert validate(trivial_observable(sp, (0.2, 0.3, 0.5)))


def test_hexagon_antipodal_pair_validates():
    _, a = hexagon_pair()
    assert validate(a)


def test_subnormalized_family_fails():
    sp = make_polygon(6)
    bad = observable(sp, [tuple(0.45 * u for u in sp.unit)] * 2)
    assert not validate(bad)


# ------------------------------------------------------------------ triviality
def test_uniform_trivial_is_trivial():
    sp = make_polygon(6)
    assert is_trivial(uniform_trivial(sp, 2))
    assert is_trivial(observable(sp, [sp.unit]))


def test_extreme_pair_not_trivial():
    _, a = hexagon_pair()
    assert not is_trivial(a)


# --------------------------------------------------------------- noise content
def test_trivial_noise_content_is_one():
    sp = make_polygon(6)
    t = trivial_observable(sp, (0.25, 0.75))
    assert abs(noise_content(t).w_trivial - 1.0) < 1e-12


def test_extreme_pair_noise_content_zero():
    _, a = hexagon_pair()
    assert abs(noise_content(a).w_trivial) < 1e-9


def test_mixture_with_trivial_raises_noise():
    sp, a = hexagon_pair()
    mixed = mix_observables((0.5, 0.5), (a, uniform_trivial(sp, 2)))
    assert noise_content(mixed).w_trivial >= 0.5 - 1e-12


def test_noise_content_on_ball_closed_form():
    ball = make_ball(3)
    a = observable(ball, (ball.effect_from_bloch((0.6, 0, 0), 1),
                          ball.effect_from_bloch((-0.6, 0, 0), 1)))
    rep = noise_content(a)
    assert abs(rep.w_trivial - (1 - 0.6)) < 1e-12


def test_noise_content_bounds_and_triviality():
    rng = random.Random(11)
    sp = make_polygon(6)
    for _ in range(50):
        a = random_observable(sp, rng.randint(2, 4), rng)
        w = noise_content(a).w_trivial
        assert -1e-9 <= w <= 1 + 1e-9
        if is_trivial(a):
            assert abs(w - 1) < 1e-9


def test_min_monotone_equals_negative_noise_content():
    """Identity between the observable min monotone and the noise content,
    checked on 200 random observables."""
    rng = random.Random(3)
    spaces = [make_polygon(5), make_polygon(6), make_classical(3)]
    for i in range(200):
        sp = spaces[i % 3]
        a = random_observable(sp, rng.randint(2, 4), rng)
        assert abs(lambda_min_obs(a) + noise_content(a).w_trivial) < 1e-12


# ------------------------------------------------------------------ monotones
def test_lambda_monotones_on_trivial():
    sp = make_polygon(6)
    t = trivial_observable(sp, (0.25, 0.75))
    assert abs(lambda_max_obs(t) - 1.0) < 1e-12
    assert abs(lambda_min_obs(t) + 1.0) < 1e-12


def test_lambda_max_on_hexagon_pair():
    sp, a = hexagon_pair()
    # independent evaluation of the extreme effects on all vertices
    expected = sum(max(dot(e, v) for v in sp.vertices) for e in a.effects)
    assert abs(expected - 2.0) < 1e-9
    assert abs(lambda_max_obs(a) - 2.0) < 1e-9


def test_lambda_monotones_on_simplex_distinguisher():
    sp = make_classical(3)
    ind = observable(sp, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert abs(lambda_max_obs(ind) - 3.0) < 1e-12
    assert abs(lambda_min_obs(ind)) < 1e-12


# ------------------------------------------------------------ indecomposability
def test_hexagon_extreme_effect_indecomposable():
    sp = make_polygon(6)
    assert is_indecomposable_effect(sp, polygon_extreme_even(6, 1))


def test_unit_not_indecomposable():
    sp = make_polygon(6)
    assert not is_indecomposable_effect(sp, sp.unit)


def test_pentagon_upper_effect_decomposable():
    sp = make_polygon(5)
    g1 = polygon_extreme_odd(5, 1)
    f1 = tuple(u - x for u, x in zip(sp.unit, g1))
    assert not is_indecomposable_effect(sp, f1)  # vanishes at one vertex only


def test_zero_effect_rejected():
    sp = make_polygon(6)
    with pytest.raises(ValueError):
        is_indecomposable_effect(sp, sp.zero_effect())


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.05, max_value=1.0), st.integers(1, 6))
def test_indecomposability_scale_invariant(scale, k):
    sp = make_polygon(6)
    e = polygon_extreme_even(6, k)
    scaled = tuple(scale * x for x in e)
    assert is_indecomposable_effect(sp, scaled)


# ---------------------------------------------------------- minimal sufficiency
def test_merge_proportional_halves():
    sp = make_polygon(6)
    e1 = polygon_extreme_even(6, 1)
    e4 = polygon_extreme_even(6, 4)
    a = observable(sp, (tuple(0.5 * x for x in e1), tuple(0.5 * x for x in e1), e4))
    rep = minimally_sufficient(a)
    assert rep.n_outcomes == 2
    assert any(all(abs(x - y) < 1e-9 for x, y in zip(e, e1)) for e in rep.effects)


def test_minimal_observable_unchanged():
    _, a = hexagon_pair()
    rep = minimally_sufficient(a)
    assert rep.n_outcomes == 2
    assert set(rep.outcomes) == set(a.outcomes)


def test_trivial_merges_to_single_outcome():
    sp = make_polygon(6)
    t = trivial_observable(sp, (0.25, 0.75))
    rep = minimally_sufficient(t)
    assert rep.n_outcomes == 1
    assert all(abs(x - u) < 1e-12 for x, u in zip(rep.effects[0], sp.unit))


def test_zero_effects_dropped():
    sp = make_polygon(6)
    e1 = polygon_extreme_even(6, 1)
    e4 = polygon_extreme_even(6, 4)
    a = observable(sp, (e1, sp.zero_effect(), e4))
    assert minimally_sufficient(a).n_outcomes == 2


# ------------------------------------------------------------------ extremality
def test_hexagon_pair_extreme():
    _, a = hexagon_pair()
    assert is_extreme_clean(a)


def test_repeated_direction_not_extreme():
    sp = make_polygon(6)
    e1 = polygon_extreme_even(6, 1)
    e4 = polygon_extreme_even(6, 4)
    a = observable(sp, (tuple(0.5 * x for x in e1), tuple(0.5 * x for x in e1), e4))
    assert not is_extreme_clean(a)


def test_pentagon_trichotomic_extreme():
    from gptwb.simulation import enumerate_irreducibles

    sp = make_polygon(5)
    cand = enumerate_irreducibles(sp)[0]
    assert cand.n_outcomes == 3
    assert is_extreme_clean(cand)


def test_extreme_clean_precondition():
    sp = make_polygon(6)
    t = trivial_observable(sp, (0.5, 0.5))
    with pytest.raises(PreconditionViolated):
        is_extreme_clean(t)


# ---------------------------------------------------------------- serialization
def test_observable_json_round_trip():
    _, a = hexagon_pair()
    back = observable_from_json(a.to_json_dict())
    assert back.outcomes == a.outcomes
    for e, f in zip(back.effects, a.effects):
        assert all(abs(x - y) < 1e-12 for x, y in zip(e, f))
