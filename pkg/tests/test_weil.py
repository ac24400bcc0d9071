import random

import pytest

from anfsat.anf import ONE, evaluate, format_anf, is_model, parse_anf
from anfsat.mvc import build_graph, min_vertex_cover
from anfsat.weil import (REDUCTION_TERMS, BinaryField, base_system, InstanceSpec, SymbolicPoly, generate_instance,
                         is_irreducible, lift_assignment, summation_poly, weil_descent)

FIELDS = [BinaryField(n) for n in (3, 8, 13, 17, 32, 64)]


def test_field_examples():
    f = BinaryField(3)
    assert f.modulus == 0b1011
    assert f.mul(0b010, 0b100) == 0b011
    for a in range(8):
        assert f.add(a, a) == 0 and f.mul(a, 1) == a


@pytest.mark.parametrize("field", FIELDS, ids=lambda f: f"n{f.n}")
def test_field_axioms(field):
    rng = random.Random(field.n)
    for _ in range(10**4):
        a, b, c = (field.random(rng) for _ in range(3))
        assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))
        assert field.mul(a, b ^ c) == field.mul(a, b) ^ field.mul(a, c)
        assert field.mul(a, b) == field.mul(b, a)
        assert field.mul(a, b) < field.order


def test_reduction_table_irreducible_and_lowest_weight():
    for n, mids in REDUCTION_TERMS.items():
        f = (1 << n) | 1
        for e in mids:
            f |= 1 << e
        assert is_irreducible(f), n
        if len(mids) == 3:
            assert not any(is_irreducible((1 << n) | (1 << e) | 1) for e in range(1, n)), n
        else:
            assert not any(is_irreducible((1 << n) | (1 << e) | 1) for e in range(1, mids[0])), n


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        BinaryField(4, 0b10101)  # (t^2 + t + 1)^2
    with pytest.raises(ValueError):
        BinaryField(65)


def test_summation_polynomials():
    assert summation_poly(2).terms == {(1, 0), (0, 1)}
    assert summation_poly(3).terms == {(2, 2, 0), (2, 0, 2), (1, 1, 1), (0, 2, 2), (0, 0, 0)}
    with pytest.raises(ValueError):
        summation_poly(5)


def test_s4_symmetric_and_matches_closed_form():
    s4 = summation_poly(4)
    assert s4.is_symmetric()
    X = lambda i, p=1: SymbolicPoly.var(4, i, p)
    one = SymbolicPoly.one(4)
    a2, a1, a0 = X(1, 2) + X(2, 2), X(1) * X(2), X(1, 2) * X(2, 2) + one
    b2, b1, b0 = X(3, 2) + X(4, 2), X(3) * X(4), X(3, 2) * X(4, 2) + one
    t = a2 * b0 + a0 * b2
    assert s4 == t * t + (a2 * b1 + a1 * b2) * (a1 * b0 + a0 * b1)


def test_s4_vanishes_on_shared_roots():
    f = BinaryField(8)
    s3, s4 = summation_poly(3), summation_poly(4)
    rng = random.Random(1)
    trials = 0
    while trials < 100:
        x, a, c = (f.random(rng) for _ in range(3))
        bs = [b for b in range(f.order) if s3.evaluate(f, (a, b, x)) == 0]
        ds = [d for d in range(f.order) if s3.evaluate(f, (c, d, x)) == 0]
        if not bs or not ds:
            continue
        assert s4.evaluate(f, (a, rng.choice(bs), c, rng.choice(ds))) == 0
        trials += 1


def test_descent_shape_of_reference_parameters():
    s = weil_descent(summation_poly(3), BinaryField(41), 20, {3: 0x1234567})
    assert len(s.equations) == 41 and s.num_vars == 40


def test_descent_of_s2_is_linear():
    s = weil_descent(summation_poly(2), BinaryField(9), 4, {})
    assert len(s.equations) == 9 and s.num_vars == 8 and s.is_linear()
    assert min_vertex_cover(build_graph(s)).k_prime == 0


def test_descent_constant_lands_in_t0():
    s = weil_descent(summation_poly(3), BinaryField(7), 3, {3: 0})
    res = evaluate(s, [0] * 6)
    assert res[0] is False and all(res[1:])


@pytest.mark.parametrize("order,n,l", [(2, 6, 3), (3, 8, 4), (3, 5, 2), (4, 6, 2)])
def test_descent_agrees_with_field_evaluation(order, n, l):
    f = BinaryField(n)
    rng = random.Random(order * 100 + n)
    poly = summation_poly(order)
    fixed = {order: f.random(rng)} if order > 2 else {}
    s = weil_descent(poly, f, l, fixed)
    free = poly.nvars - len(fixed)
    for _ in range(1000):
        bits = [rng.getrandbits(1) for _ in range(s.num_vars)]
        pts = lift_assignment(bits, l, free)
        vals = pts + [fixed[i] for i in sorted(fixed)]
        assert (poly.evaluate(f, vals) == 0) == is_model(s, bits)


def test_descent_errors():
    f = BinaryField(8)
    with pytest.raises(ValueError):
        weil_descent(summation_poly(3), f, 9, {3: 1})
    with pytest.raises(ValueError):
        weil_descent(summation_poly(3), f, 4, {3: 1 << 8})
    with pytest.raises(ValueError):
        weil_descent(summation_poly(3), f, 8, {3: 1}, max_vars=10)


@pytest.mark.parametrize("seed", range(10))
def test_planted_model_satisfies(seed):
    inst = generate_instance(InstanceSpec(15, 2, 7, seed, "planted"))
    assert all(evaluate(inst.system, inst.planted))


def test_structure_shared_across_seeds_and_modes():
    shapes = {generate_instance(InstanceSpec(13, 2, 6, seed, mode)).system.structure()
              for seed in range(6) for mode in ("planted", "random")}
    assert len(shapes) == 1
    consts = {tuple(eq.has_constant for eq in generate_instance(InstanceSpec(13, 2, 6, seed, "random")).system.equations)
              for seed in range(6)}
    assert len(consts) > 1


def test_random_instance_shape_and_metadata():
    inst = generate_instance(InstanceSpec(17, 2, 8, 4, "random"))
    assert len(inst.system.equations) == 17 and inst.system.num_vars == 16
    assert inst.planted is None
    text = format_anf(inst.system, inst.comments())
    back = parse_anf(text)
    assert back == inst.system
    assert {"n=17", "m=2", "l=8", "seed=4", "mode=random"} <= set(back.comments)


def test_points_lift_planted_model():
    # re-planting flips constant bits; the lifted points hit S_3 = (flipped bits as a field element)
    inst = generate_instance(InstanceSpec(11, 2, 5, 2, "planted"))
    base, target, _ = base_system(11, 2, 5)
    delta = sum((a.has_constant ^ b.has_constant) << j
                for j, (a, b) in enumerate(zip(base.equations, inst.system.equations)))
    f = BinaryField(11)
    assert summation_poly(3).evaluate(f, inst.points(inst.planted) + [target]) == delta


@pytest.mark.parametrize("spec", [
    InstanceSpec(17, 4, 4), InstanceSpec(17, 1, 8), InstanceSpec(17, 2, 8, mode="other"),
    InstanceSpec(17, 2, 18), InstanceSpec(10, 3, 5), InstanceSpec(1, 2, 1),
])
def test_invalid_specs(spec):
    with pytest.raises(ValueError):
        generate_instance(spec)


def test_generation_is_deterministic():
    a = generate_instance(InstanceSpec(13, 3, 4, 9, "planted"))
    b = generate_instance(InstanceSpec(13, 3, 4, 9, "planted"))
    assert format_anf(a.system, a.comments()) == format_anf(b.system, b.comments())
