import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from netinform.errors import DegreeOverflow, NotProper, PoleOnGrid
from netinform.tf import (
    Poly,
    RationalTF,
    Status,
    TFMatrix,
    eval_tf,
    realize,
    tf,
    tf2ss,
    tf_add,
    tf_mul,
    tf_sub,
    unit_tf,
    zero_tf,
)


def horner_conj(coeffs, z):
    # Independent oracle: explicit power expansion instead of Horner.
    return sum(c * z ** k for k, c in enumerate(coeffs))


def random_stable_tf(rng):
    nb = rng.integers(0, 4)
    num = [0.0] + [rng.uniform(-1, 1) for _ in range(nb)]
    na = rng.integers(0, 3)
    den = np.array([1.0])
    for _ in range(na):
        den = np.convolve(den, [1.0, -rng.uniform(-0.7, 0.7)])
    return tf(num, den.tolist())


def test_eval_unit():
    assert eval_tf(unit_tf(), np.exp(-1j * 0.3)) == 1.0


def test_eval_pure_delay_gain_at_dc():
    f = tf([0.0, 0.5], [1.0])
    assert eval_tf(f, 1.0) == pytest.approx(0.5)


def test_eval_matches_expansion_oracle():
    rng = np.random.default_rng(0)
    for _ in range(8):
        f = random_stable_tf(rng)
        for _ in range(16):
            z = np.exp(-1j * rng.uniform(0, np.pi))
            want = horner_conj(f.num.coeffs, z) / horner_conj(f.den.coeffs, z)
            assert eval_tf(f, z) == pytest.approx(want, abs=1e-12)


def test_pole_on_grid_guard():
    f = tf([1.0], [1.0, -1.0])  # pole at z = 1
    with pytest.raises(PoleOnGrid):
        eval_tf(f, 1.0)


def test_add_identity():
    a = tf([0.0, 0.3], [1.0, -0.5])
    s = tf_add(a, zero_tf())
    assert s.num.coeffs == a.num.coeffs and s.den.coeffs == a.den.coeffs


def test_mul_identity():
    a = tf([0.0, 0.3], [1.0, -0.5])
    m = tf_mul(a, unit_tf())
    z = np.exp(-1j * 0.4)
    assert eval_tf(m, z) == pytest.approx(eval_tf(a, z), abs=1e-14)


def test_ops_match_pointwise_oracle():
    rng = np.random.default_rng(1)
    for _ in range(10):
        a, b = random_stable_tf(rng), random_stable_tf(rng)
        for _ in range(8):
            z = np.exp(-1j * rng.uniform(0.01, np.pi - 0.01))
            assert eval_tf(tf_add(a, b), z) == pytest.approx(
                eval_tf(a, z) + eval_tf(b, z), abs=1e-12)
            assert eval_tf(tf_sub(a, b), z) == pytest.approx(
                eval_tf(a, z) - eval_tf(b, z), abs=1e-12)
            assert eval_tf(tf_mul(a, b), z) == pytest.approx(
                eval_tf(a, z) * eval_tf(b, z), abs=1e-12)


def test_degree_cap_overflow():
    a = tf([0.0] * 40 + [1.0], [1.0])
    with pytest.raises(DegreeOverflow):
        tf_mul(a, a)


def test_denominator_constant_term_required():
    with pytest.raises(NotProper):
        tf([1.0], [0.0, 1.0])


def test_canonical_denominator_normalization():
    f = tf([2.0], [2.0, -1.0])
    assert f.den.coeffs[0] == 1.0
    assert f.num.coeffs[0] == pytest.approx(1.0)


def test_trailing_zero_trim():
    assert Poly((1.0, 2.0, 0.0, 0.0)).coeffs == (1.0, 2.0)
    assert Poly((0.0, 0.0)).coeffs == (0.0,)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=1, max_size=5),
       st.lists(st.floats(-2, 2), min_size=1, max_size=5),
       st.floats(0.01, 3.1))
def test_eval_homomorphism_property(na, nb, w):
    a = tf(na if any(na) else [1.0], [1.0, 0.3])
    b = tf(nb if any(nb) else [1.0], [1.0, -0.4])
    z = np.exp(-1j * w)
    for op, pyop in [(tf_add, lambda x, y: x + y), (tf_sub, lambda x, y: x - y),
                     (tf_mul, lambda x, y: x * y)]:
        got = eval_tf(op(a, b), z)
        want = pyop(eval_tf(a, z), eval_tf(b, z))
        assert got == pytest.approx(want, abs=1e-10)


def test_realize_identity():
    ss = realize(TFMatrix.identity(3))
    assert ss.n_states == 0
    assert np.allclose(ss.D, np.eye(3))


def test_realize_first_order_matches_eval():
    f = tf([0.0, 0.7], [1.0, -0.4])
    ss = realize(TFMatrix([[f]]))
    assert ss.n_states == 1
    rng = np.random.default_rng(2)
    for _ in range(32):
        z = np.exp(-1j * rng.uniform(0.01, np.pi - 0.01))
        assert ss.response(z)[0, 0] == pytest.approx(eval_tf(f, z), abs=1e-10)


def test_realize_mimo_matches_pointwise():
    rng = np.random.default_rng(3)
    entries = [[random_stable_tf(rng) for _ in range(2)] for _ in range(2)]
    m = TFMatrix(entries)
    ss = realize(m)
    for _ in range(64):
        z = np.exp(-1j * rng.uniform(0.01, np.pi - 0.01))
        assert np.allclose(ss.response(z), m(z), atol=1e-9)


def test_realize_fir_delay_is_causal():
    # Numerator degree above denominator degree is legal in the delay domain.
    ss = tf2ss([0.0, 0.0, 1.0], [1.0])
    z = np.exp(-1j * 0.6)
    assert ss.response(z)[0, 0] == pytest.approx(z ** 2, abs=1e-12)


def test_hollow_and_monic_predicates():
    m = TFMatrix.zeros(2, 2)
    m.entries[0][1] = tf([0.0, 1.0])
    assert m.is_hollow()
    h = TFMatrix.identity(2)
    h.entries[0][1] = tf([0.0, 0.5])
    assert h.is_monic()
    h.entries[1][1] = tf([0.5])
    assert not h.is_monic()
