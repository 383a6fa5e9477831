"""States, operators, and the elementary bracket operations."""

import math

import numpy as np
import pytest

import oracle
from twobox import (
    BOX_LABELS,
    DEFAULT_TOLERANCE,
    DimensionMismatchError,
    Ket,
    Operator,
    SPIN_LABELS,
    UnnormalizableStateError,
    UnnormalizedKet,
    abs2,
    apply,
    basis_state,
    canonical_state_name,
    inner,
    is_eigenstate,
    label_scheme,
    make_single_particle_state,
    matrix_element,
    tensor,
)

TOL = 1e-12
S = 1 / math.sqrt(2)


def test_named_single_particle_states():
    for name, (cL, cR) in oracle.NAMED.items():
        ket = make_single_particle_state(name)
        assert abs(ket.amplitudes[0] - cL) <= TOL
        assert abs(ket.amplitudes[1] - cR) <= TOL
        assert abs(ket.norm() - 1.0) <= TOL


def test_long_and_short_state_names_agree():
    for short, long in [("+", "plus"), ("-", "minus"), ("+i", "plus_i"), ("-i", "minus_i")]:
        a = make_single_particle_state(short).amplitudes
        b = make_single_particle_state(long).amplitudes
        assert np.array_equal(a, b)
    assert canonical_state_name("+i") == "plus_i"
    with pytest.raises(ValueError, match="unknown state name"):
        canonical_state_name("sideways")


def test_explicit_pair_is_normalized():
    ket = make_single_particle_state((3, 4j))
    assert ket.amplitudes[0] == 0.6
    assert ket.amplitudes[1] == 0.8j


def test_zero_pair_is_rejected():
    with pytest.raises(UnnormalizableStateError, match="unnormalizable state"):
        make_single_particle_state((0, 0))


def test_ket_requires_unit_norm():
    with pytest.raises(ValueError, match="not normalized"):
        Ket([1.0, 1.0])
    ket = Ket.normalized([1.0, 1.0])
    assert abs(ket.amplitudes[0] - S) <= TOL


def test_normalize_rejects_the_zero_vector():
    with pytest.raises(UnnormalizableStateError, match="unnormalizable state"):
        UnnormalizedKet([0, 0, 0, 0]).normalize()


def test_amplitude_validation():
    with pytest.raises(ValueError, match="power of two"):
        Ket([1.0, 0.0, 0.0])
    with pytest.raises(ValueError, match="finite"):
        Ket([np.nan, 0.0])
    with pytest.raises(ValueError, match="one dimensional"):
        Ket([[1.0, 0.0]])


def test_states_are_immutable():
    ket = basis_state("LL")
    with pytest.raises(AttributeError):
        ket.amplitudes = None
    with pytest.raises(ValueError):
        ket.amplitudes[0] = 2.0


def test_basis_state_index_convention():
    # particle 1 is the most significant bit, L = 0, R = 1
    ket = basis_state("LRL")
    assert ket.amplitudes[0b010] == 1.0
    assert basis_state("RRR").amplitudes[7] == 1.0
    assert basis_state("L").amplitudes[0] == 1.0
    with pytest.raises(ValueError, match="not part of the box scheme"):
        basis_state("LX")


def test_label_schemes():
    assert BOX_LABELS.basis_label(2, 3) == "LRL"
    assert SPIN_LABELS.basis_label(2, 3) == "↑⇓↑"
    assert label_scheme("spin").state_display("plus_i") == "y,+"
    with pytest.raises(ValueError, match="basis index"):
        BOX_LABELS.basis_label(8, 3)
    with pytest.raises(ValueError, match="unknown label scheme"):
        label_scheme("color")


def test_tensor_of_plus_states_is_uniform():
    ket = tensor([make_single_particle_state("+")] * 3)
    expected = oracle.product_state(["+", "+", "+"])
    for index, lab in enumerate(oracle.labels(3)):
        assert abs(ket.amplitudes[index] - expected[lab]) <= TOL
    assert abs(ket.amplitudes[5] - 1 / (2 * math.sqrt(2))) <= TOL


def test_tensor_keeps_factor_order():
    ket = tensor([make_single_particle_state(n) for n in ("+i", "+i", "+i")])
    # LLR sits at index 1; only the R slot contributes the factor i
    assert abs(ket.amplitudes[1] - 1j / (2 * math.sqrt(2))) <= TOL
    mixed = tensor([basis_state("L"), basis_state("R")])
    assert mixed.amplitudes[0b01] == 1.0


def test_tensor_type_and_validation():
    kets = [make_single_particle_state("+"), make_single_particle_state("-")]
    assert isinstance(tensor(kets), Ket)
    raw = UnnormalizedKet([2.0, 0.0])
    assert isinstance(tensor([kets[0], raw]), UnnormalizedKet)
    with pytest.raises(ValueError, match="at least one"):
        tensor([])
    with pytest.raises(ValueError, match="mixed label schemes"):
        tensor([kets[0], kets[1].with_labels(SPIN_LABELS)])


def test_overlap_of_the_standard_selection():
    pre = tensor([make_single_particle_state("+")] * 3)
    post = tensor([make_single_particle_state("+i")] * 3)
    value = inner(post, pre)
    assert abs(value - (-(1 + 1j) / 4)) <= TOL
    o_pre = oracle.product_state(["+", "+", "+"])
    o_post = oracle.product_state(["+i", "+i", "+i"])
    assert abs(value - oracle.overlap(o_post, o_pre, 3)) <= TOL


def test_inner_conjugate_symmetry():
    rng = np.random.default_rng(20240811)
    for _ in range(25):
        a = UnnormalizedKet(rng.standard_normal(4) + 1j * rng.standard_normal(4))
        b = UnnormalizedKet(rng.standard_normal(4) + 1j * rng.standard_normal(4))
        assert abs(inner(a, b) - inner(b, a).conjugate()) <= 1e-10


def test_tensor_norm_is_multiplicative():
    rng = np.random.default_rng(7)
    for _ in range(25):
        a = UnnormalizedKet(rng.standard_normal(2) + 1j * rng.standard_normal(2))
        b = UnnormalizedKet(rng.standard_normal(4) + 1j * rng.standard_normal(4))
        assert abs(tensor([a, b]).norm() - a.norm() * b.norm()) <= 1e-10


def test_inner_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        inner(basis_state("L"), basis_state("LL"))


def test_apply_returns_an_unnormalized_state():
    out = apply(Operator.identity(1), basis_state("L"))
    assert isinstance(out, UnnormalizedKet)
    assert not isinstance(out, Ket)
    half = Operator(np.diag([1.0, 0.0]))
    projected = apply(half, make_single_particle_state("+"))
    assert abs(projected.norm() - S) <= TOL
    with pytest.raises(DimensionMismatchError):
        apply(Operator.identity(2), basis_state("L"))


def test_matrix_element_is_linear_in_the_ket():
    rng = np.random.default_rng(99)
    dim = 4
    for _ in range(20):
        m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        op = Operator(m)
        bra = UnnormalizedKet(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))
        u = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        alpha, beta = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        lhs = matrix_element(bra, op, UnnormalizedKet(alpha * u + beta * v))
        rhs = (alpha * matrix_element(bra, op, UnnormalizedKet(u))
               + beta * matrix_element(bra, op, UnnormalizedKet(v)))
        assert abs(lhs - rhs) <= 1e-9


def test_operator_algebra():
    eye = Operator.identity(1)
    zero = Operator.zero(1)
    assert np.array_equal((eye + zero).entries, eye.entries)
    assert np.array_equal((eye - eye).entries, zero.entries)
    assert np.array_equal((2 * eye).entries, (eye * 2).entries)
    assert np.array_equal((-eye).entries, (eye * -1).entries)
    assert np.array_equal((eye @ eye).entries, eye.entries)
    with pytest.raises(DimensionMismatchError):
        eye + Operator.identity(2)
    with pytest.raises(ValueError, match="square"):
        Operator(np.zeros((2, 3)))
    with pytest.raises(AttributeError):
        eye.entries = None


def test_operator_dagger():
    op = Operator([[0, 1j], [0, 0]])
    assert np.array_equal(op.dagger().entries, np.array([[0, 0], [-1j, 0]]))


def test_is_eigenstate_requires_a_normalized_ket():
    with pytest.raises(TypeError, match="normalized Ket"):
        is_eigenstate(Operator.identity(1), UnnormalizedKet([2.0, 0.0]), 1.0)
    assert is_eigenstate(Operator.identity(2), basis_state("LR"), 1.0)
    assert not is_eigenstate(Operator.identity(2), basis_state("LR"), 0.0)


def test_abs2_stays_exact_for_dyadics():
    assert abs2(0.25 + 0.25j) == 0.125
    assert abs2(-(1 + 1j) / 8) == 1 / 32


def test_repr_is_compact():
    text = repr(tensor([make_single_particle_state("+")] * 3))
    assert text.startswith("Ket(")
    assert "..." in text  # eight terms, shown truncated
    assert repr(UnnormalizedKet([0.0, 0.0])) == "UnnormalizedKet(0)"


def test_default_tolerance_value():
    assert DEFAULT_TOLERANCE == 1e-12
