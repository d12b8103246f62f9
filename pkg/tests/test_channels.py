import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cartanchan import basis as bs
from cartanchan import channels as chn
from cartanchan.basis import Kind

X = np.array([[0, 1], [1, 0]], complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)
I2 = np.eye(2)

params = st.floats(-1.5, 1.5, allow_nan=False)
pairs = st.sampled_from([(d, Kind.SO) for d in range(2, 7)] + [(d, Kind.SP) for d in (2, 4, 6)])


def cb_for(D, kind, flavor="auto"):
    return bs.build_cartan_basis(D, kind, flavor)


def test_channel_validation():
    with pytest.raises(ValueError):
        chn.CartanChannel(3, Kind.SP, 0, 0)
    with pytest.raises(ValueError):
        chn.CartanChannel(4, Kind.SO, float("nan"), 0)
    chn.CartanChannel(4, Kind.SO, 5.0, -3.0)  # non-CP points are still representable


def test_transfer_matrix():
    cb = cb_for(2, Kind.SO, "pauli")
    assert np.allclose(chn.transfer_matrix(chn.CartanChannel(2, Kind.SO, 0.3, -0.2), cb),
                       np.diag([1, -0.2, 0.3, -0.2]))
    assert np.allclose(chn.transfer_matrix(chn.CartanChannel(2, Kind.SO, 1, 1), cb), np.eye(4))
    assert np.allclose(chn.transfer_matrix(chn.CartanChannel(2, Kind.SO, 0, 0), cb), np.diag([1, 0, 0, 0]))


def test_apply_channel_examples():
    cb = cb_for(2, Kind.SO, "pauli")
    out = chn.apply_channel(chn.CartanChannel(2, Kind.SO, 0.5, 0.25), (I2 + X) / 2, cb)
    assert np.allclose(out, (I2 + 0.25 * X) / 2)


@given(pairs, params, params)
def test_unital_and_identity(pair, a, b):
    D, kind = pair
    cb = cb_for(D, kind)
    mixed = np.eye(D) / D
    assert np.abs(chn.apply_channel(chn.CartanChannel(D, kind, a, b), mixed, cb) - mixed).max() <= 1e-12
    rho = np.diag(np.arange(1, D + 1)) / (D * (D + 1) / 2)
    assert np.abs(chn.apply_channel(chn.CartanChannel(D, kind, 1, 1), rho, cb) - rho).max() <= 1e-12


def test_max_entangled_state():
    omega = chn.max_entangled_state(2)
    expected = (np.eye(4) + np.kron(X, X) - np.kron(Y, Y) + np.kron(Z, Z)) / 4
    assert np.allclose(omega, expected)
    for D in (3, 5):
        w = chn.max_entangled_state(D, bs.gellmann_basis(D))
        assert np.isclose(np.trace(w), 1) and np.allclose(w @ w, w)
    assert np.allclose(chn.mes_coefficients(bs.gellmann_basis(3)), np.eye(9) / 9, atol=1e-12)


def test_choi_examples():
    cb = cb_for(2, Kind.SO, "pauli")
    a, b = 0.3, -0.4
    expected = (np.eye(4) - a * np.kron(Y, Y) + b * (np.kron(X, X) + np.kron(Z, Z))) / 4
    assert np.allclose(chn.choi_direct(chn.CartanChannel(2, Kind.SO, a, b), cb).matrix, expected)
    for D, kind in [(3, Kind.SO), (4, Kind.SP)]:
        cb = cb_for(D, kind)
        assert np.allclose(chn.choi_direct(chn.CartanChannel(D, kind, 0, 0), cb).matrix, np.eye(D * D) / D**2)
        ident = chn.choi_via_action(chn.CartanChannel(D, kind, 1, 1), cb)
        ev = np.linalg.eigvalsh(ident.matrix)
        assert np.isclose(ev[-1], 1) and np.allclose(ev[:-1], 0, atol=1e-12)


@given(pairs, params, params)
def test_two_choi_constructions(pair, a, b):
    D, kind = pair
    cb = cb_for(D, kind)
    ch = chn.CartanChannel(D, kind, a, b)
    direct, via = chn.choi_direct(ch, cb).matrix, chn.choi_via_action(ch, cb).matrix
    V = cb.involution.conjugator
    W = np.kron(np.eye(D), V)
    assert np.abs(W.conj().T @ direct @ W - via).max() <= 1e-10
    if kind is Kind.SO:
        assert np.abs(direct - via).max() <= 1e-10
    assert np.abs(np.linalg.eigvalsh(direct) - np.linalg.eigvalsh(via)).max() <= 1e-10
    assert np.isclose(np.trace(via), 1, atol=1e-12)


def test_partial_transpose_basics():
    # omega^Gamma = SWAP / 2 at D = 2, spectrum {-1/2, 1/2, 1/2, 1/2}
    pt = chn.partial_transpose(chn.max_entangled_state(2), 2)
    assert np.allclose(pt, (np.eye(4) + np.kron(X, X) + np.kron(Y, Y) + np.kron(Z, Z)) / 4)
    assert np.allclose(np.linalg.eigvalsh(pt), [-0.5, 0.5, 0.5, 0.5])
    d = np.diag(np.arange(9.0))
    assert np.array_equal(chn.partial_transpose(d, 3), d)
    with pytest.raises(ValueError):
        chn.partial_transpose(np.eye(5), 2)


@given(pairs, params, params)
def test_pt_rule(pair, a, b):
    D, kind = pair
    cb = cb_for(D, kind)
    ch = chn.CartanChannel(D, kind, a, b)
    pt = chn.partial_transpose(chn.choi_via_action(ch, cb).matrix, D)
    mirror = chn.choi_via_action(ch.mirrored(), cb).matrix
    assert np.abs(np.linalg.eigvalsh(pt) - np.linalg.eigvalsh(mirror)).max() <= 1e-10
    if kind is Kind.SO:
        assert np.abs(pt - mirror).max() <= 1e-10
    assert np.allclose(chn.partial_transpose(pt, D), chn.choi_via_action(ch, cb).matrix)


def test_pi_examples():
    for D, kind in [(3, Kind.SO), (4, Kind.SP), (6, Kind.SP)]:
        a, b = bs.closed_form_dims(D, kind)
        spec = chn.analytic_spectrum(chn.CartanChannel(D, kind, 1, 1))
        assert [m for _, m in spec] == [1, a, b]
        assert [v for v, _ in spec] == pytest.approx([1, 0, 0])
        dep = -1 / (D * D - 1)
        assert abs(chn.pi_values(chn.CartanChannel(D, kind, dep, dep))[0]) <= 1e-12
    assert chn.pi_values(chn.CartanChannel(5, Kind.SO, 0, 2 / 7))[1] == pytest.approx(0, abs=1e-12)


@given(pairs, params, params)
def test_spectrum_matches_formulas(pair, a, b):
    D, kind = pair
    rep = chn.spectrum_report(chn.CartanChannel(D, kind, a, b), cb_for(D, kind))
    assert rep.max_deviation <= 1e-10
    assert sum(m for _, m in rep.analytic) == D * D


def test_spectrum_example_sp4():
    ch = chn.CartanChannel(4, Kind.SP, 0.1, 0.05)
    p1, ps, pc = chn.pi_values(ch)
    expected = np.sort([p1] + [ps] * 10 + [pc] * 5) / 16
    assert np.abs(chn.numeric_spectrum(chn.choi_direct(ch, cb_for(4, Kind.SP))) - expected).max() <= 1e-10


def test_predicates():
    for D, kind in [(2, Kind.SO), (5, Kind.SO), (4, Kind.SP), (8, Kind.SP)]:
        ident = chn.CartanChannel(D, kind, 1, 1)
        assert chn.is_cp(ident) and not chn.is_ccp(ident) and not chn.is_ppt(ident)
        t = 1 / (D + 1)
        assert chn.is_ppt(chn.CartanChannel(D, kind, t, t))
    h1 = chn.CartanChannel(5, Kind.SO, 1 / 4, 3 / 28)
    assert chn.is_ppt(h1)
    vals = chn.pi_values(h1) + chn.pi_values(h1.mirrored())
    assert min(abs(v) for v in vals) <= 1e-12


def test_compose():
    c = chn.CartanChannel(5, Kind.SO, 0.2, -0.1)
    assert chn.compose(c, chn.CartanChannel(5, Kind.SO, 1, 1)) == c
    v1 = chn.CartanChannel(5, Kind.SO, 0, 2 / 7)
    h1 = chn.CartanChannel(5, Kind.SO, 1 / 4, 3 / 28)
    assert chn.compose(v1, h1).point == pytest.approx((0, 3 / 98))
    for D in (5, 9):
        v = chn.CartanChannel(D, Kind.SO, 0, 2 / (D + 2))
        assert chn.compose(v, v).point == pytest.approx((0, 4 / (D + 2) ** 2))


def test_kraus_examples():
    cb = cb_for(2, Kind.SO, "pauli")
    ks = chn.kraus_from_choi(chn.choi_via_action(chn.CartanChannel(2, Kind.SO, 1, 1), cb))
    assert ks.source_rank == 1
    k = ks.operators[0]
    assert np.allclose(k / k[0, 0], np.eye(2)) and np.isclose(abs(k[0, 0]), 1)

    ks = chn.kraus_from_choi(chn.choi_via_action(chn.CartanChannel(3, Kind.SO, 0, 0), cb_for(3, Kind.SO)))
    assert len(ks.operators) == 9 and ks.completeness_residual() <= 1e-9

    ch = chn.CartanChannel(2, Kind.SO, 0, 0.5)
    ks = chn.kraus_from_choi(chn.choi_via_action(ch, cb))
    for P in (I2, X, Y, Z):
        assert np.abs(ks.apply(P) - chn.apply_channel(ch, P, cb)).max() <= 1e-9


def test_kraus_rejects_non_cp():
    with pytest.raises(ValueError, match="not a channel"):
        chn.kraus_from_choi(chn.choi_via_action(chn.CartanChannel(3, Kind.SO, 1, -1), cb_for(3, Kind.SO)))


@given(pairs, st.integers(0, 2**32 - 1))
def test_kraus_roundtrip_on_cp_samples(pair, seed):
    from cartanchan.regions import sample_cp_channels

    D, kind = pair
    cb = cb_for(D, kind)
    ch = sample_cp_channels(D, kind, 1, seed)[0]
    ks = chn.kraus_from_choi(chn.choi_via_action(ch, cb))
    assert ks.completeness_residual() <= 1e-9
    for G in cb.basis.elements[:6]:
        assert np.abs(ks.apply(G) - chn.apply_channel(ch, G, cb)).max() <= 1e-9


def test_hadamard_single_qubit():
    a, b = 0.3, -0.2
    hv = chn.hadamard_vector(chn.CartanChannel(2, Kind.SO, a, b))
    probs = [(1 + 2 * b + a) / 4, (1 + a - 2 * b) / 4, (1 - a) / 4, (1 - a) / 4]
    assert np.allclose(np.sort(hv / 4), np.sort(probs))
    for N in (1, 2, 3):
        D = 2**N
        hv = chn.hadamard_vector(chn.CartanChannel(D, Kind.SO, 1, 1))
        # the row swap sends the identity Kraus weight to the all-ones index
        assert hv[-1] == pytest.approx(4**N) and np.allclose(hv[:-1], 0)


def test_hadamard_grid_agreement_two_qubits():
    grid = np.linspace(-0.5, 1.0, 5)
    for kind in (Kind.SO, Kind.SP):
        for a in grid:
            for b in grid:
                ch = chn.CartanChannel(4, kind, a, b)
                assert chn.qubit_hadamard_cp_check(ch) == chn.is_cp(ch)


def test_hadamard_requires_power_of_two():
    with pytest.raises(ValueError):
        chn.hadamard_vector(chn.CartanChannel(3, Kind.SO, 0, 0))
