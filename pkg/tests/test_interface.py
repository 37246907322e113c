import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import REFERENCE_ETA, REFERENCE_STATES
from repeatersim import presets
from repeatersim.interface import (
    CavityConfig,
    ContractViolation,
    EmitterParams,
    IDEAL_OVERLAPS,
    OverlapVector,
    assemble_conditional_states,
    entanglement_metrics,
    interface_metrics,
    overlap_integrals,
    reflection,
    spin_spin_state,
)
from repeatersim.photonics import PhotonMode
from repeatersim.twoqubit import BELL_RHO, U_CPHASE, U_HALF_PI, apply_gate


def test_empty_overcoupled_cavity_reflects_minus_one():
    em = EmitterParams("t", 0.0, 50.0, 1.0, 1.0, 1e-6, 1e-6, 0.0)
    cav = CavityConfig(kappa=10.0, delta_c=0.0)
    r = reflection(0.0, 1, em, cav)
    assert abs(r + 1.0) < 1e-9


def test_strong_coupling_reflects_plus_one():
    em = EmitterParams("t", 0.0, 50.0, 0.01, 0.01, 500.0, 500.0, 0.0)
    cav = CavityConfig(kappa=10.0, delta_c=0.0)
    r = reflection(0.0, 1, em, cav)
    assert abs(r - 1.0) < 1e-3


def test_reflection_passive(siv_setup):
    em, cav, mx, _ = siv_setup
    w = np.linspace(-400.0, 400.0, 4001)
    for branch in (1, 2):
        assert np.max(np.abs(reflection(w, branch, em, cav))) <= 1.0 + 1e-9


def test_phase_contrast_near_pi_at_optimum(siv_setup):
    em, cav, mx, _ = siv_setup
    w0 = mx.omega0
    dphi = np.angle(reflection(w0, 1, em, cav)) - np.angle(reflection(w0, 2, em, cav))
    dphi = (dphi + np.pi) % (2.0 * np.pi) - np.pi
    assert abs(abs(dphi) - np.pi) < 0.3


def test_overlaps_unit_reflection_limit():
    # tiny coupling and a far-detuned overcoupled cavity: r ~ +1 everywhere
    em = EmitterParams("t", 0.0, 1.0, 1e-3, 1e-3, 1e-6, 1e-6, 0.0)
    cav = CavityConfig(kappa=1e-3, delta_c=-3000.0)
    mode = PhotonMode(omega0=0.0, gamma=5.0, epsilon0=1e-6)
    iv = overlap_integrals(mode, None, em, cav)
    for val in (iv.i1, iv.i2, iv.i3):
        assert abs(val - 0.25) < 1e-3


def test_overlap_vector_invariants(siv_setup):
    em, cav, mx, mxx = siv_setup
    for mode in (mx, mxx):
        iv = overlap_integrals(mode, None, em, cav)
        assert 0.0 <= iv.i1 <= 0.25 + 1e-10
        assert 0.0 <= iv.i3 <= 0.25 + 1e-10
        assert iv.i2_conj == np.conj(iv.i2)


def test_overlap_residue_equals_quadrature(siv_setup, snv_setup):
    from repeatersim.photonics import FilterStage

    for em, cav, mx, mxx in (siv_setup, snv_setup):
        for mode in (mx, mxx):
            for filt in (None, FilterStage.for_target(mode.gamma, 0.7 * mode.gamma)):
                a = overlap_integrals(mode, filt, em, cav, method="quadrature")
                b = overlap_integrals(mode, filt, em, cav, method="residue")
                assert abs(a.i1 - b.i1) < 1e-9
                assert abs(a.i2 - b.i2) < 1e-9
                assert abs(a.i3 - b.i3) < 1e-9


@settings(max_examples=20, deadline=None)
@given(
    kappa=st.floats(5.0, 400.0),
    delta_c=st.floats(-150.0, 150.0),
    delta_0=st.floats(-150.0, 150.0),
    contrast=st.floats(-80.0, 80.0),
    gamma=st.floats(0.5, 10.0),
)
def test_residue_quadrature_agreement_random(kappa, delta_c, delta_0, contrast, gamma):
    em = EmitterParams("t", 0.0, contrast, 0.6, 0.5, 40.0, 42.0, 0.0)
    cav = CavityConfig(kappa=kappa, delta_c=delta_c)
    mode = PhotonMode(omega0=-delta_0, gamma=gamma)
    a = overlap_integrals(mode, None, em, cav, method="quadrature")
    b = overlap_integrals(mode, None, em, cav, method="residue")
    assert abs(a.i1 - b.i1) < 1e-8
    assert abs(a.i2 - b.i2) < 1e-8
    assert abs(a.i3 - b.i3) < 1e-8


def test_overlap_vector_validation():
    with pytest.raises(ContractViolation):
        OverlapVector(i1=0.3, i2=0.0, i3=0.1)
    with pytest.raises(ContractViolation):
        OverlapVector(i1=-0.01, i2=0.0, i3=0.1)


def test_ideal_state_is_bell():
    rho = spin_spin_state(1.0, 1.0, IDEAL_OVERLAPS, IDEAL_OVERLAPS)
    eta, fid = entanglement_metrics(rho)
    assert abs(eta - 1.0) < 1e-12
    assert abs(fid - 1.0) < 1e-12
    assert np.max(np.abs(rho - BELL_RHO)) < 1e-12


def _element_formula_state(ix, ixx, sign):
    """Independent oracle: closed-form matrix elements for ideal photons.

    Written directly from the conditional-amplitude products for a balanced
    photon pair (alpha = beta = 1/sqrt(2)), without the four-index tensor used
    by the implementation.
    """
    a = b = 1.0 / np.sqrt(2.0)
    bs = sign * b
    x = 2.0 * ix.as_vector()
    y = 2.0 * ixx.as_vector()
    i1x, i2x, i2xc, i3x = x
    i1y, i2y, i2yc, i3y = y
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = abs(a + bs) ** 2 * i1x * i1y
    rho[0, 1] = (a + bs) * i1x * (np.conj(a) * i1y + np.conj(bs) * i2y)
    rho[0, 2] = (a + bs) * i1y * (np.conj(a) * i1x + np.conj(bs) * i2x)
    rho[0, 3] = (a + bs) * (np.conj(a) * i1x * i1y + np.conj(bs) * i2x * i2y)
    rho[1, 1] = (abs(a) ** 2 * i1x * i1y + a * np.conj(bs) * i1x * i2y
                 + np.conj(a) * bs * i1x * i2yc + abs(bs) ** 2 * i1x * i3y)
    rho[2, 2] = (abs(a) ** 2 * i1x * i1y + a * np.conj(bs) * i2x * i1y
                 + np.conj(a) * bs * i2xc * i1y + abs(bs) ** 2 * i3x * i1y)
    rho[1, 3] = (abs(a) ** 2 * i1x * i1y + a * np.conj(bs) * i2y * i2x
                 + np.conj(a) * bs * i1x * i2yc + abs(bs) ** 2 * i3y * i2x)
    rho[2, 3] = (abs(a) ** 2 * i1x * i1y + a * np.conj(bs) * i2x * i2y
                 + np.conj(a) * bs * i1y * i2xc + abs(bs) ** 2 * i2y * i3x)
    rho[1, 2] = (abs(a) ** 2 * i1x * i1y + a * np.conj(bs) * i2x * i1y
                 + np.conj(a) * bs * i1x * i2yc + abs(bs) ** 2 * i2x * i2yc)
    rho[3, 3] = (abs(a) ** 2 * i1x * i1y + a * np.conj(bs) * i2x * i2y
                 + np.conj(a) * bs * np.conj(i2x) * np.conj(i2y)
                 + abs(bs) ** 2 * i3x * i3y)
    for i in range(4):
        for j in range(i + 1, 4):
            rho[j, i] = np.conj(rho[i, j])
    return rho / 4.0


def test_construction_matches_element_formula_oracle(siv_setup):
    """The tensor construction and the closed-form elements agree to 1e-10."""
    em, cav, mx, mxx = siv_setup
    ix = overlap_integrals(mx, None, em, cav)
    ixx = overlap_integrals(mxx, None, em, cav)
    rp, rm = assemble_conditional_states(ix, ixx, 1.0, 1.0)
    assert np.max(np.abs(rp - _element_formula_state(ix, ixx, +1))) < 1e-10
    assert np.max(np.abs(rm - _element_formula_state(ix, ixx, -1))) < 1e-10
    # and the assembled total equals the oracle assembly
    total = spin_spin_state(1.0, 1.0, ix, ixx)
    op = apply_gate(_element_formula_state(ix, ixx, +1), U_HALF_PI)
    om = apply_gate(apply_gate(_element_formula_state(ix, ixx, -1), U_HALF_PI),
                    U_CPHASE)
    assert np.max(np.abs(total - 2.0 * op - 2.0 * om)) < 1e-10


def _two_photon_quadrature_state(em, cav, mx, mxx, sign, n_nodes=20000):
    """Third route for the conditional state: spectral amplitude products.

    The post-measurement spin amplitude for late-bin branch (m, n) is
    c_mn(w, v) = (alpha r1(w) r1(v) + sign beta r_m(w) r_n(v)) / 4 under the
    two photon spectra; the state is the double spectral integral of
    c_mn c_kl*.  Everything separates into per-photon reflection moments
    M[a, b] = int Stilde r_a r_b*, evaluated here on dense fixed grids,
    bypassing the implementation's component-vector indexing entirely.
    """
    alpha = beta = 1.0 / np.sqrt(2.0)
    # composite Gauss-Legendre: 32-point rule tiled over uniform panels
    g_u, g_wt = np.polynomial.legendre.leggauss(32)
    n_panels = max(1, n_nodes // 32)
    edges = np.linspace(-1.0, 1.0, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    base_u = (mid[:, None] + half[:, None] * g_u[None, :]).ravel()
    base_wt = (half[:, None] * g_wt[None, :]).ravel()

    def moments(mode):
        scale = max(mode.gamma, cav.kappa, abs(em.contrast),
                    abs(em.omega_1a - mode.omega0), 1.0)
        u = base_u * (np.pi / 2.0 - 1e-9)
        wt = base_wt * (np.pi / 2.0 - 1e-9)
        t = np.tan(u)
        w = mode.omega0 + scale * t
        jac = scale * (1.0 + t * t)
        dens = mode.norm * mode.epsilon0**2 / (
            (scale * t) ** 2 + mode.gamma**2 / 4.0)
        weight = wt * jac * dens
        r1 = reflection(w, 1, em, cav)
        r2 = reflection(w, 2, em, cav)
        m = np.empty((3, 3), dtype=complex)
        for a, ra in ((1, r1), (2, r2)):
            for b, rb in ((1, r1), (2, r2)):
                m[a, b] = np.sum(weight * ra * np.conj(rb))
        return m

    mxm = moments(mx)
    mvm = moments(mxx)
    rho = np.zeros((4, 4), dtype=complex)
    for m in (1, 2):
        for n in (1, 2):
            for k in (1, 2):
                for l in (1, 2):
                    val = (
                        abs(alpha) ** 2 * mxm[1, 1] * mvm[1, 1]
                        + sign * alpha * np.conj(beta) * mxm[1, k] * mvm[1, l]
                        + sign * np.conj(alpha) * beta * mxm[m, 1] * mvm[n, 1]
                        + abs(beta) ** 2 * mxm[m, k] * mvm[n, l]
                    )
                    rho[2 * (m - 1) + (n - 1), 2 * (k - 1) + (l - 1)] = val
    return rho / 16.0


def test_conditional_state_matches_two_photon_quadrature(siv_setup):
    """Tensor construction vs direct spectral integration of amplitudes."""
    em, cav, mx, mxx = siv_setup
    ix = overlap_integrals(mx, None, em, cav)
    ixx = overlap_integrals(mxx, None, em, cav)
    rp, rm = assemble_conditional_states(ix, ixx, 1.0, 1.0)
    for sign, ours in ((+1, rp), (-1, rm)):
        oracle = _two_photon_quadrature_state(em, cav, mx, mxx, sign)
        assert np.max(np.abs(ours - oracle)) < 1e-6


def test_reference_efficiencies_and_states(siv_setup):
    em, cav, mx, mxx = siv_setup
    scen = presets.filter_scenarios()
    for key, filters in scen.items():
        ix = overlap_integrals(mx, filters["filter_x"], em, cav)
        ixx = overlap_integrals(mxx, filters["filter_xx"], em, cav)
        rho = spin_spin_state(presets.F_PH_DEFAULT, presets.F_MW_DEFAULT, ix, ixx)
        eta, _ = entanglement_metrics(rho)
        assert abs(eta - REFERENCE_ETA[key]) < 0.03
        ref = REFERENCE_STATES[key]
        cmp = rho if key == "broad" else rho / eta
        assert np.max(np.abs(cmp - ref)) < 0.02


def test_state_hermitian_positive(siv_setup):
    em, cav, mx, mxx = siv_setup
    ix = overlap_integrals(mx, None, em, cav)
    ixx = overlap_integrals(mxx, None, em, cav)
    rho = spin_spin_state(0.99, 0.9999, ix, ixx)
    assert np.max(np.abs(rho - rho.conj().T)) < 1e-12
    assert np.linalg.eigvalsh(rho).min() >= -1e-10


@settings(max_examples=15, deadline=None)
@given(f1=st.floats(0.7, 1.0), f2=st.floats(0.7, 1.0))
def test_fidelity_monotone_in_photon_fidelity(f1, f2):
    em = presets.siv()
    cav, d0 = presets.siv_optimal_cavity()
    mx, mxx = presets.qd_modes(d0)
    ix = overlap_integrals(mx, None, em, cav, method="residue")
    ixx = overlap_integrals(mxx, None, em, cav, method="residue")
    lo, hi = min(f1, f2), max(f1, f2)
    _, fid_lo = entanglement_metrics(spin_spin_state(lo, 1.0, ix, ixx))
    _, fid_hi = entanglement_metrics(spin_spin_state(hi, 1.0, ix, ixx))
    assert fid_hi >= fid_lo - 1e-12


def test_symmetric_branch_efficiency_identity():
    # identical branch parameters: |r1| == |r2|, so eta = (4 i1x)(4 i1xx)
    em = EmitterParams("t", 0.0, 0.0, 0.5, 0.5, 30.0, 30.0, 0.0)
    cav = CavityConfig(kappa=100.0, delta_c=10.0)
    mx = PhotonMode(omega0=-5.0, gamma=4.34)
    mxx = PhotonMode(omega0=-5.0, gamma=8.33)
    ix = overlap_integrals(mx, None, em, cav)
    ixx = overlap_integrals(mxx, None, em, cav)
    rho = spin_spin_state(1.0, 1.0, ix, ixx)
    eta, _ = entanglement_metrics(rho)
    assert abs(eta - 16.0 * ix.i1 * ixx.i1) < 1e-9


def test_bandwidth_sweep_monotonicity(siv_setup):
    """Narrower filtered bandwidth: lower infidelity and lower efficiency."""
    em, cav, mx, mxx = siv_setup
    from repeatersim.photonics import FilterStage

    infids, etas = [], []
    for gt in (4.0, 5.5, 7.0, 8.0):
        filt = FilterStage.for_target(mxx.gamma, gt)
        eta, infid = interface_metrics(em, cav, mx, mxx, filter_xx=filt,
                                       method="residue")
        infids.append(infid)
        etas.append(eta)
    assert all(a <= b + 1e-12 for a, b in zip(infids, infids[1:]))
    assert all(a <= b + 1e-12 for a, b in zip(etas, etas[1:]))


def test_snv_metrics(snv_setup):
    em, cav, mx, mxx = snv_setup
    ix = overlap_integrals(mx, None, em, cav)
    ixx = overlap_integrals(mxx, None, em, cav)
    rho = spin_spin_state(1.0, 1.0, ix, ixx)
    eta, fid = entanglement_metrics(rho)
    assert abs(eta - 0.9935) < 0.03
    assert abs((1.0 - fid) - 0.0609) < 0.03


def test_metrics_reject_zero_trace():
    with pytest.raises(ContractViolation):
        entanglement_metrics(np.zeros((4, 4), dtype=complex))


def test_cooperativity_accessors(siv_setup, snv_setup):
    em, cav, _, _ = siv_setup
    assert abs(cav.cooperativity(em, 1) - 11.39) < 0.05
    assert abs(cav.cooperativity(em, 2) - 13.11) < 0.05
    em2, cav2, _, _ = snv_setup
    assert abs(cav2.cooperativity(em2, 1) - 155.83) < 0.6
