"""Position operators: eigenstates, Hermiticity, equivalence, tails, locality."""
from __future__ import annotations

import numpy as np
import pytest
from scipy.integrate import quad

from rdlab.fields import (
    CoordinateField,
    antiparticle_gaussian_packet,
    coordinate_centroid,
    gaussian_packet,
    momentum_inner,
    to_coordinate,
    to_fw_picture,
)
from rdlab.grids import Grid
from rdlab import positionops as po

EIGEN_GRID = Grid(64, 6.0)
M = 1.0


def test_window_flat_top_structure():
    g = Grid(32, 6.0)
    w = po.flat_top_window(g)
    idx = np.abs(g.p1d) <= po.WINDOW_PLATEAU * g.pmax
    plateau = w[np.ix_(idx, idx, idx)]
    assert np.all(plateau == 1.0)
    outside = np.abs(g.p1d) >= po.WINDOW_EDGE * g.pmax
    assert np.all(w[outside, :, :] == 0.0)
    assert np.all((w >= 0.0) & (w <= 1.0))


def test_localized_state_density_and_phase():
    g = Grid(16, 4.0)
    e = g.energies(M)
    for rep in ("dirac", "fw"):
        for branch in ("particle", "antiparticle"):
            f = po.localized_state(g, M, (0.0, 0.0, 0.0), 0.5, branch, rep)
            dens = np.einsum("xyza,xyza->xyz", f.values.conj(), f.values).real
            np.testing.assert_allclose(dens, e / M, rtol=1e-12)
    base = po.localized_state(g, M, (0.0, 0.0, 0.0), 0.5, "particle", "dirac")
    shifted = po.localized_state(g, M, (0.7, -0.2, 0.1), 0.5, "particle", "dirac")
    phase = np.exp(-1j * (g.p @ np.array([0.7, -0.2, 0.1])))
    np.testing.assert_allclose(shifted.values, phase[..., None] * base.values, atol=1e-13)
    anti = po.localized_state(g, M, (0.7, -0.2, 0.1), 0.5, "antiparticle", "dirac")
    anti0 = po.localized_state(g, M, (0.0, 0.0, 0.0), 0.5, "antiparticle", "dirac")
    np.testing.assert_allclose(anti.values, phase.conj()[..., None] * anti0.values, atol=1e-13)


@pytest.mark.parametrize("rep,branch", [
    ("dirac", "particle"), ("dirac", "antiparticle"),
    ("fw", "particle"), ("fw", "antiparticle"),
])
def test_localized_eigenstates_interior(rep, branch):
    # windowed position eigenstates: X f = x0 f on the interior probe region
    for x0, lam in [((0.0, 0.0, 0.0), 0.5), ((1.0, -1.0, 1.0), -0.5)]:
        res = po.localized_eigen_residuals(EIGEN_GRID, M, x0, lam, branch, rep)
        assert res.max() <= 1e-6


def test_naive_coordinate_is_not_the_branch_position():
    # +-i d/dp alone leaves a localized branch state: O(1) residual for Dirac
    g = EIGEN_GRID
    f = po.windowed_localized_state(g, M, (0.0, 0.0, 0.0), 0.5, "particle", "dirac")
    mask = po.probe_mask(g)
    ref = np.linalg.norm(f.values[mask])
    worst = max(
        np.linalg.norm(xf.values[mask]) / ref for xf in po.apply_dirac_coordinate(f)
    )
    assert worst > 1e-2


def test_operator_preconditions():
    g = Grid(16, 4.0)
    part = po.localized_state(g, M, branch="particle", rep="dirac")
    anti = po.localized_state(g, M, branch="antiparticle", rep="dirac")
    fw = po.localized_state(g, M, branch="particle", rep="fw")
    with pytest.raises(ValueError):
        po.apply_xp(anti)
    with pytest.raises(ValueError):
        po.apply_xp(fw)
    with pytest.raises(ValueError):
        po.apply_xap(part)
    with pytest.raises(ValueError):
        po.apply_xfw(part)
    mixed = gaussian_packet(Grid(32, 8.0), M, (0.2, 0.0, 0.0), (0.0, 0.0, 0.0),
                            sigma=2.0, weights=(0.8, 0.6))
    with pytest.raises(ValueError):
        po.apply_xp(mixed)
    with pytest.raises(ValueError):
        po.mean_position_equivalence(mixed)


def _packet_pair(grid, sigma):
    f = gaussian_packet(grid, M, (0.4, 0.0, -0.3), (0.5, -1.0, 0.0), sigma=sigma, spin=0.5)
    g2 = gaussian_packet(grid, M, (-0.2, 0.5, 0.1), (0.0, 0.8, -0.5), sigma=sigma, spin=-0.5)
    return f, g2


def _adjoint_defect(op, f, g):
    return max(
        abs(momentum_inner(g, xf) - momentum_inner(xg, f))
        for xf, xg in zip(op(f), op(g))
    )


def test_position_operators_hermitian():
    g = Grid(48, 6.0)
    f, g2 = _packet_pair(g, 2.2)
    assert _adjoint_defect(po.apply_xp, f, g2) <= 1e-10
    assert _adjoint_defect(po.apply_xfw, to_fw_picture(f), to_fw_picture(g2)) <= 1e-10
    fa = antiparticle_gaussian_packet(g, M, (0.4, 0.0, -0.3), (0.5, -1.0, 0.0),
                                      sigma=2.2, spin=0.5)
    ga = antiparticle_gaussian_packet(g, M, (-0.2, 0.5, 0.1), (0.0, 0.8, -0.5),
                                      sigma=2.2, spin=-0.5)
    assert _adjoint_defect(po.apply_xap, fa, ga) <= 1e-10


def test_mean_position_equivalence_on_packets():
    f = gaussian_packet(Grid(64, 6.0), M, (0.4, 0.0, -0.3), (0.5, -1.0, 0.0),
                        sigma=2.2, spin=0.5)
    assert po.mean_position_equivalence(f).max() <= 1e-6
    anti = antiparticle_gaussian_packet(Grid(32, 6.0), M, (0.2, 0.0, 0.0),
                                        (0.0, 0.0, 0.0), sigma=2.0)
    with pytest.raises(ValueError):
        po.mean_position_equivalence(anti)


def test_coordinate_expectation_matches_centroid():
    g = Grid(48, 6.0)
    # spin along p0: no transverse spin-orbit displacement of the centroid
    f = gaussian_packet(g, M, (0.0, 0.0, 0.3), (0.5, -0.4, 0.8), sigma=2.0)
    cen = coordinate_centroid(to_coordinate(f))
    xexp = po.position_expectation(f, po.apply_dirac_coordinate)
    np.testing.assert_allclose(xexp, cen, atol=1e-8)
    np.testing.assert_allclose(xexp, [0.5, -0.4, 0.8], atol=1e-6)


def test_polarized_packet_centroid_shows_spin_orbit_shift():
    # transverse momentum displaces the coordinate centroid of a polarized
    # packet relative to its envelope center along s x p
    g = Grid(48, 6.0)
    f = gaussian_packet(g, M, (0.3, 0.0, 0.0), (0.0, 0.0, 0.0), sigma=2.0, spin=0.5)
    xexp = po.position_expectation(f, po.apply_dirac_coordinate)
    assert abs(xexp[1]) > 1e-2   # shift along z-hat x p0
    assert abs(xexp[0]) < 1e-6 and abs(xexp[2]) < 1e-6


def test_velocity_commutator_heisenberg():
    # i[H_FW, X_FW] = beta p / E on a windowed-constant envelope
    assert po.velocity_commutator_check() <= 1e-8


def test_tail_two_sided_consistency():
    f = gaussian_packet(Grid(64, 4.0), M, (0.3, 0.0, -0.2), (0.5, 0.0, 0.0),
                        sigma=2.0, rep="fw")
    assert po.tail_consistency_residual(f) <= 1e-8


def test_yukawa_tail_matches_radial_quadrature():
    # analytic Gaussian input; oracle = 1D radial quadrature of the defining
    # convolution; compared on the interior where box images are negligible
    g = Grid(16, 2.5)
    s = 2.0
    spinor = np.array([0.6, -0.3 + 0.4j, 0.2j, 0.5])
    psi = np.exp(-np.einsum("xyzk,xyzk->xyz", g.x, g.x) / (2.0 * s * s))
    cf = CoordinateField(g, psi[..., None] * spinor, M, "fw", "particle", 0.0)
    tails = po.yukawa_tail(cf)

    amp = (2.0 * np.pi) ** 1.5 * s**3

    def radial_factor(r):
        def integrand(p):
            return (p * amp * np.exp(-0.5 * s * s * p * p) / (p * p + M * M)
                    * (p * np.cos(p * r) / r - np.sin(p * r) / r**2))
        val, _ = quad(integrand, 0.0, 9.0, limit=200, epsabs=1e-13, epsrel=1e-11)
        return val / (2.0 * r) / (2.0 * np.pi**2)

    r = np.sqrt(np.einsum("xyzk,xyzk->xyz", g.x, g.x))
    mask = (r > 1e-12) & (r <= 6.0)
    keys = np.round(r[mask], 12)
    factor = {rv: radial_factor(rv) for rv in np.unique(keys)}
    facs = np.array([factor[rv] for rv in keys])
    for k in range(3):
        oracle = (g.x[..., k][mask] * facs)[:, None] * spinor
        got = tails[k].values[mask]
        assert np.linalg.norm(oracle - got) <= 1e-3 * np.linalg.norm(got)


def test_yukawa_tail_wide_packet_scaling():
    # the nonlocal correction shrinks quadratically with packet width
    g = Grid(64, 4.0)
    ratios = []
    for sigma in (2.0, 4.0, 8.0):
        f = gaussian_packet(g, M, (0.0, 0.0, 0.0), (0.0, 0.0, 0.0), sigma=sigma, rep="fw")
        cf = to_coordinate(f)
        tails = po.yukawa_tail(cf)
        tn = np.sqrt(sum(np.linalg.norm(t.values) ** 2 for t in tails))
        xn = np.sqrt(sum(np.linalg.norm(g.x[..., k, None] * cf.values) ** 2 for k in range(3)))
        ratios.append(tn / xn)
        assert tn / xn < 1.0 / (M * sigma) ** 2
    assert ratios[1] < 0.4 * ratios[0]
    assert ratios[2] < 0.4 * ratios[1]


def test_locality_matches_gaussian_profile():
    # spinor density times measure collapses to a pure Gaussian integral:
    # ratio = exp(-|a|^2 / (4 eps)), peak = (4 pi eps)^(-3/2)
    eps = 0.1
    peak = po.locality_integral("dirac", "particle", 0.5, (0.0, 0.0, 0.0), eps)
    np.testing.assert_allclose(peak.real, (4.0 * np.pi * eps) ** -1.5, rtol=1e-10)
    assert abs(peak.imag) <= 1e-12 * abs(peak.real)
    last = 1.0 + 1e-9
    for a1 in (0.5, 1.0, 2.0):
        rep = po.locality_report("dirac", "particle", 0.5, (a1, 0.0, 0.0), eps)
        np.testing.assert_allclose(rep.ratio, np.exp(-a1 * a1 / (4.0 * eps)), rtol=1e-9)
        assert 0.0 <= rep.ratio <= last
        last = rep.ratio


def test_locality_monotone_in_regulator():
    ratios = [
        po.locality_report("dirac", "particle", 0.5, (1.0, 0.0, 0.0), eps).ratio
        for eps in (0.03, 0.1)
    ]
    assert ratios[0] < ratios[1]
    np.testing.assert_allclose(ratios[0], np.exp(-1.0 / 0.12), rtol=1e-9)


def test_locality_far_displacement_vanishes():
    for eps in (0.1, 0.03, 0.01):
        rep = po.locality_report("dirac", "particle", 0.5, (5.0, 0.0, 0.0), eps)
        assert rep.ratio < 1e-3
        assert abs(rep.peak) > 0.0


def test_locality_rep_and_branch_independent():
    # psi^dag psi = E/m for every branch and picture: identical integrals
    vals = [
        po.locality_integral(rep, branch, 0.5, (1.0, 0.0, 0.0), 0.1)
        for rep in ("dirac", "fw")
        for branch in ("particle", "antiparticle")
    ]
    scale = (4.0 * np.pi * 0.1) ** -1.5
    for v in vals[1:]:
        assert abs(v - vals[0]) <= 1e-12 * scale


def test_locality_errors():
    with pytest.raises(ValueError, match="regulator"):
        po.locality_integral("dirac", "particle", 0.5, (1.0, 0.0, 0.0), 0.0)
    with pytest.raises(ValueError, match="regulator"):
        po.locality_integral("dirac", "particle", 0.5, (1.0, 0.0, 0.0), 1e-6)
    with pytest.raises(ValueError):
        po.locality_integral("weyl", "particle", 0.5, (1.0, 0.0, 0.0), 0.1)
