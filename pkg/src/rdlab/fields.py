"""Momentum-space spinor wave fields and their coordinate realizations.

A MomentumField stores invariant-measure amplitudes phi(p) on a periodic
lattice: the physical pairing is <a|b> = sum_p [m / ((2 pi)^3 E_p)] a^dag b dp^3,
and the coordinate realization is

    psi(x) = sum_p [dp^3 / (2 pi)^3] sqrt(m / E_p) phi(p) e^{+i p.x},

a unitary map (Parseval holds to machine precision), computed with FFTs.

Branch tags: "particle" and "mixed" fields are labeled by the plane-wave
node p (negative-energy content at node p lies along the -E_p eigenvectors
of alpha.p + beta m); "antiparticle" fields use the antiparticle's own
momentum labeling and are momentum-space-only (no coordinate realization,
no evolution) — they exist for the mirrored position-operator checks.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, replace

import numpy as np
import scipy.fft as sfft

from .clifford import ALPHA, BETA
from .grids import Grid
from .spinors import pauli_spinor, rest_spinor

REPS = ("dirac", "fw")
BRANCHES = ("particle", "antiparticle", "mixed")

# construction hygiene: required decay at the lattice boundary, as a fraction
# of the field's peak amplitude
MOMENTUM_EDGE_TOL = 1e-8
COORDINATE_EDGE_TOL = 5e-2


def _workers() -> int:
    return int(os.environ.get("RDLAB_THREADS") or os.cpu_count() or 1)


def _fft3(a: np.ndarray) -> np.ndarray:
    return sfft.fftn(a, axes=(0, 1, 2), workers=_workers())


def _ifft3(a: np.ndarray) -> np.ndarray:
    return sfft.ifftn(a, axes=(0, 1, 2), workers=_workers())


@dataclass
class MomentumField:
    """Spinor amplitudes phi(p), shape (n, n, n, 4), invariant-measure convention."""

    grid: Grid
    values: np.ndarray
    mass: float
    rep: str = "dirac"
    branch: str = "particle"
    time: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        n = self.grid.n
        if self.values.shape != (n, n, n, 4):
            raise ValueError(f"values must have shape {(n, n, n, 4)}, got {self.values.shape}")
        if self.rep not in REPS:
            raise ValueError(f"rep must be one of {REPS}, got {self.rep!r}")
        if self.branch not in BRANCHES:
            raise ValueError(f"branch must be one of {BRANCHES}, got {self.branch!r}")
        if not self.mass > 0.0:
            raise ValueError(f"mass must be positive, got {self.mass}")


@dataclass
class CoordinateField:
    """Spinor wavefunction psi(x), shape (n, n, n, 4), on the dual lattice."""

    grid: Grid
    values: np.ndarray
    mass: float
    rep: str = "dirac"
    branch: str = "particle"
    time: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        n = self.grid.n
        if self.values.shape != (n, n, n, 4):
            raise ValueError(f"values must have shape {(n, n, n, 4)}, got {self.values.shape}")


def _measure(field: MomentumField) -> np.ndarray:
    """m / ((2 pi)^3 E_p) per node."""
    return field.mass / ((2.0 * np.pi) ** 3 * field.grid.energies(field.mass))


def _check_compatible(a, b):
    if a.grid != b.grid or a.mass != b.mass or a.rep != b.rep:
        raise ValueError("fields must share grid, mass and picture")


def momentum_inner(a: MomentumField, b: MomentumField) -> complex:
    """Invariant-measure inner product sum_p w_p a^dag b dp^3."""
    _check_compatible(a, b)
    dens = np.einsum("xyza,xyza->xyz", a.values.conj(), b.values)
    return complex(np.sum(_measure(a) * dens) * a.grid.dp**3)


def momentum_norm(a: MomentumField) -> float:
    return float(np.sqrt(momentum_inner(a, a).real))


def coordinate_inner(a: CoordinateField, b: CoordinateField) -> complex:
    return complex(np.einsum("xyza,xyza->", a.values.conj(), b.values) * a.grid.dx**3)


def coordinate_norm(a: CoordinateField) -> float:
    return float(np.sqrt(coordinate_inner(a, a).real))


def to_coordinate(field: MomentumField) -> CoordinateField:
    """Unitary transform to the coordinate lattice (rejects antiparticle labeling)."""
    if field.branch == "antiparticle":
        raise ValueError("antiparticle-labeled fields are momentum-space-only")
    half = np.sqrt(field.mass / field.grid.energies(field.mass))
    psi = _ifft3(half[..., None] * field.values) / field.grid.dx**3
    return CoordinateField(field.grid, psi, field.mass, field.rep, field.branch, field.time)


def to_momentum(field: CoordinateField) -> MomentumField:
    """Inverse of to_coordinate."""
    half = np.sqrt(field.grid.energies(field.mass) / field.mass)
    phi = half[..., None] * _fft3(field.values) * field.grid.dx**3
    return MomentumField(field.grid, phi, field.mass, field.rep, field.branch, field.time)


def _alpha_apply(p: np.ndarray, vals: np.ndarray) -> np.ndarray:
    """(alpha . p) vals, p shape (..., 3), vals shape (..., 4)."""
    out = p[..., 0, None] * (vals @ ALPHA[0].T)
    out += p[..., 1, None] * (vals @ ALPHA[1].T)
    out += p[..., 2, None] * (vals @ ALPHA[2].T)
    return out


def hamiltonian_apply(field: MomentumField) -> np.ndarray:
    """H phi per node: (alpha.p + beta m) phi in the Dirac picture, beta E_p phi in FW."""
    if field.branch == "antiparticle":
        raise ValueError("antiparticle-labeled fields are momentum-space-only")
    if field.rep == "dirac":
        return _alpha_apply(field.grid.p, field.values) + field.mass * (field.values @ BETA.T)
    e = field.grid.energies(field.mass)[..., None]
    out = field.values * e
    out[..., 2:] *= -1.0
    return out


def evolve(field: MomentumField, t: float) -> MomentumField:
    """Advance by duration t (exact per-node propagator; H^2 = E^2 in both pictures)."""
    if field.branch == "antiparticle":
        raise ValueError("antiparticle-labeled fields are momentum-space-only")
    e = field.grid.energies(field.mass)
    if field.rep == "dirac":
        h = hamiltonian_apply(field)
        vals = np.cos(e * t)[..., None] * field.values - 1j * (np.sin(e * t) / e)[..., None] * h
    else:
        phase = np.exp(-1j * e * t)[..., None]
        vals = field.values.copy()
        vals[..., :2] *= phase
        vals[..., 2:] *= phase.conj()
    return replace(field, values=vals, time=field.time + t)


def _fw_rotate(field: MomentumField, direction: int) -> np.ndarray:
    """Apply U(p)^direction, U = (E + m + beta alpha.p) / sqrt(2 E (E + m)).

    Antiparticle-labeled fields use U(p)^dag in place of U(p) (their plane-wave
    content sits at the opposite node), handled by flipping `direction`.
    """
    if field.branch == "antiparticle":
        direction = -direction
    e = field.grid.energies(field.mass)
    ba = field.values @ (BETA @ ALPHA[0]).T * field.grid.p[..., 0, None]
    ba += field.values @ (BETA @ ALPHA[1]).T * field.grid.p[..., 1, None]
    ba += field.values @ (BETA @ ALPHA[2]).T * field.grid.p[..., 2, None]
    norm = np.sqrt(2.0 * e * (e + field.mass))[..., None]
    return ((e + field.mass)[..., None] * field.values + direction * ba) / norm


def to_fw_picture(field: MomentumField) -> MomentumField:
    """Switch Dirac -> FW picture (mode-wise unitary; norm preserved exactly)."""
    if field.rep != "dirac":
        raise ValueError("field is already in the FW picture")
    return replace(field, values=_fw_rotate(field, +1), rep="fw")


def to_dirac_picture(field: MomentumField) -> MomentumField:
    """Switch FW -> Dirac picture."""
    if field.rep != "fw":
        raise ValueError("field is already in the Dirac picture")
    return replace(field, values=_fw_rotate(field, -1), rep="dirac")


def density(field: CoordinateField) -> np.ndarray:
    """Probability density psi^dag psi (real, shape (n, n, n))."""
    return np.einsum("xyza,xyza->xyz", field.values.conj(), field.values).real


def current_density(field: CoordinateField) -> np.ndarray:
    """Dirac-picture current j^k = psi^dag alpha^k psi, shape (n, n, n, 3).

    FW fields have no pointwise current formula; use fw_current_density,
    which reconstructs the unique transverse-free current from the exact
    density rate.
    """
    if field.rep != "dirac":
        raise ValueError("pointwise alpha-current is defined in the Dirac picture only")
    j = [
        np.einsum("xyza,ab,xyzb->xyz", field.values.conj(), ALPHA[k], field.values).real
        for k in range(3)
    ]
    return np.stack(j, axis=-1)


def density_rate(field: MomentumField) -> np.ndarray:
    """Exact d(rho)/dt on the coordinate lattice: 2 Re[psi^dag psi_dot]."""
    psi = to_coordinate(field)
    dot = to_coordinate(replace(field, values=-1j * hamiltonian_apply(field)))
    return 2.0 * np.einsum("xyza,xyza->xyz", psi.values.conj(), dot.values).real


def divergence(field_grid: Grid, vec: np.ndarray) -> np.ndarray:
    """Spectral divergence of a real lattice vector field, shape (n, n, n, 3) -> (n, n, n)."""
    vhat = _fft3(vec.astype(complex))
    div = np.einsum("xyzk,xyzk->xyz", 1j * field_grid.p, vhat)
    return _ifft3(div).real


def fw_current_density(field: MomentumField) -> np.ndarray:
    """FW current as the longitudinal field solving continuity exactly:
    j = -grad (laplacian)^{-1} d(rho)/dt, with the zero mode set to zero."""
    if field.rep != "fw":
        raise ValueError("defined for FW-picture fields")
    rate = sfft.fftn(density_rate(field).astype(complex), workers=_workers())
    p2 = np.einsum("xyzk,xyzk->xyz", field.grid.p, field.grid.p)
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.where(p2 > 0.0, rate / p2, 0.0)
    # div j = ifft(i p_k j_k) = -rate by construction
    j = [_ifft3(1j * field.grid.p[..., k] * u).real for k in range(3)]
    return np.stack(j, axis=-1)


def momentum_expectation(field: MomentumField) -> np.ndarray:
    """<p> under the invariant-measure density (3-vector)."""
    dens = _measure(field) * np.einsum("xyza,xyza->xyz", field.values.conj(), field.values).real
    total = np.sum(dens)
    return np.einsum("xyz,xyzk->k", dens, field.grid.p) / total


def coordinate_centroid(field: CoordinateField) -> np.ndarray:
    """<x> under psi^dag psi (3-vector)."""
    rho = density(field)
    return np.einsum("xyz,xyzk->k", rho, field.grid.x) / np.sum(rho)


def total_probability(field: CoordinateField) -> float:
    if not isinstance(field, CoordinateField):
        raise TypeError("total_probability integrates a coordinate-lattice field")
    return float(np.sum(density(field)) * field.grid.dx**3)


def _edge_fraction(values: np.ndarray, n: int) -> float:
    """Max |values| over the three boundary planes of each axis, over peak |values|."""
    mags = np.abs(values)
    peak = mags.max()
    planes = [n // 2 - 1, n // 2, (n // 2 + 1) % n]
    worst = max(
        mags[planes].max(), mags[:, planes].max(), mags[:, :, planes].max()
    )
    return float(worst / peak)


def momentum_boundary_fraction(field: MomentumField) -> float:
    return _edge_fraction(field.values, field.grid.n)


def coordinate_boundary_fraction(field: CoordinateField) -> float:
    return _edge_fraction(field.values, field.grid.n)


def _spin_vector(spin) -> np.ndarray:
    if np.isscalar(spin):
        return pauli_spinor(float(spin))
    chi = np.asarray(spin, dtype=complex)
    if chi.shape != (2,) or not np.linalg.norm(chi) > 0:
        raise ValueError("spin must be +-0.5 or a nonzero 2-component vector")
    return chi / np.linalg.norm(chi)


def _branch_channels(grid: Grid, mass: float, chi: np.ndarray):
    """Unit-norm +E and -E eigenvector fields of alpha.p + beta m at each node.

    v_plus(p) = sqrt(m/E) M(L_p) (chi, 0),  v_minus(p) = sqrt(m/E) M(L_{-p}) (0, chi);
    both reduce to [(E+m) r +- alpha.p r] / sqrt(2E(E+m)) with constant spinors r.
    """
    e = grid.energies(mass)
    up = np.concatenate([chi, [0, 0]])
    dn = np.concatenate([[0, 0], chi])
    norm = np.sqrt(2.0 * e * (e + mass))[..., None]
    v_plus = ((e + mass)[..., None] * up + _alpha_apply(grid.p, np.broadcast_to(up, (*e.shape, 4)))) / norm
    v_minus = ((e + mass)[..., None] * dn - _alpha_apply(grid.p, np.broadcast_to(dn, (*e.shape, 4)))) / norm
    return v_plus, v_minus


def _validated(field: MomentumField, check_coordinate: bool = True) -> MomentumField:
    edge = momentum_boundary_fraction(field)
    if edge > MOMENTUM_EDGE_TOL:
        raise ValueError(
            f"momentum boundary amplitude {edge:.2e} of peak exceeds {MOMENTUM_EDGE_TOL:.0e}; "
            "enlarge pmax or narrow the packet in momentum"
        )
    if check_coordinate:
        leak = coordinate_boundary_fraction(to_coordinate(field))
        if leak > COORDINATE_EDGE_TOL:
            raise ValueError(
                f"coordinate boundary amplitude {leak:.2e} of peak exceeds {COORDINATE_EDGE_TOL:.0e}; "
                "enlarge the box (more nodes at fixed pmax) or narrow the packet in space"
            )
    return field


def gaussian_packet(
    grid: Grid,
    mass: float,
    p0=(0.0, 0.0, 0.0),
    x0=(0.0, 0.0, 0.0),
    sigma: float = 4.0,
    spin=0.5,
    weights=(1.0, 0.0),
    rep: str = "dirac",
) -> MomentumField:
    """Unit-norm Gaussian packet centered at momentum p0 and position x0.

    The scalar envelope carries a sqrt(E/m) factor, so the measure-weighted
    momentum density is a symmetric Gaussian (hence <p> = p0 exactly) and the
    coordinate realization is the measure-weighted superposition of plane-wave
    eigenspinors. `weights` are the (+E, -E) channel amplitudes at each node;
    a nonzero -E weight gives a "mixed" field. `sigma` is the coordinate-space
    width. Raises if the packet fails the lattice boundary-decay preconditions.
    """
    p0 = np.asarray(p0, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    chi = _spin_vector(spin)
    w = np.asarray(weights, dtype=complex)
    if w.shape != (2,) or not np.linalg.norm(w) > 0:
        raise ValueError("weights must be a nonzero pair of channel amplitudes")
    w = w / np.linalg.norm(w)

    e = grid.energies(mass)
    d = grid.p - p0
    g = np.exp(-0.5 * sigma**2 * np.einsum("xyzk,xyzk->xyz", d, d))
    amp = 1.0 / np.sqrt(np.sum(g * g) * grid.dp**3 / (2.0 * np.pi) ** 3)
    envelope = amp * np.sqrt(e / mass) * g * np.exp(-1j * (grid.p @ x0))

    v_plus, v_minus = _branch_channels(grid, mass, chi)
    vals = envelope[..., None] * (w[0] * v_plus + w[1] * v_minus)
    branch = "particle" if w[1] == 0 else "mixed"
    field = MomentumField(grid, vals, mass, "dirac", branch)
    if rep == "fw":
        field = to_fw_picture(field)
    elif rep != "dirac":
        raise ValueError(f"rep must be one of {REPS}, got {rep!r}")
    return _validated(field)


def antiparticle_gaussian_packet(
    grid: Grid,
    mass: float,
    p0=(0.0, 0.0, 0.0),
    x0=(0.0, 0.0, 0.0),
    sigma: float = 4.0,
    spin=0.5,
    rep: str = "dirac",
) -> MomentumField:
    """Unit-norm antiparticle-labeled packet (momentum-space-only object).

    Uses the antiparticle phase convention e^{+i p.x0} and the -E branch
    eigenspinor at +p, matching the mirrored position operators.
    """
    p0 = np.asarray(p0, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    chi = _spin_vector(spin)
    e = grid.energies(mass)
    d = grid.p - p0
    g = np.exp(-0.5 * sigma**2 * np.einsum("xyzk,xyzk->xyz", d, d))
    amp = 1.0 / np.sqrt(np.sum(g * g) * grid.dp**3 / (2.0 * np.pi) ** 3)
    envelope = amp * np.sqrt(e / mass) * g * np.exp(1j * (grid.p @ x0))

    dn = np.concatenate([[0, 0], chi])
    norm = np.sqrt(2.0 * e * (e + mass))[..., None]
    v_ap = ((e + mass)[..., None] * dn + _alpha_apply(grid.p, np.broadcast_to(dn, (*e.shape, 4)))) / norm
    field = MomentumField(grid, envelope[..., None] * v_ap, mass, "dirac", "antiparticle")
    if rep == "fw":
        field = to_fw_picture(field)
    elif rep != "dirac":
        raise ValueError(f"rep must be one of {REPS}, got {rep!r}")
    return _validated(field, check_coordinate=False)


# ---------------------------------------------------------------------------
# evolution wrappers, branch projections, continuity and trembling motion


def evolve_dirac(field: MomentumField, t: float) -> MomentumField:
    """Advance a Dirac-picture field by duration t."""
    if field.rep != "dirac":
        raise ValueError("evolve_dirac expects a Dirac-picture field")
    return evolve(field, t)


def evolve_fw(field: MomentumField, t: float) -> MomentumField:
    """Advance an FW-picture field by duration t (diagonal phases)."""
    if field.rep != "fw":
        raise ValueError("evolve_fw expects an FW-picture field")
    return evolve(field, t)


@dataclass(frozen=True)
class DensityCurrent:
    """Pointwise density/current pair on the coordinate lattice."""

    density: np.ndarray  # (n, n, n) real
    current: np.ndarray  # (n, n, n, 3) real
    time: float


def dirac_density_current(field: CoordinateField) -> DensityCurrent:
    """Bundle rho = psi^dag psi with j^k = psi^dag alpha^k psi (Dirac picture)."""
    return DensityCurrent(density(field), current_density(field), field.time)


def branch_projection(field: MomentumField, branch: str) -> MomentumField:
    """Node-wise orthogonal projection onto the +E or -E eigenspace of H(p).

    In the FW picture the projector selects the upper or lower component
    pair; in the Dirac picture it contracts against the two branch
    eigenspinors (unit norm, orthogonal across the energy split).
    """
    if branch not in ("particle", "antiparticle"):
        raise ValueError(f"branch must be 'particle' or 'antiparticle', got {branch!r}")
    if field.branch == "antiparticle":
        raise ValueError("antiparticle-labeled fields are already single-branch")
    if field.rep == "fw":
        vals = field.values.copy()
        if branch == "particle":
            vals[..., 2:] = 0.0
        else:
            vals[..., :2] = 0.0
    else:
        vals = np.zeros_like(field.values)
        for chi in (np.array([1.0, 0.0], dtype=complex), np.array([0.0, 1.0], dtype=complex)):
            v_plus, v_minus = _branch_channels(field.grid, field.mass, chi)
            v = v_plus if branch == "particle" else v_minus
            coeff = np.einsum("xyza,xyza->xyz", v.conj(), field.values)
            vals += coeff[..., None] * v
    return replace(field, values=vals, branch=branch)


def concentration_box(grid: Grid, rho: np.ndarray, fraction: float = 0.999):
    """Smallest centroid-centered cube holding `fraction` of the density.

    Returns (center, halfwidth). Sup-metric distances, so the region is the
    cube |x - c|_inf <= halfwidth.
    """
    total = np.sum(rho)
    center = np.einsum("xyz,xyzk->k", rho, grid.x) / total
    dist = np.max(np.abs(grid.x - center), axis=-1)
    order = np.argsort(dist, axis=None)
    cum = np.cumsum(rho.ravel()[order])
    stop = int(np.searchsorted(cum, fraction * total))
    stop = min(stop, cum.size - 1)
    return center, float(dist.ravel()[order][stop])


@dataclass(frozen=True)
class ContinuityReport:
    """Continuity defect || d(rho)/dt + div j || with a nonlocality proxy.

    The density rate uses a centered difference over 2*dt; `dt_warning` is
    set when that time-step error dominates the reported residual. The
    nonlocality proxy is the fraction of the current magnitude living
    outside the smallest cube holding 99.9% of the density.
    """

    rep: str
    dt: float
    residual_l2: float
    residual_sup: float
    rate_scale: float
    nonlocality: float
    dt_warning: bool


def continuity_residual(field: MomentumField, dt: float) -> ContinuityReport:
    """Continuity audit at the field's current time (either picture)."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    grid = field.grid
    rho_plus = density(to_coordinate(evolve(field, dt)))
    rho_minus = density(to_coordinate(evolve(field, -dt)))
    rate_fd = (rho_plus - rho_minus) / (2.0 * dt)
    if field.rep == "dirac":
        j = current_density(to_coordinate(field))
    else:
        j = fw_current_density(field)
    defect = rate_fd + divergence(grid, j)
    cell = grid.dx**3
    res_l2 = float(np.sqrt(np.sum(defect**2) * cell))
    rate_scale = float(np.sqrt(np.sum(rate_fd**2) * cell))

    rho = density(to_coordinate(field))
    center, half = concentration_box(grid, rho, 0.999)
    outside = np.max(np.abs(grid.x - center), axis=-1) > half
    jmag = np.sqrt(np.einsum("xyzk,xyzk->xyz", j, j))
    nonlocality = float(np.sum(jmag[outside]) / np.sum(jmag))
    return ContinuityReport(
        rep=field.rep,
        dt=dt,
        residual_l2=res_l2,
        residual_sup=float(np.abs(defect).max()),
        rate_scale=rate_scale,
        nonlocality=nonlocality,
        dt_warning=bool(res_l2 > 0.01 * rate_scale),
    )


def _linear_slopes(times: np.ndarray, track: np.ndarray) -> np.ndarray:
    return np.array([np.polyfit(times, track[:, k], 1)[0] for k in range(3)])


def _dominant_angular_frequency(times: np.ndarray, signal: np.ndarray) -> float:
    """Peak of the windowed spectrum of the detrended signal (angular units),
    refined by parabolic interpolation around the peak bin."""
    detrended = signal - np.polyval(np.polyfit(times, signal, 1), times)
    window = np.hanning(len(times))
    amp = np.abs(np.fft.rfft(detrended * window))
    freqs = 2.0 * np.pi * np.fft.rfftfreq(len(times), d=times[1] - times[0])
    k = int(np.argmax(amp[1:])) + 1
    if 1 <= k < len(amp) - 1:
        a, b, c = amp[k - 1], amp[k], amp[k + 1]
        shift = 0.5 * (a - c) / (a - 2.0 * b + c)
        return float(freqs[k] + shift * (freqs[1] - freqs[0]))
    return float(freqs[k])


@dataclass(frozen=True)
class ZitterbewegungResult:
    """Tracks of the naive coordinate and the branch position operator.

    The coordinate track of a branch-mixed field oscillates around ballistic
    motion at the interference frequency 2<E>; the branch position drifts
    with the classical velocity <p/E> for any mix.
    """

    times: np.ndarray
    coordinate_track: np.ndarray       # (samples, 3) <x-hat>
    branch_position_track: np.ndarray  # (samples, 3) <X_P> on the +E projection
    velocity_expectation: np.ndarray   # (3,) <p/E>
    mean_energy: float
    dominant_frequency: float
    coordinate_slopes: np.ndarray
    branch_slopes: np.ndarray


def zitterbewegung_experiment(
    mix=(1.0, 1.0),
    duration: float = 40.0,
    samples: int = 160,
    grid: Grid | None = None,
    mass: float = 1.0,
    p0=(0.0, 0.0, 0.0),
    sigma: float = 4.0,
    spin=0.5,
) -> ZitterbewegungResult:
    """Track position expectations of a (possibly branch-mixed) packet."""
    if samples < 16:
        raise ValueError("need at least 16 samples to resolve a trembling frequency")
    if grid is None:
        grid = Grid(48, 6.0)
    from .positionops import apply_dirac_coordinate, apply_xp, position_expectation

    f = gaussian_packet(grid, mass, p0, (0.0, 0.0, 0.0), sigma=sigma, spin=spin, weights=mix)
    dens = _measure(f) * np.einsum("xyza,xyza->xyz", f.values.conj(), f.values).real
    total = np.sum(dens)
    e = grid.energies(mass)
    mean_energy = float(np.sum(dens * e) / total)
    v_exp = np.einsum("xyz,xyzk->k", dens / e, grid.p) / total

    times = np.linspace(0.0, duration, samples)
    step = times[1] - times[0]
    x_track = np.empty((samples, 3))
    b_track = np.empty((samples, 3))
    cur = f
    for i in range(samples):
        x_track[i] = position_expectation(cur, apply_dirac_coordinate)
        proj = branch_projection(cur, "particle")
        b_track[i] = position_expectation(proj, apply_xp)
        if i + 1 < samples:
            cur = evolve(cur, step)

    osc = x_track - times[:, None] * _linear_slopes(times, x_track)
    axis = int(np.argmax(np.var(osc, axis=0)))
    return ZitterbewegungResult(
        times=times,
        coordinate_track=x_track,
        branch_position_track=b_track,
        velocity_expectation=v_exp,
        mean_energy=mean_energy,
        dominant_frequency=_dominant_angular_frequency(times, x_track[:, axis]),
        coordinate_slopes=_linear_slopes(times, x_track),
        branch_slopes=_linear_slopes(times, b_track),
    )
