"""Dipole-dipole coupling matrix for a J_g=0 -> J_e=1 transition.

Units: hbar = 1, k = 1, gamma = 1. Each atom carries the three excited-state
Zeeman amplitudes (m = -1, 0, +1); equivalently, a complex 3-vector of
Cartesian dipole components. The two representations are related atom by
atom by the unitary whose columns are the spherical unit vectors e_m.

The full 3N x 3N matrices are assembled in the Cartesian component basis,
where the coupling V is complex symmetric (reciprocity) with zero 3x3
diagonal blocks. The Zeeman-basis matrix is unitarily equivalent per atom
and shares its spectrum; ``pair_coupling`` exposes those elements directly.

Sign convention: the evolution matrix is M = (i*delta - 1/2) I + (i/2) V,
and a two-atom collective state with level shift D and decay rate G
contributes the eigenvalue lambda = -G/2 - i*D at delta = 0, so that a
drive detuned by delta = D is resonant with that state.  This convention is
pinned by the closed-form two-atom oracle in ``dipolecloud.dimer``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensemble import EnsembleConfiguration

_EX = np.array([1.0, 0.0, 0.0])
_EY = np.array([0.0, 1.0, 0.0])
_EZ = np.array([0.0, 0.0, 1.0])

# Spherical basis with Condon-Shortley phases: e_{+1} = -(x + iy)/sqrt(2),
# e_0 = z, e_{-1} = (x - iy)/sqrt(2).
_SPHERICAL = {
    +1: -(_EX + 1j * _EY) / np.sqrt(2.0),
    0: _EZ.astype(complex),
    -1: (_EX - 1j * _EY) / np.sqrt(2.0),
}

# Columns e_{-1}, e_0, e_{+1}: Cartesian vector v has Zeeman components
# C^dagger v (Hermitian projection onto e_m).
BASIS_MATRIX = np.column_stack([_SPHERICAL[-1], _SPHERICAL[0], _SPHERICAL[+1]])


def spherical_unit_vector(m: int) -> np.ndarray:
    """Unit polarization vector of the m-th Zeeman component."""
    if m not in (-1, 0, +1):
        raise ValueError(f"m must be -1, 0 or +1, got {m}")
    return _SPHERICAL[m].copy()


def flat_index(atom: int, m: int) -> int:
    """Flattened Zeeman-basis index 3*atom + (m+1)."""
    if m not in (-1, 0, +1):
        raise ValueError(f"m must be -1, 0 or +1, got {m}")
    return 3 * atom + (m + 1)


def cartesian_to_zeeman(vec: np.ndarray) -> np.ndarray:
    """Convert a (..., 3N) Cartesian-component vector to Zeeman amplitudes."""
    v = np.asarray(vec)
    shaped = v.reshape(*v.shape[:-1], -1, 3)
    return (shaped @ BASIS_MATRIX.conj()).reshape(v.shape)


def zeeman_to_cartesian(vec: np.ndarray) -> np.ndarray:
    """Inverse of :func:`cartesian_to_zeeman`."""
    v = np.asarray(vec)
    shaped = v.reshape(*v.shape[:-1], -1, 3)
    return (shaped @ BASIS_MATRIX.T).reshape(v.shape)


def coupling_block(r_vec: np.ndarray) -> np.ndarray:
    """3x3 Cartesian coupling block between two atoms separated by r_vec.

    B(r) = -(3/2) (e^{ix}/x^3) [ (1 - ix - x^2) I - (3 - 3ix - x^2) nn^T ]
    with x = |r_vec| in units 1/k and n = r_vec/x.  B is complex symmetric
    and even in r_vec; |B| falls off as 1/x in the far field.
    """
    r_vec = np.asarray(r_vec, dtype=float)
    x = float(np.linalg.norm(r_vec))
    if x == 0.0:
        raise ValueError("coincident atoms: |r_vec| must be > 0")
    n = r_vec / x
    block = (1.0 - 1j * x - x * x) * np.eye(3) - (3.0 - 3j * x - x * x) * np.outer(n, n)
    return (-1.5 * np.exp(1j * x) / x**3) * block


def pair_coupling(r_vec: np.ndarray, m: int, m_prime: int) -> complex:
    """Zeeman-basis coupling element V_{(i,m),(j,m')} for separation r_vec.

    Equals e_m^dagger B(r_vec) e_{m'} with the Cartesian block above; the
    6x6 two-atom spectrum built from these elements reproduces the
    closed-form collective level shifts and decay rates.
    """
    em = spherical_unit_vector(m)
    emp = spherical_unit_vector(m_prime)
    return complex(em.conj() @ coupling_block(r_vec) @ emp)


@dataclass(frozen=True)
class CouplingMatrix:
    """Dense coupling matrix V plus derived evolution and decay matrices.

    V is 3N x 3N complex symmetric (Cartesian component basis) with zero
    diagonal blocks; M = (i*detuning - 1/2) I + (i/2) V drives
    db/dt = M b - (i/2) Omega; G = -(M + M^dagger) = I + Im V is the
    Hermitian positive-semidefinite decay-rate matrix (total emitted power
    is b^dagger G b, in units gamma).
    """

    V: np.ndarray
    detuning: float

    @property
    def n_atoms(self) -> int:
        return self.V.shape[0] // 3

    @property
    def M(self) -> np.ndarray:
        n = self.V.shape[0]
        M = (0.5j) * self.V
        idx = np.arange(n)
        M[idx, idx] += 1j * self.detuning - 0.5
        return M

    @property
    def G(self) -> np.ndarray:
        G = self.V.imag.copy()
        idx = np.arange(G.shape[0])
        G[idx, idx] += 1.0
        return G


def build_coupling_matrix(
    cfg: EnsembleConfiguration,
    detuning: float,
    dtype=np.complex128,
    block_rows: int = 256,
) -> CouplingMatrix:
    """Assemble V from pairwise coupling blocks for every atom pair.

    Vectorized over pairs in row blocks of ``block_rows`` atoms to bound
    temporaries for large N.  Raises on coincident atoms, identifying the
    offending pair.
    """
    pos = cfg.positions
    n = len(pos)
    V = np.zeros((3 * n, 3 * n), dtype=dtype)
    eye3 = np.eye(3)
    for start in range(0, n, block_rows):
        stop = min(start + block_rows, n)
        delta = pos[start:stop, None, :] - pos[None, :, :]  # (nb, n, 3)
        x = np.linalg.norm(delta, axis=-1)
        same = np.zeros_like(x, dtype=bool)
        same[np.arange(stop - start), np.arange(start, stop)] = True
        if np.any((x == 0.0) & ~same):
            i_loc, j = np.argwhere((x == 0.0) & ~same)[0]
            raise ValueError(f"coincident atoms {start + i_loc} and {j}")
        x[same] = 1.0  # placeholder; diagonal blocks forced to zero below
        nhat = delta / x[..., None]
        scalar = np.exp(1j * x) / x**3
        a = scalar * (1.0 - 1j * x - x * x)
        b = scalar * (3.0 - 3j * x - x * x)
        blocks = a[..., None, None] * eye3 - b[..., None, None] * (
            nhat[..., :, None] * nhat[..., None, :]
        )
        blocks *= -1.5
        blocks[same] = 0.0
        V[3 * start : 3 * stop] = blocks.transpose(0, 2, 1, 3).reshape(
            3 * (stop - start), 3 * n
        )
    return CouplingMatrix(V=V, detuning=float(detuning))


@dataclass(frozen=True)
class DriveField:
    """Plane-wave drive: Rabi frequency and detuning in units gamma.

    The polarization vector is complex, unit-norm and transverse to the
    propagation direction; results in the linear-optics regime are reported
    normalized, so the Rabi frequency only sets an overall scale.
    """

    rabi: float = 1.0
    detuning: float = 0.0
    propagation: np.ndarray = None
    polarization: np.ndarray = None
    duration: float = 2000.0

    def __post_init__(self):
        prop = self.propagation if self.propagation is not None else _EZ
        pol = self.polarization if self.polarization is not None else _SPHERICAL[+1]
        prop = np.asarray(prop, dtype=float)
        norm = np.linalg.norm(prop)
        if norm == 0:
            raise ValueError("propagation direction must be nonzero")
        prop = prop / norm
        pol = np.asarray(pol, dtype=complex)
        if abs(np.linalg.norm(pol) - 1.0) > 1e-12:
            raise ValueError("polarization must be unit norm")
        if abs(pol @ prop) > 1e-12:
            raise ValueError("polarization must be transverse to propagation")
        object.__setattr__(self, "propagation", prop)
        object.__setattr__(self, "polarization", pol)


def circular_drive(detuning: float, rabi: float = 1.0, duration: float = 2000.0) -> DriveField:
    """Helicity +1 (sigma+) plane wave along +z, the default drive."""
    return DriveField(rabi=rabi, detuning=detuning, duration=duration)


def build_drive_vector(
    cfg: EnsembleConfiguration, drive: DriveField, dtype=np.complex128
) -> np.ndarray:
    """Cartesian-component drive vector Omega_i^mu = Omega0 u^mu e^{i k.r_i}.

    In the Zeeman basis this is Omega0 <e_m, u> e^{i k.r_i} (Hermitian inner
    product, conjugate-linear in the first slot), so a sigma+ drive along z
    populates only m = +1.
    """
    phase = np.exp(1j * (cfg.positions @ drive.propagation))
    vec = drive.rabi * np.outer(phase, drive.polarization).reshape(-1)
    return vec.astype(dtype)
