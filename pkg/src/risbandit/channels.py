"""Channel generation for a multi-RIS MISO downlink with Ricean fading.

The base station reaches K single-antenna users only through M reflecting
surfaces: each BS-RIS link is an N x N_T complex matrix and each RIS-UE
link a length-N complex row vector. Both are Ricean mixtures of a
geometry-derived line-of-sight term (steering-vector outer products) and
an IID complex-Gaussian scatter term. Free-space pathloss is kept out of
the raw channel entries and tracked as per-hop amplitude attenuation, so
channel coefficients stay O(1) and attenuation is applied once when the
end-to-end channel is assembled.

Conventions (fixed here, any consistent choice gives the same statistics):
half-wavelength element spacing, phase reference at element 0, exp(-j...)
phase sign, BS as a ULA along its local x-axis, each RIS as an
N_h x N_v planar array.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT_M_S = 299792458.0


@dataclass(frozen=True)
class Position3D:
    """Cartesian coordinates in meters."""

    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


@dataclass(frozen=True)
class Geometry:
    """Placement and array dimensions of BS, RISs, and UEs.

    Every RIS is an identical n_rows x n_cols panel; the BS is a ULA with
    ``bs_antennas`` elements.
    """

    bs: Position3D
    ris: tuple[Position3D, ...]
    ues: tuple[Position3D, ...]
    bs_antennas: int
    ris_rows: int
    ris_cols: int

    def __post_init__(self):
        if len(self.ris) < 1:
            raise ValueError("at least one RIS required")
        if len(self.ues) < 1:
            raise ValueError("at least one UE required")
        if self.bs_antennas < 1:
            raise ValueError("bs_antennas must be >= 1")
        if self.ris_rows < 1 or self.ris_cols < 1:
            raise ValueError("RIS panel dimensions must be >= 1")

    @property
    def n_ris(self) -> int:
        return len(self.ris)

    @property
    def n_ues(self) -> int:
        return len(self.ues)

    @property
    def elements_per_ris(self) -> int:
        return self.ris_rows * self.ris_cols


@dataclass(frozen=True)
class RiceanParams:
    """Ricean factors (dB) for the two hops and the carrier frequency."""

    kappa1_db: float
    kappa2_db: float
    carrier_hz: float

    def __post_init__(self):
        if not (self.carrier_hz > 0):
            raise ValueError("carrier_hz must be positive")

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT_M_S / self.carrier_hz


@dataclass
class ChannelSet:
    """One coherence block's realization of every link.

    h: (M, N, N_T) BS->RIS matrices; g: (M, K, N) RIS->UE row vectors;
    d_bs_ris: (M,) and d_ris_ue: (M, K) hop distances in meters.
    """

    h: np.ndarray
    g: np.ndarray
    d_bs_ris: np.ndarray
    d_ris_ue: np.ndarray

    def validate(self, geom: Geometry) -> None:
        m, k, n, nt = geom.n_ris, geom.n_ues, geom.elements_per_ris, geom.bs_antennas
        if self.h.shape != (m, n, nt):
            raise ValueError(f"h shape {self.h.shape} != {(m, n, nt)}")
        if self.g.shape != (m, k, n):
            raise ValueError(f"g shape {self.g.shape} != {(m, k, n)}")
        if self.d_bs_ris.shape != (m,) or self.d_ris_ue.shape != (m, k):
            raise ValueError("distance arrays do not match geometry")
        for arr in (self.h, self.g, self.d_bs_ris, self.d_ris_ue):
            if not np.all(np.isfinite(arr.view(float))):
                raise ValueError("non-finite channel entry")


def pathloss_db(d: float, wavelength: float) -> float:
    """Free-space power loss 20*log10(4*pi*d/lambda) in dB."""
    if d <= 0:
        raise ValueError(f"distance must be positive, got {d}")
    if wavelength <= 0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    return 20.0 * math.log10(4.0 * math.pi * d / wavelength)


def amplitude_attenuation(d: float, wavelength: float) -> float:
    """Linear amplitude factor 10^(-pathloss/20) for one hop."""
    return 10.0 ** (-pathloss_db(d, wavelength) / 20.0)


def angles_between(src: Position3D, dst: Position3D) -> tuple[float, float, float]:
    """Azimuth, elevation, and distance of dst as seen from src.

    Azimuth is atan2(dy, dx) in the horizontal plane, elevation is
    asin(dz / distance).
    """
    delta = dst.as_array() - src.as_array()
    dist = float(np.linalg.norm(delta))
    if dist == 0.0:
        raise ValueError("src and dst coincide; angles undefined")
    azimuth = math.atan2(delta[1], delta[0])
    elevation = math.asin(delta[2] / dist)
    return azimuth, elevation, dist


def ula_steering(n_antennas: int, azimuth: float) -> np.ndarray:
    """Uniform linear array response, element n = exp(-j*pi*n*sin(az))."""
    if n_antennas < 1:
        raise ValueError("n_antennas must be >= 1")
    n = np.arange(n_antennas)
    return np.exp(-1j * np.pi * n * math.sin(azimuth))


def upa_steering(n_h: int, n_v: int, azimuth: float, elevation: float) -> np.ndarray:
    """Planar array response as the Kronecker product of two ULA factors.

    Horizontal factor: exp(-j*pi*p*cos(el)*sin(az)), p = 0..n_h-1.
    Vertical factor:   exp(-j*pi*q*sin(el)),         q = 0..n_v-1.
    """
    if n_h < 1 or n_v < 1:
        raise ValueError("panel dimensions must be >= 1")
    p = np.arange(n_h)
    q = np.arange(n_v)
    horizontal = np.exp(-1j * np.pi * p * math.cos(elevation) * math.sin(azimuth))
    vertical = np.exp(-1j * np.pi * q * math.sin(elevation))
    return np.kron(horizontal, vertical)


def ris_panel_shape(n_elements: int) -> tuple[int, int]:
    """Panel aspect (rows, cols) for an N-element RIS.

    Square when N is a perfect square; otherwise cols is the largest power
    of two <= sqrt(N) that divides N (so rows stays integral).
    """
    if n_elements < 1:
        raise ValueError("n_elements must be >= 1")
    root = math.isqrt(n_elements)
    if root * root == n_elements:
        return root, root
    n_v = 1
    while n_v * 2 <= root:
        n_v *= 2
    while n_elements % n_v != 0:
        n_v //= 2
    return n_elements // n_v, n_v


def _ricean_weights(kappa_db: float) -> tuple[float, float]:
    """(LOS, NLOS) amplitude weights from a Ricean factor in dB."""
    kappa = 10.0 ** (kappa_db / 10.0)
    if math.isinf(kappa):
        return 1.0, 0.0
    return math.sqrt(kappa / (kappa + 1.0)), math.sqrt(1.0 / (kappa + 1.0))


def _complex_gaussian(shape: tuple[int, ...], rng: np.random.Generator) -> np.ndarray:
    """IID CN(0,1): real and imaginary parts each Normal(0, 1/2)."""
    scale = math.sqrt(0.5)
    return scale * rng.standard_normal(shape) + 1j * scale * rng.standard_normal(shape)


def los_bs_ris(geom: Geometry, m: int) -> np.ndarray:
    """Rank-one LOS term: RIS arrival steering times BS departure steering^H."""
    az_arr, el_arr, _ = angles_between(geom.ris[m], geom.bs)
    az_dep, _, _ = angles_between(geom.bs, geom.ris[m])
    a_ris = upa_steering(geom.ris_rows, geom.ris_cols, az_arr, el_arr)
    a_bs = ula_steering(geom.bs_antennas, az_dep)
    return np.outer(a_ris, a_bs.conj())


def los_ris_ue(geom: Geometry, m: int, k: int) -> np.ndarray:
    """LOS row vector: conjugate-transposed RIS steering toward UE k."""
    az, el, _ = angles_between(geom.ris[m], geom.ues[k])
    return upa_steering(geom.ris_rows, geom.ris_cols, az, el).conj()


def sample_bs_ris_channel(
    geom: Geometry, params: RiceanParams, m: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw one N x N_T BS->RIS matrix from the Ricean mixture."""
    if m >= geom.n_ris:
        raise IndexError(f"RIS index {m} out of range")
    los_w, nlos_w = _ricean_weights(params.kappa1_db)
    shape = (geom.elements_per_ris, geom.bs_antennas)
    return los_w * los_bs_ris(geom, m) + nlos_w * _complex_gaussian(shape, rng)


def sample_ris_ue_channel(
    geom: Geometry, params: RiceanParams, m: int, k: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw one length-N RIS->UE row vector from the Ricean mixture."""
    if m >= geom.n_ris:
        raise IndexError(f"RIS index {m} out of range")
    if k >= geom.n_ues:
        raise IndexError(f"UE index {k} out of range")
    los_w, nlos_w = _ricean_weights(params.kappa2_db)
    shape = (geom.elements_per_ris,)
    return los_w * los_ris_ue(geom, m, k) + nlos_w * _complex_gaussian(shape, rng)


def sample_channel_set(
    geom: Geometry, params: RiceanParams, rng: np.random.Generator
) -> ChannelSet:
    """Draw every link of one coherence block (IID across calls)."""
    m_ris, k_ues = geom.n_ris, geom.n_ues
    h = np.empty((m_ris, geom.elements_per_ris, geom.bs_antennas), dtype=complex)
    g = np.empty((m_ris, k_ues, geom.elements_per_ris), dtype=complex)
    d_bs_ris = np.empty(m_ris)
    d_ris_ue = np.empty((m_ris, k_ues))
    for m in range(m_ris):
        h[m] = sample_bs_ris_channel(geom, params, m, rng)
        _, _, d_bs_ris[m] = angles_between(geom.bs, geom.ris[m])
        for k in range(k_ues):
            g[m, k] = sample_ris_ue_channel(geom, params, m, k, rng)
            _, _, d_ris_ue[m, k] = angles_between(geom.ris[m], geom.ues[k])
    return ChannelSet(h=h, g=g, d_bs_ris=d_bs_ris, d_ris_ue=d_ris_ue)
