"""Uniform fiber Bragg grating model.

Coupled-mode closed form for the reflection spectrum, a transfer-matrix
cross-check, forward design from stop-band targets (peak-reflection
bandwidth and line-center transmission contrast), and export of the
grating as a spectral filter for the heralding arm.

Conventions: detuning delta = 2 pi n_eff (1/lambda - 1/lambda_B), coupling
kappa = pi * visibility * delta_n / lambda_B, both in 1/m.  A lossless
uniform grating satisfies R + T = 1 exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import DesignError, NumericError, ValidationError
from .units import fwhm_linear_nm

C_BAND_NM = (1500.0, 1600.0)

# Manufacturability bounds used by design_uniform.  Lengths outside this
# range or modulation depths above the UV-writing ceiling are rejected.
_LENGTH_BOUNDS_MM = (1.0, 1000.0)
_MAX_DELTA_N = 0.01
_FRONTIER_LENGTHS_MM = (10.0, 100.0)


@dataclass(frozen=True)
class GratingSpec:
    """Physical parameters of a uniform Bragg grating."""

    length_mm: float
    period_nm: float
    n_eff: float
    delta_n: float
    visibility: float = 1.0

    def __post_init__(self):
        if self.length_mm <= 0:
            raise ValidationError(f"grating length must be > 0, got {self.length_mm}")
        if self.period_nm <= 0:
            raise ValidationError(f"grating period must be > 0, got {self.period_nm}")
        if not 1.3 < self.n_eff < 1.6:
            raise ValidationError(f"n_eff must lie in (1.3, 1.6), got {self.n_eff}")
        if self.delta_n < 0:
            raise ValidationError(f"index modulation must be >= 0, got {self.delta_n}")
        if not 0.0 <= self.visibility <= 1.0:
            raise ValidationError(
                f"fringe visibility must lie in [0, 1], got {self.visibility}"
            )
        lam_b = self.bragg_nm
        if not C_BAND_NM[0] <= lam_b <= C_BAND_NM[1]:
            raise ValidationError(
                f"Bragg wavelength {lam_b:.3f} nm outside the C-band window "
                f"[{C_BAND_NM[0]:.0f}, {C_BAND_NM[1]:.0f}] nm"
            )

    @property
    def bragg_nm(self) -> float:
        """Bragg wavelength 2 n_eff Lambda_g in nm."""
        return 2.0 * self.n_eff * self.period_nm

    @property
    def length_m(self) -> float:
        return self.length_mm * 1e-3

    @property
    def kappa_per_m(self) -> float:
        """AC coupling coefficient pi * visibility * delta_n / lambda_B."""
        return math.pi * self.visibility * self.delta_n / (self.bragg_nm * 1e-9)

    @property
    def kappa_length(self) -> float:
        """Dimensionless grating strength kappa * L_g."""
        return self.kappa_per_m * self.length_m

    def detuning_per_m(self, wavelength_nm):
        """Detuning 2 pi n_eff (1/lambda - 1/lambda_B) in 1/m."""
        lam = np.asarray(wavelength_nm, dtype=float)
        if np.any(lam <= 0):
            raise ValidationError("wavelength must be > 0")
        out = 2.0 * np.pi * self.n_eff * (1.0 / (lam * 1e-9) - 1.0 / (self.bragg_nm * 1e-9))
        return float(out) if np.isscalar(wavelength_nm) else out

    def to_json(self, path=None) -> str:
        payload = {
            "model": "uniform_grating",
            "length_mm": self.length_mm,
            "period_nm": self.period_nm,
            "n_eff": self.n_eff,
            "delta_n": self.delta_n,
            "visibility": self.visibility,
            "bragg_nm": self.bragg_nm,
        }
        text = json.dumps(payload, indent=2, sort_keys=True)
        if path is not None:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        return text

    @classmethod
    def from_json(cls, path=None, text=None) -> "GratingSpec":
        if text is None:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed grating JSON: {exc}") from exc
        try:
            return cls(
                length_mm=float(payload["length_mm"]),
                period_nm=float(payload["period_nm"]),
                n_eff=float(payload["n_eff"]),
                delta_n=float(payload["delta_n"]),
                visibility=float(payload.get("visibility", 1.0)),
            )
        except KeyError as exc:
            raise ValidationError(f"grating JSON missing key {exc}") from exc


@dataclass(frozen=True)
class SpectralFilter:
    """Sampled reflectance/transmittance filter on a wavelength grid."""

    wavelength_nm: np.ndarray
    reflectance: np.ndarray
    transmittance: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        lam = np.ascontiguousarray(np.asarray(self.wavelength_nm, dtype=float))
        r = np.ascontiguousarray(np.asarray(self.reflectance, dtype=float))
        t = np.ascontiguousarray(np.asarray(self.transmittance, dtype=float))
        if lam.ndim != 1 or lam.size < 2:
            raise ValidationError("filter grid must be 1-D with >= 2 points")
        if r.shape != lam.shape or t.shape != lam.shape:
            raise ValidationError("filter arrays must share the grid shape")
        if np.any(np.diff(lam) <= 0):
            raise ValidationError("filter grid must be strictly increasing")
        if np.any(r < -1e-12) or np.any(r > 1.0 + 1e-12):
            raise ValidationError("reflectance outside [0, 1]")
        if np.any(t < -1e-12) or np.any(t > 1.0 + 1e-12):
            raise ValidationError("transmittance outside [0, 1]")
        if np.any(r + t > 1.0 + 1e-12):
            raise ValidationError("R + T exceeds 1 beyond tolerance (lossy filter)")
        for name, arr in (("wavelength_nm", lam), ("reflectance", r), ("transmittance", t)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def reflection_fwhm_nm(self) -> float:
        return fwhm_linear_nm(self.wavelength_nm, self.reflectance)

    def to_csv(self, path) -> None:
        """Spectrum as `wavelength_nm,R,T,T_db` rows."""
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("wavelength_nm,R,T,T_db\n")
            for lam, r, t in zip(self.wavelength_nm, self.reflectance, self.transmittance):
                t_db = 10.0 * math.log10(max(t, 1e-300))
                fh.write(f"{lam:.9g},{r:.12g},{t:.12g},{t_db:.6f}\n")


def _tanhc(x: np.ndarray) -> np.ndarray:
    """tanh(x)/x with the x -> 0 limit handled."""
    out = np.ones_like(x)
    nz = np.abs(x) > 1e-8
    out[nz] = np.tanh(x[nz]) / x[nz]
    return out


def _sinc(x: np.ndarray) -> np.ndarray:
    """sin(x)/x with the x -> 0 limit handled."""
    out = np.ones_like(x)
    nz = np.abs(x) > 1e-8
    out[nz] = np.sin(x[nz]) / x[nz]
    return out


def reflectance_analytic(spec: GratingSpec, wavelength_nm):
    """Closed-form (R, T) of the uniform grating at the given wavelengths.

    Inside the stop band (kappa^2 > delta^2, gamma^2 = kappa^2 - delta^2):

        R = kappa^2 tanh^2(gamma L) / (gamma^2 + delta^2 tanh^2(gamma L))

    outside (q^2 = delta^2 - kappa^2):

        R = kappa^2 sin^2(q L) / (q^2 + kappa^2 sin^2(q L))

    both evaluated in overflow-free normalized forms, continuous at the
    band edge; T = 1 - R exactly.
    """
    lam = np.atleast_1d(np.asarray(wavelength_nm, dtype=float))
    delta = spec.detuning_per_m(lam)
    kappa = spec.kappa_per_m
    length = spec.length_m
    g2 = kappa * kappa - delta * delta
    root = np.sqrt(np.abs(g2)) * length
    r_out = np.empty_like(lam)
    inside = g2 >= 0.0
    # In band: R = (kL)^2 tanhc^2 / (1 + (dL)^2 tanhc^2).
    tc = _tanhc(root[inside])
    num = (kappa * length * tc) ** 2
    r_out[inside] = num / (1.0 + (delta[inside] * length * tc) ** 2)
    # Out of band: R = (kL)^2 sinc^2 / (1 + (kL)^2 sinc^2).
    sc = _sinc(root[~inside])
    num = (kappa * length * sc) ** 2
    r_out[~inside] = num / (1.0 + num)
    t_out = 1.0 - r_out
    if np.isscalar(wavelength_nm):
        return float(r_out[0]), float(t_out[0])
    return r_out, t_out


def section_matrix(
    kappa_per_m: float, delta_per_m, length_m: float
) -> np.ndarray:
    """2x2 coupled-mode transfer matrix of one uniform section.

    Unimodular for real kappa/delta (lossless).  Vectorized over delta:
    returns shape (..., 2, 2).
    """
    if length_m <= 0:
        raise ValidationError(f"section length must be > 0, got {length_m}")
    delta = np.asarray(delta_per_m, dtype=complex)
    gamma = np.sqrt(kappa_per_m * kappa_per_m - delta * delta + 0j)
    z = gamma * length_m
    # sinh(z)/z, limit 1 at z = 0.
    shc = np.ones_like(z)
    nz = np.abs(z) > 1e-8
    shc[nz] = np.sinh(z[nz]) / z[nz]
    ch = np.cosh(z)
    f11 = ch - 1j * delta * length_m * shc
    f12 = -1j * kappa_per_m * length_m * shc
    f21 = 1j * kappa_per_m * length_m * shc
    f22 = ch + 1j * delta * length_m * shc
    out = np.empty(delta.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = f11
    out[..., 0, 1] = f12
    out[..., 1, 0] = f21
    out[..., 1, 1] = f22
    return out


def rt_from_matrix(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(R, T) from a composed transfer matrix, overflow-rescaled upstream."""
    m11 = matrix[..., 0, 0]
    m21 = matrix[..., 1, 0]
    if np.any(~np.isfinite(m11)) or np.any(~np.isfinite(m21)):
        raise NumericError("transfer matrix overflowed; rescale sections")
    mag2 = np.abs(m11) ** 2
    if np.any(mag2 == 0.0):
        raise NumericError("singular transfer matrix (|M11| = 0)")
    r = np.abs(m21) ** 2 / mag2
    det = matrix[..., 0, 0] * matrix[..., 1, 1] - matrix[..., 0, 1] * matrix[..., 1, 0]
    t = np.abs(det) / mag2
    return r, t


def reflectance_tmm(
    spec: GratingSpec, wavelength_nm, n_sections: int = 8
) -> SpectralFilter:
    """Transfer-matrix reflection spectrum of the uniform grating.

    Splits the grating into equal uniform sections and composes their
    matrices; exact for any section count, so it cross-checks the closed
    form.  Intermediate products are rescaled when they grow large; R and
    T are scale-free ratios.
    """
    if n_sections < 1:
        raise ValidationError(f"n_sections must be >= 1, got {n_sections}")
    lam = np.atleast_1d(np.asarray(wavelength_nm, dtype=float))
    delta = spec.detuning_per_m(lam)
    sec = section_matrix(spec.kappa_per_m, delta, spec.length_m / n_sections)
    acc = sec
    log_scale = np.zeros(lam.shape)
    for _ in range(n_sections - 1):
        acc = acc @ sec
        mag = np.abs(acc).max(axis=(-2, -1))
        big = mag > 1e100
        if np.any(big):
            acc[big] /= mag[big, None, None]
            log_scale[big] += np.log(mag[big])
    if np.any(~np.isfinite(acc)):
        raise NumericError("transfer-matrix product is not finite")
    r, t_ratio = rt_from_matrix(acc)
    # |det| of the true matrix is 1; rescaling by s divides det by s^2 and
    # |M11|^2 by s^2 alike, so the det/|M11|^2 ratio needs no correction.
    t = t_ratio
    return SpectralFilter(
        wavelength_nm=lam,
        reflectance=np.clip(r, 0.0, 1.0),
        transmittance=np.clip(t, 0.0, 1.0),
        metadata={"method": "tmm", "n_sections": n_sections},
    )


@dataclass(frozen=True)
class DesignResult:
    """Solved grating plus the re-simulated stop-band metrics."""

    spec: GratingSpec
    achieved_fwhm_nm: float
    achieved_contrast_db: float
    fifty_mm_feasible: bool


def _half_width_detuning(kappa_length: float) -> float:
    """Dimensionless detuning s = delta*L where R falls to half its peak.

    The half point of a design-strength grating sits outside the stop
    band, where R(s) = x^2 sin^2(q)/(q^2 + x^2 sin^2(q)), q^2 = s^2 - x^2,
    strictly decreasing over the first side lobe.
    """
    x = kappa_length
    half = math.tanh(x) ** 2 / 2.0

    def excess(s: float) -> float:
        q = math.sqrt(max(s * s - x * x, 0.0))
        if q < 1e-12:
            r = x * x / (1.0 + x * x)
        else:
            num = (x * math.sin(q)) ** 2
            r = num / (q * q + num)
        return r - half

    lo = x * (1.0 + 1e-12)
    hi = math.sqrt(x * x + math.pi * math.pi)
    return brentq(excess, lo, hi, xtol=1e-14, rtol=8.9e-16)


def design_uniform(
    bragg_nm: float,
    target_fwhm_nm: float,
    target_contrast_db: float,
    n_eff: float = 1.45,
    visibility: float = 1.0,
) -> DesignResult:
    """Solve (kappa, L_g) for a target reflection FWHM and line-center
    transmission contrast, then verify by re-simulating the spectrum.

    The contrast pins kappa*L exactly (T(0) = sech^2(kappa L)); the FWHM
    then fixes the length, so the two-target root find reduces to a
    sequential solve.  The returned result reports whether a lab-typical
    50 mm grating could meet this target pair.
    """
    if target_fwhm_nm <= 0:
        raise ValidationError(f"target FWHM must be > 0, got {target_fwhm_nm}")
    if target_contrast_db <= 0:
        raise ValidationError(
            f"target contrast must be > 0 dB, got {target_contrast_db} "
            "(zero contrast means no grating)"
        )
    if not 1.3 < n_eff < 1.6:
        raise ValidationError(f"n_eff must lie in (1.3, 1.6), got {n_eff}")
    if not 0.0 < visibility <= 1.0:
        raise ValidationError(f"visibility must lie in (0, 1], got {visibility}")

    kappa_length = math.acosh(10.0 ** (target_contrast_db / 20.0))
    s_half = _half_width_detuning(kappa_length)
    lam_b_m = bragg_nm * 1e-9
    length_m = s_half * lam_b_m * lam_b_m / (
        math.pi * n_eff * (target_fwhm_nm * 1e-9)
    )
    kappa = kappa_length / length_m
    delta_n = kappa * lam_b_m / (math.pi * visibility)
    length_mm = length_m * 1e3

    lo, hi = _LENGTH_BOUNDS_MM
    if not lo <= length_mm <= hi or delta_n > _MAX_DELTA_N:
        f_lo, f_hi = _FRONTIER_LENGTHS_MM
        fwhm_at = lambda l_mm: s_half * lam_b_m * lam_b_m / (
            math.pi * n_eff * l_mm * 1e-3
        ) * 1e9
        raise DesignError(
            f"targets ({target_fwhm_nm} nm, {target_contrast_db} dB) need "
            f"L = {length_mm:.3g} mm, delta_n = {delta_n:.3g}; at this "
            f"contrast the achievable FWHM spans "
            f"[{fwhm_at(f_hi):.4g}, {fwhm_at(f_lo):.4g}] nm for "
            f"L in [{f_lo:.0f}, {f_hi:.0f}] mm"
        )

    spec = GratingSpec(
        length_mm=length_mm,
        period_nm=bragg_nm / (2.0 * n_eff),
        n_eff=n_eff,
        delta_n=delta_n,
        visibility=visibility,
    )

    # Re-simulate and verify both targets within 1%.
    span = 4.0 * target_fwhm_nm
    grid = np.linspace(bragg_nm - span, bragg_nm + span, 4001)
    r_grid, _ = reflectance_analytic(spec, grid)
    achieved_fwhm = fwhm_linear_nm(grid, r_grid)
    _, t_center = reflectance_analytic(spec, spec.bragg_nm)
    achieved_contrast = 10.0 * math.log10(1.0 / t_center)
    if abs(achieved_fwhm - target_fwhm_nm) > 0.01 * target_fwhm_nm or abs(
        achieved_contrast - target_contrast_db
    ) > 0.01 * target_contrast_db:
        raise NumericError(
            f"design self-check failed: achieved ({achieved_fwhm:.6g} nm, "
            f"{achieved_contrast:.6g} dB) vs targets "
            f"({target_fwhm_nm}, {target_contrast_db})"
        )
    return DesignResult(
        spec=spec,
        achieved_fwhm_nm=achieved_fwhm,
        achieved_contrast_db=achieved_contrast,
        fifty_mm_feasible=abs(length_mm - 50.0) <= 0.5,
    )


def as_idler_filter(
    spec: GratingSpec,
    wavelength_nm,
    floor_db: float | None = 17.5,
) -> SpectralFilter:
    """Reflection-arm heralding filter sampled on the given grid.

    The ideal reflectance is floored at ``peak * 10**(-floor_db/10)`` to
    model the finite peak-to-background contrast of the measured reflected
    spectrum; pass ``floor_db=None`` for the ideal grating.
    """
    lam = np.atleast_1d(np.asarray(wavelength_nm, dtype=float))
    if lam[0] > spec.bragg_nm - 5.0 or lam[-1] < spec.bragg_nm + 5.0:
        raise ValidationError(
            f"filter grid [{lam[0]:.6g}, {lam[-1]:.6g}] nm must cover the "
            f"Bragg wavelength {spec.bragg_nm:.6g} +- 5 nm"
        )
    r, _ = reflectance_analytic(spec, lam)
    meta = {"bragg_nm": spec.bragg_nm, "floor_db": floor_db}
    if floor_db is not None:
        if floor_db <= 0:
            raise ValidationError(f"floor_db must be > 0, got {floor_db}")
        peak = math.tanh(spec.kappa_length) ** 2
        r = np.maximum(r, peak * 10.0 ** (-floor_db / 10.0))
    return SpectralFilter(
        wavelength_nm=lam,
        reflectance=r,
        transmittance=1.0 - r,
        metadata=meta,
    )
