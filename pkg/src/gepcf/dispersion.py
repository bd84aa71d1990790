"""Chromatic dispersion models for the doped-core fiber.

Three layers:

* Sellmeier material models for fused silica and GeO2-doped silica
  (coefficients interpolated linearly in molar fraction between the
  Malitson 1965 silica set and the Fleming 1984 germania set).
* A step-index LP01 proxy for the waveguide: the doped rod is treated as
  the core and the air-filled cladding as a uniform medium whose index is
  the silica index minus a constant, user-settable offset.
* Polynomial D(lambda) models, either fitted to measured group-velocity
  dispersion samples or sampled from the proxy, integrated twice in
  angular frequency to give the propagation constant beta(omega) in the
  gauge beta(omega_ref) = 0, beta'(omega_ref) = 0.  Only beta differences
  of energy-conserving frequency triples are ever physically meaningful,
  so the gauge is arbitrary; the fixed gauge makes models comparable.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.constants import c as C_M_PER_S
from scipy.special import j0, j1, k0, k1

from .errors import DomainError, FitError, NumericError, ValidationError
from .units import TWO_PI_C

# Sellmeier sets: (strength, resonance wavelength um) per term.
# Fused silica: Malitson, JOSA 55, 1205 (1965).
SILICA_SELLMEIER = (
    (0.6961663, 0.0684043),
    (0.4079426, 0.1162414),
    (0.8974794, 9.896161),
)
# GeO2 glass: Fleming, Appl. Opt. 23, 4486 (1984).
GERMANIA_SELLMEIER = (
    (0.80686642, 0.068972606),
    (0.71815848, 0.15396605),
    (0.85416831, 11.841931),
)

MATERIAL_WINDOW_UM = (0.4, 2.0)

# First zero of J0, upper u limit of the fundamental LP01 branch.
_J0_FIRST_ZERO = 2.404825557695773


@dataclass(frozen=True)
class MaterialModel:
    """Sellmeier model for SiO2-GeO2 glass.

    ``ge_molar_fraction = 0`` reproduces pure fused silica exactly; doped
    glass uses term-by-term linear interpolation of both the strengths
    and the resonance wavelengths in the molar fraction.
    """

    sellmeier_terms: tuple[tuple[float, float], ...]
    ge_molar_fraction: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.ge_molar_fraction <= 1.0:
            raise ValidationError(
                f"ge_molar_fraction must be in [0, 1], got {self.ge_molar_fraction}"
            )
        if len(self.sellmeier_terms) == 0:
            raise ValidationError("at least one Sellmeier term is required")

    @classmethod
    def fused_silica(cls) -> "MaterialModel":
        return cls(sellmeier_terms=SILICA_SELLMEIER, ge_molar_fraction=0.0)

    @classmethod
    def ge_doped_silica(cls, molar_fraction: float) -> "MaterialModel":
        """Interpolated SiO2-GeO2 glass with the given GeO2 molar fraction."""
        if not 0.0 <= molar_fraction <= 1.0:
            raise ValidationError(
                f"ge_molar_fraction must be in [0, 1], got {molar_fraction}"
            )
        x = molar_fraction
        terms = tuple(
            ((1.0 - x) * bs + x * bg, (1.0 - x) * ls + x * lg)
            for (bs, ls), (bg, lg) in zip(SILICA_SELLMEIER, GERMANIA_SELLMEIER)
        )
        return cls(sellmeier_terms=terms, ge_molar_fraction=x)

    def index(self, wavelength_um):
        """Refractive index at vacuum wavelength (um, scalar or array)."""
        lam = np.asarray(wavelength_um, dtype=float)
        lo, hi = MATERIAL_WINDOW_UM
        if np.any(lam < lo) or np.any(lam > hi):
            raise DomainError(
                f"material model valid for {lo}-{hi} um, got values outside"
            )
        lam2 = lam * lam
        n2 = np.ones_like(lam2)
        for strength, resonance_um in self.sellmeier_terms:
            n2 = n2 + strength * lam2 / (lam2 - resonance_um * resonance_um)
        n = np.sqrt(n2)
        return float(n) if np.isscalar(wavelength_um) else n


@dataclass(frozen=True)
class PcfDesign:
    """Geometry of the solid-core microstructured fiber.

    The doped-core diameter follows from the preform stacking when not
    given explicitly (cladding/core preform diameter ratio 1.5, i.e.
    doped core = 0.67 pitch).
    """

    pitch_um: float = 2.25
    hole_diameter_ratio: float = 0.45
    index_contrast: float = 23e-3
    doped_core_diameter_um: float | None = None

    def __post_init__(self):
        if self.pitch_um <= 0:
            raise ValidationError(f"pitch must be positive, got {self.pitch_um}")
        if not 0.0 < self.hole_diameter_ratio < 1.0:
            raise ValidationError(
                f"hole_diameter_ratio must be in (0, 1), got {self.hole_diameter_ratio}"
            )
        if self.index_contrast <= 0:
            raise ValidationError(
                f"index_contrast must be positive, got {self.index_contrast}"
            )
        if self.doped_core_diameter_um is None:
            object.__setattr__(self, "doped_core_diameter_um", 0.67 * self.pitch_um)
        elif self.doped_core_diameter_um <= 0:
            raise ValidationError("doped_core_diameter_um must be positive")


def lp01_effective_index(
    core_index: float,
    clad_index: float,
    core_diameter_um: float,
    wavelength_um: float,
) -> float:
    """Effective index of the fundamental LP01 mode of a step-index fiber.

    Solves the scalar weak-guidance eigenvalue condition

        u J1(u) / J0(u) = w K1(w) / K0(w),   u^2 + w^2 = V^2,

    bracketed in log(w) so the root survives both the V -> 0 limit (w
    exponentially small) and large V (w within a few ulp of V).  The LP01
    branch is the single root with u below the first zero of J0.

    Raises NumericError when no representable bound-mode root exists
    (V so small that w underflows).
    """
    if not (core_index > clad_index > 0.0):
        raise ValidationError(
            f"need core_index > clad_index > 0, got {core_index}, {clad_index}"
        )
    if core_diameter_um <= 0 or wavelength_um <= 0:
        raise ValidationError("core diameter and wavelength must be positive")

    a = 0.5 * core_diameter_um
    k0a = 2.0 * np.pi / wavelength_um * a
    v = k0a * np.sqrt((core_index - clad_index) * (core_index + clad_index))

    def g_of_logw(x):
        w = np.exp(x)
        u = np.sqrt(max((v - w) * (v + w), 0.0))
        return u * j1(u) * k0(w) - w * k1(w) * j0(u)

    if v > _J0_FIRST_ZERO:
        x_lo = 0.5 * np.log((v - _J0_FIRST_ZERO) * (v + _J0_FIRST_ZERO))
    else:
        x_lo = np.log(v) - 640.0  # far below any representable root
    x_hi = np.log(v * (1.0 - 1e-15))

    g_lo, g_hi = g_of_logw(x_lo), g_of_logw(x_hi)
    if not (g_lo > 0.0 > g_hi):
        raise NumericError(
            "LP01 bracket failed: no bound mode root in "
            f"w = [{np.exp(x_lo):.3e}, {np.exp(x_hi):.3e}] "
            f"(V = {v:.6g}, residuals {g_lo:.3e}, {g_hi:.3e})"
        )
    from scipy.optimize import brentq

    x_root = brentq(g_of_logw, x_lo, x_hi, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    w = np.exp(x_root)
    n_eff = float(np.sqrt(clad_index * clad_index + (w / k0a) ** 2))
    return n_eff


def lp01_eigenvalue_residual(
    core_index: float,
    clad_index: float,
    core_diameter_um: float,
    wavelength_um: float,
    n_eff: float,
) -> float:
    """Normalized residual of the LP01 eigenvalue condition at n_eff.

    Zero at a true mode; scaled by the larger of the two matched terms so
    the magnitude is comparable across V.
    """
    a = 0.5 * core_diameter_um
    k0a = 2.0 * np.pi / wavelength_um * a
    w = k0a * np.sqrt(max((n_eff - clad_index) * (n_eff + clad_index), 0.0))
    u = k0a * np.sqrt(max((core_index - n_eff) * (core_index + n_eff), 0.0))
    t1 = u * j1(u) * k0(w)
    t2 = w * k1(w) * j0(u)
    return float((t1 - t2) / max(abs(t1), abs(t2)))


# --------------------------------------------------------------------------
# Measured GVD samples


@dataclass(frozen=True)
class GvdSamples:
    """Measured dispersion parameter samples D(lambda).

    Wavelengths strictly increasing, in nm; D in ps/(nm km); optional
    one-sigma uncertainties used as inverse weights in fits.
    """

    wavelength_nm: tuple[float, ...]
    d_ps_nm_km: tuple[float, ...]
    sigma: tuple[float, ...] | None = None

    def __post_init__(self):
        lam = np.asarray(self.wavelength_nm, dtype=float)
        d = np.asarray(self.d_ps_nm_km, dtype=float)
        if lam.size != d.size or lam.size < 2:
            raise ValidationError("need >= 2 (wavelength, D) samples of equal length")
        if np.any(lam <= 0):
            raise ValidationError("wavelengths must be positive")
        if np.any(np.diff(lam) <= 0):
            raise ValidationError("wavelengths must be strictly increasing")
        if self.sigma is not None:
            sig = np.asarray(self.sigma, dtype=float)
            if sig.size != lam.size:
                raise ValidationError("sigma length must match samples")
            if np.any(sig <= 0):
                raise ValidationError("sigma values must be positive")
        object.__setattr__(self, "wavelength_nm", tuple(float(x) for x in lam))
        object.__setattr__(self, "d_ps_nm_km", tuple(float(x) for x in d))
        if self.sigma is not None:
            object.__setattr__(self, "sigma", tuple(float(x) for x in self.sigma))

    @classmethod
    def from_csv(cls, path) -> "GvdSamples":
        """Read `wavelength_nm,D_ps_nm_km[,sigma]` (UTF-8, '.' decimal)."""
        with open(path, "r", encoding="utf-8", newline="") as fh:
            return cls._parse(fh, name=str(path))

    @classmethod
    def from_csv_text(cls, text: str) -> "GvdSamples":
        return cls._parse(io.StringIO(text), name="<string>")

    @classmethod
    def _parse(cls, fh, name: str) -> "GvdSamples":
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{name}: empty GVD file") from None
        header = [h.strip() for h in header]
        if header[:2] != ["wavelength_nm", "D_ps_nm_km"]:
            raise ValidationError(
                f"{name}: expected header 'wavelength_nm,D_ps_nm_km[,sigma]', "
                f"got {','.join(header)!r}"
            )
        has_sigma = len(header) >= 3 and header[2] == "sigma"
        lam, d, sig = [], [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                lam.append(float(row[0]))
                d.append(float(row[1]))
                if has_sigma:
                    sig.append(float(row[2]))
            except (ValueError, IndexError) as exc:
                raise ValidationError(f"{name}: line {lineno}: bad row {row!r}") from exc
        return cls(
            wavelength_nm=tuple(lam),
            d_ps_nm_km=tuple(d),
            sigma=tuple(sig) if has_sigma else None,
        )

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            if self.sigma is not None:
                writer.writerow(["wavelength_nm", "D_ps_nm_km", "sigma"])
                for row in zip(self.wavelength_nm, self.d_ps_nm_km, self.sigma):
                    writer.writerow([repr(v) for v in row])
            else:
                writer.writerow(["wavelength_nm", "D_ps_nm_km"])
                for row in zip(self.wavelength_nm, self.d_ps_nm_km):
                    writer.writerow([repr(v) for v in row])


# --------------------------------------------------------------------------
# Polynomial dispersion model


@dataclass(frozen=True)
class DispersionModel:
    """D(lambda) polynomial plus the doubly integrated beta(omega).

    ``d_coeffs_um`` are coefficients of D in ps/(nm km) as a polynomial in
    wavelength in um (ascending powers).  ``beta`` integrates
    beta2(omega) = -D lambda^2 / (2 pi c) twice, term by term in closed
    form, in the gauge beta(omega_ref) = beta'(omega_ref) = 0.

    Evaluation outside [lambda_min_nm, lambda_max_nm] raises DomainError
    unless ``extrapolate=True`` is passed explicitly.
    """

    d_coeffs_um: tuple[float, ...]
    lambda_min_nm: float
    lambda_max_nm: float
    reference_nm: float = 1064.0
    source: str = "gvd_fit"
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lambda_min_nm <= 0 or self.lambda_max_nm <= self.lambda_min_nm:
            raise ValidationError("need 0 < lambda_min_nm < lambda_max_nm")
        if not self.lambda_min_nm <= self.reference_nm <= self.lambda_max_nm:
            raise ValidationError(
                f"gauge reference {self.reference_nm} nm outside fit domain "
                f"[{self.lambda_min_nm}, {self.lambda_max_nm}] nm"
            )
        if len(self.d_coeffs_um) < 1:
            raise ValidationError("at least one D coefficient required")

    # -- internal helpers ---------------------------------------------------

    def _si_power_coeffs(self) -> np.ndarray:
        """c_k of beta2(omega) = sum_k c_k omega^-(k+2), SI units."""
        b = np.asarray(self.d_coeffs_um, dtype=float)
        k = np.arange(b.size)
        d_si = b * 1e-6 * (1e6) ** k  # D in s/m^2 as poly in lambda_m
        return -d_si * TWO_PI_C ** (k + 1)

    def _omega_bounds(self) -> tuple[float, float]:
        return (
            TWO_PI_C / (self.lambda_max_nm * 1e-9),
            TWO_PI_C / (self.lambda_min_nm * 1e-9),
        )

    def _check_domain(self, omega, extrapolate: bool):
        if extrapolate:
            return
        w_lo, w_hi = self._omega_bounds()
        if np.any(omega < w_lo) or np.any(omega > w_hi):
            lam = TWO_PI_C / np.asarray(omega, dtype=float) * 1e9
            raise DomainError(
                "frequency outside fit domain "
                f"[{self.lambda_min_nm:.6g}, {self.lambda_max_nm:.6g}] nm "
                f"(requested {np.min(lam):.6g}-{np.max(lam):.6g} nm); "
                "pass extrapolate=True to override"
            )

    # -- evaluation ---------------------------------------------------------

    def beta(self, omega, extrapolate: bool = False):
        """Propagation constant offset (1/m) at angular frequency (rad/s)."""
        w = np.asarray(omega, dtype=float)
        self._check_domain(w, extrapolate)
        wr = TWO_PI_C / (self.reference_nm * 1e-9)
        ck = self._si_power_coeffs()
        out = np.zeros_like(w)
        # k = 0 term integrates to a logarithm; k >= 1 stay power laws.
        out += ck[0] * (w * (1.0 / wr - 1.0 / w) - np.log(w / wr))
        for k in range(1, ck.size):
            ik = w * (wr ** -(k + 1) - w ** -(k + 1)) / (k + 1) + (
                w ** -k - wr ** -k
            ) / k
            out += ck[k] * ik
        return float(out) if np.isscalar(omega) else out

    def beta1(self, omega, extrapolate: bool = False):
        """First frequency derivative of beta (s/m), gauge-shifted to 0 at ref."""
        w = np.asarray(omega, dtype=float)
        self._check_domain(w, extrapolate)
        wr = TWO_PI_C / (self.reference_nm * 1e-9)
        ck = self._si_power_coeffs()
        out = np.zeros_like(w)
        for k in range(ck.size):
            out += ck[k] * (wr ** -(k + 1) - w ** -(k + 1)) / (k + 1)
        return float(out) if np.isscalar(omega) else out

    def beta2(self, omega, extrapolate: bool = False):
        """Group-velocity dispersion (s^2/m) at angular frequency (rad/s)."""
        w = np.asarray(omega, dtype=float)
        self._check_domain(w, extrapolate)
        ck = self._si_power_coeffs()
        out = np.zeros_like(w)
        for k in range(ck.size):
            out += ck[k] * w ** -(k + 2)
        return float(out) if np.isscalar(omega) else out

    def d_parameter(self, wavelength_nm, extrapolate: bool = False):
        """Dispersion parameter D (ps/(nm km)) at wavelength (nm)."""
        lam = np.asarray(wavelength_nm, dtype=float)
        if not extrapolate and (
            np.any(lam < self.lambda_min_nm) or np.any(lam > self.lambda_max_nm)
        ):
            raise DomainError(
                f"wavelength outside fit domain "
                f"[{self.lambda_min_nm:.6g}, {self.lambda_max_nm:.6g}] nm; "
                "pass extrapolate=True to override"
            )
        val = npoly.polyval(lam * 1e-3, np.asarray(self.d_coeffs_um))
        return float(val) if np.isscalar(wavelength_nm) else val

    def zero_dispersion_nm(self) -> tuple[float, ...]:
        """Real roots of D(lambda) inside the fit domain, sorted, in nm."""
        roots = npoly.polyroots(np.asarray(self.d_coeffs_um, dtype=float))
        real = roots[np.abs(roots.imag) < 1e-9].real * 1e3
        inside = real[(real >= self.lambda_min_nm) & (real <= self.lambda_max_nm)]
        return tuple(float(x) for x in np.sort(inside))

    # -- serialization --------------------------------------------------------

    def to_json(self, path=None) -> str:
        payload = {
            "model": "dispersion",
            "d_coeffs_um": list(self.d_coeffs_um),
            "lambda_min_nm": self.lambda_min_nm,
            "lambda_max_nm": self.lambda_max_nm,
            "reference_nm": self.reference_nm,
            "source": self.source,
            "metadata": self.metadata,
        }
        text = json.dumps(payload, indent=2, sort_keys=True)
        if path is not None:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        return text

    @classmethod
    def from_json(cls, path=None, text=None) -> "DispersionModel":
        if text is None:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed dispersion model JSON: {exc}") from exc
        try:
            return cls(
                d_coeffs_um=tuple(payload["d_coeffs_um"]),
                lambda_min_nm=float(payload["lambda_min_nm"]),
                lambda_max_nm=float(payload["lambda_max_nm"]),
                reference_nm=float(payload["reference_nm"]),
                source=str(payload.get("source", "gvd_fit")),
                metadata=dict(payload.get("metadata", {})),
            )
        except KeyError as exc:
            raise ValidationError(f"dispersion model JSON missing key {exc}") from exc


def fit_gvd(
    samples: GvdSamples,
    degree: int = 3,
    reference_nm: float = 1064.0,
) -> DispersionModel:
    """Least-squares polynomial fit of D(lambda) to measured samples.

    The fit runs in a shifted/scaled wavelength coordinate for
    conditioning and the coefficients are expanded back to raw powers of
    wavelength in um.  Deterministic: same samples and degree give
    bit-identical coefficients.
    """
    if degree < 2:
        raise ValidationError(f"fit degree must be >= 2, got {degree}")
    lam_um = np.asarray(samples.wavelength_nm, dtype=float) * 1e-3
    d_vals = np.asarray(samples.d_ps_nm_km, dtype=float)
    if lam_um.size <= degree:
        raise ValidationError(
            f"need more samples than fit degree: {lam_um.size} samples, degree {degree}"
        )
    center = 0.5 * (lam_um[0] + lam_um[-1])
    half = 0.5 * (lam_um[-1] - lam_um[0])
    t = (lam_um - center) / half
    vand = np.vander(t, degree + 1, increasing=True)
    rhs = d_vals
    if samples.sigma is not None:
        wts = 1.0 / np.asarray(samples.sigma, dtype=float)
        vand = vand * wts[:, None]
        rhs = d_vals * wts
    coef_t, _, rank, _ = np.linalg.lstsq(vand, rhs, rcond=None)
    if rank < degree + 1:
        raise FitError(
            f"rank-deficient design matrix (rank {rank} < {degree + 1}); "
            "samples do not constrain the requested degree"
        )
    # Expand sum_k p_k ((lam - center)/half)^k into raw powers of lam_um.
    shift = np.array([-center / half, 1.0 / half])
    coeffs = np.zeros(1)
    basis = np.ones(1)
    for p in coef_t:
        coeffs = npoly.polyadd(coeffs, p * basis)
        basis = npoly.polymul(basis, shift)
    coeffs = np.concatenate([coeffs, np.zeros(degree + 1 - coeffs.size)])
    model = DispersionModel(
        d_coeffs_um=tuple(float(x) for x in coeffs),
        lambda_min_nm=float(samples.wavelength_nm[0]),
        lambda_max_nm=float(samples.wavelength_nm[-1]),
        reference_nm=reference_nm,
        source="gvd_fit",
    )
    resid = model.d_parameter(np.asarray(samples.wavelength_nm)) - d_vals
    model.metadata.update(
        {
            "degree": degree,
            "n_samples": int(lam_um.size),
            "residuals_ps_nm_km": [float(r) for r in resid],
            "rms_residual_ps_nm_km": float(np.sqrt(np.mean(resid * resid))),
        }
    )
    return model


# --------------------------------------------------------------------------
# Step-index proxy for the designed fiber

# Effective cladding depression below fused silica, modeled as a power law
# in wavelength: depression(lam) = depth * (lam_um / 1.064)**exponent.  The
# mode of a holey cladding spreads into the air holes as wavelength grows,
# so the effective index falls faster than bulk silica (exponent > 0).
# Depth and exponent are the proxy's two free knobs, calibrated so the
# simulated design is slightly normal at 1064 nm while phase-matching the
# 800/1550 nm sideband pair; they are not material constants.
DEFAULT_CLAD_DEPRESSION = 0.03260534682851112
DEFAULT_CLAD_EXPONENT = 1.2512909926221185
_DEPRESSION_ANCHOR_UM = 1.064

_FD_STEP_UM = 2e-3  # five-point stencil step for d2 n_eff / d lambda^2


def effective_cladding_index(
    wavelength_um: float,
    clad_depression: float = DEFAULT_CLAD_DEPRESSION,
    clad_exponent: float = DEFAULT_CLAD_EXPONENT,
) -> float:
    """Effective index of the holey cladding at a wavelength in um."""
    if clad_depression <= 0:
        raise ValidationError("clad_depression must be positive")
    silica = MaterialModel.fused_silica()
    dep = clad_depression * (wavelength_um / _DEPRESSION_ANCHOR_UM) ** clad_exponent
    return silica.index(wavelength_um) - dep


def step_index_gvd(
    wavelength_nm,
    design: PcfDesign | None = None,
    core_material: MaterialModel | None = None,
    clad_depression: float = DEFAULT_CLAD_DEPRESSION,
    clad_exponent: float = DEFAULT_CLAD_EXPONENT,
) -> np.ndarray:
    """Dispersion parameter D (ps/(nm km)) of the LP01 proxy waveguide.

    Core: doped rod of the design's doped-core diameter with the doped
    Sellmeier index; cladding: the power-law effective index above.  The
    second wavelength derivative of n_eff uses a five-point stencil.
    """
    if design is None:
        design = PcfDesign()
    if core_material is None:
        core_material = MaterialModel.ge_doped_silica(0.175)
    lam_um = np.atleast_1d(np.asarray(wavelength_nm, dtype=float)) * 1e-3
    h = _FD_STEP_UM

    def n_eff(lam):
        return lp01_effective_index(
            core_material.index(lam),
            effective_cladding_index(lam, clad_depression, clad_exponent),
            design.doped_core_diameter_um,
            lam,
        )

    d_out = np.empty(lam_um.size)
    for i, lam in enumerate(lam_um):
        stencil = [n_eff(lam + m * h) for m in (-2, -1, 0, 1, 2)]
        d2 = (
            -stencil[0] + 16.0 * stencil[1] - 30.0 * stencil[2]
            + 16.0 * stencil[3] - stencil[4]
        ) / (12.0 * h * h)
        # D = -(lambda / c) d2n/dlambda2; stencil is per um^2, lambda in um.
        d_si = -(lam * 1e-6) / C_M_PER_S * (d2 * 1e12)
        d_out[i] = d_si * 1e6  # -> ps/(nm km)
    return d_out if np.ndim(wavelength_nm) else float(d_out[0])


def from_step_index_proxy(
    design: PcfDesign | None = None,
    core_material: MaterialModel | None = None,
    clad_depression: float = DEFAULT_CLAD_DEPRESSION,
    clad_exponent: float = DEFAULT_CLAD_EXPONENT,
    wavelength_window_nm: tuple[float, float] = (760.0, 1620.0),
    n_samples: int = 120,
    degree: int = 8,
    reference_nm: float = 1064.0,
) -> DispersionModel:
    """Polynomial dispersion model sampled from the step-index proxy."""
    lam = np.linspace(wavelength_window_nm[0], wavelength_window_nm[1], n_samples)
    d_vals = step_index_gvd(
        lam,
        design=design,
        core_material=core_material,
        clad_depression=clad_depression,
        clad_exponent=clad_exponent,
    )
    samples = GvdSamples(
        wavelength_nm=tuple(float(x) for x in lam),
        d_ps_nm_km=tuple(float(x) for x in d_vals),
    )
    model = fit_gvd(samples, degree=degree, reference_nm=reference_nm)
    design = design if design is not None else PcfDesign()
    material = (
        core_material if core_material is not None
        else MaterialModel.ge_doped_silica(0.175)
    )
    meta = dict(model.metadata)
    meta.update(
        {
            "pitch_um": design.pitch_um,
            "hole_diameter_ratio": design.hole_diameter_ratio,
            "doped_core_diameter_um": design.doped_core_diameter_um,
            "ge_molar_fraction": material.ge_molar_fraction,
            "clad_depression": clad_depression,
            "clad_exponent": clad_exponent,
        }
    )
    return DispersionModel(
        d_coeffs_um=model.d_coeffs_um,
        lambda_min_nm=model.lambda_min_nm,
        lambda_max_nm=model.lambda_max_nm,
        reference_nm=model.reference_nm,
        source="step_index_proxy",
        metadata=meta,
    )
