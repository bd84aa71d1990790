"""Heralded coincidence counting.

Monte Carlo simulation of a pulsed pair source with lossy detectors and
dark counts, the matching closed-form click model, correlation-histogram
analysis (coincidence-to-accidentals ratio, CAR), and pump-power sweeps.

Per pulse slot the pair number follows the configured statistics with
mean mu; each pair is thinned independently by the detector efficiencies
and dark clicks add on top.  The slot's four click outcomes (none,
signal-only, idler-only, both) therefore have exact closed-form
probabilities, and the simulation draws the outcome directly from them:
one uniform per slot, which makes 1e8-slot runs tractable and keeps the
Monte Carlo exactly faithful to the stated mechanism.  Random streams are
counter-based (Philox, one 256-bit counter block per slot), so results
are bit-identical no matter how the slot range is partitioned into
blocks.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from importlib import resources

import numpy as np
from numpy.random import Generator, Philox

from .errors import ValidationError

_STATISTICS = ("poisson", "thermal")
_BLOCK_SLOTS = 1 << 20


@dataclass(frozen=True)
class CountingConfig:
    """Source, detector, and histogram parameters for counting runs."""

    rep_rate_hz: float = 1e7
    mean_pairs_per_pulse: float = 0.0
    pair_rate_per_mw2: float = 1e-3
    eta_signal: float = 0.5
    eta_idler: float = 0.1
    dark_signal_per_slot: float = 0.0
    dark_idler_per_slot: float = 0.0
    jitter_ns: float = 0.3
    bin_width_ns: float = 2.5
    statistics: str = "poisson"
    dead_time_ns: float = 0.0

    def __post_init__(self):
        if self.rep_rate_hz <= 0:
            raise ValidationError(f"repetition rate must be > 0, got {self.rep_rate_hz}")
        if self.mean_pairs_per_pulse < 0:
            raise ValidationError(f"mean pairs must be >= 0, got {self.mean_pairs_per_pulse}")
        if self.pair_rate_per_mw2 < 0:
            raise ValidationError(f"pair-rate calibration must be >= 0")
        for name in ("eta_signal", "eta_idler"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {v}")
        for name in ("dark_signal_per_slot", "dark_idler_per_slot"):
            v = getattr(self, name)
            if not 0.0 <= v < 1.0:
                raise ValidationError(f"{name} must lie in [0, 1), got {v}")
        if self.jitter_ns < 0:
            raise ValidationError(f"jitter must be >= 0, got {self.jitter_ns}")
        if self.bin_width_ns <= 0:
            raise ValidationError(f"bin width must be > 0, got {self.bin_width_ns}")
        if self.statistics not in _STATISTICS:
            raise ValidationError(
                f"statistics must be one of {_STATISTICS}, got {self.statistics!r}"
            )
        if self.dead_time_ns < 0:
            raise ValidationError(f"dead time must be >= 0, got {self.dead_time_ns}")

    @property
    def pulse_period_ns(self) -> float:
        return 1e9 / self.rep_rate_hz

    def with_mean_pairs(self, mu: float) -> "CountingConfig":
        return replace(self, mean_pairs_per_pulse=mu)

    def at_power_mw(self, power_mw: float) -> "CountingConfig":
        """Config at a pump power: mu = k * P^2."""
        if power_mw < 0:
            raise ValidationError(f"power must be >= 0, got {power_mw}")
        return self.with_mean_pairs(self.pair_rate_per_mw2 * power_mw * power_mw)

    def to_json(self, path=None) -> str:
        payload = {k: getattr(self, k) for k in self.__dataclass_fields__}
        text = json.dumps(payload, indent=2, sort_keys=True)
        if path is not None:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        return text

    @classmethod
    def from_dict(cls, payload: dict) -> "CountingConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(payload) - known
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**payload)

    @classmethod
    def from_json(cls, path=None, text=None) -> "CountingConfig":
        if text is None:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed config JSON: {exc}") from exc
        if "config" in payload and isinstance(payload["config"], dict):
            payload = payload["config"]
        return cls.from_dict(payload)


def load_preset(name_or_path: str) -> tuple[CountingConfig, dict]:
    """Load a counting preset by bare name (packaged) or file path.

    Returns the config plus the full preset payload (sweep powers, notes).
    """
    text = None
    if "/" not in name_or_path and not name_or_path.endswith(".json"):
        candidate = resources.files("gepcf").joinpath(f"data/{name_or_path}.json")
        try:
            text = candidate.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise ValidationError(f"no packaged preset named {name_or_path!r}")
    else:
        try:
            with open(name_or_path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except FileNotFoundError:
            raise ValidationError(f"preset file not found: {name_or_path}")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed preset JSON: {exc}") from exc
    config = CountingConfig.from_dict(payload.get("config", payload))
    return config, payload


def _click_probabilities(cfg: CountingConfig) -> tuple[float, float, float, float]:
    """(p_signal, p_idler, p_both, p_neither) per pulse slot.

    Built from the no-click generating function of the pair statistics:
    each of the N pairs registers on neither detector with probability
    (1-eta_s)(1-eta_i), on the signal side with 1-eta_s, etc.; dark counts
    multiply the no-click terms.
    """
    mu = cfg.mean_pairs_per_pulse
    es, ei = cfg.eta_signal, cfg.eta_idler
    joint_miss = es + ei - es * ei
    if cfg.statistics == "poisson":
        no_pair_s = math.exp(-mu * es)
        no_pair_i = math.exp(-mu * ei)
        no_pair_both = math.exp(-mu * joint_miss)
    else:  # thermal: E[x^N] = 1 / (1 + mu (1 - x))
        no_pair_s = 1.0 / (1.0 + mu * es)
        no_pair_i = 1.0 / (1.0 + mu * ei)
        no_pair_both = 1.0 / (1.0 + mu * joint_miss)
    p_no_s = no_pair_s * (1.0 - cfg.dark_signal_per_slot)
    p_no_i = no_pair_i * (1.0 - cfg.dark_idler_per_slot)
    p_nn = no_pair_both * (1.0 - cfg.dark_signal_per_slot) * (1.0 - cfg.dark_idler_per_slot)
    p_s = 1.0 - p_no_s
    p_i = 1.0 - p_no_i
    p_both = 1.0 - p_no_s - p_no_i + p_nn
    return p_s, p_i, p_both, p_nn


@dataclass(frozen=True)
class AnalyticRates:
    """Closed-form per-second rates of the click model."""

    singles_signal_per_s: float
    singles_idler_per_s: float
    coincidences_per_s: float
    accidentals_per_s: float
    car: float


def analytic_rates(cfg: CountingConfig) -> AnalyticRates:
    """Exact rates of the click model; oracle for the Monte Carlo.

    Coincidences are the zero-delay (same-slot) pair rate; accidentals
    are the independent-slot product p_s * p_i, i.e. the side-peak level.
    """
    p_s, p_i, p_both, _ = _click_probabilities(cfg)
    r = cfg.rep_rate_hz
    acc = p_s * p_i * r
    coin = p_both * r
    car = math.inf if acc == 0.0 else (coin - acc) / acc
    return AnalyticRates(
        singles_signal_per_s=p_s * r,
        singles_idler_per_s=p_i * r,
        coincidences_per_s=coin,
        accidentals_per_s=acc,
        car=car,
    )


@dataclass(frozen=True)
class CoincidenceHistogram:
    """Cross-detector delay histogram with the central bin at zero."""

    bin_edges_ns: np.ndarray
    counts: np.ndarray
    acquisition_s: float
    total_pulses: int
    pulse_period_ns: float
    singles_signal: int = 0
    singles_idler: int = 0

    def __post_init__(self):
        edges = np.ascontiguousarray(np.asarray(self.bin_edges_ns, dtype=float))
        counts = np.ascontiguousarray(np.asarray(self.counts, dtype=np.int64))
        if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise ValidationError("bin edges must be increasing with >= 2 entries")
        if counts.shape != (edges.size - 1,):
            raise ValidationError("counts length must be number of bins")
        if np.any(counts < 0):
            raise ValidationError("counts must be nonnegative")
        edges.flags.writeable = False
        counts.flags.writeable = False
        object.__setattr__(self, "bin_edges_ns", edges)
        object.__setattr__(self, "counts", counts)

    @property
    def bin_centers_ns(self) -> np.ndarray:
        return 0.5 * (self.bin_edges_ns[:-1] + self.bin_edges_ns[1:])

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("bin_center_ns,counts\n")
            for c, n in zip(self.bin_centers_ns, self.counts):
                fh.write(f"{c:.9g},{int(n)}\n")


def _prune_dead_time(times_ns: np.ndarray, dead_ns: float) -> np.ndarray:
    """Drop clicks arriving within the dead time of the last kept click."""
    order = np.argsort(times_ns, kind="stable")
    t = times_ns[order]
    keep = np.ones(t.size, dtype=bool)
    last = -math.inf
    for k in range(t.size):
        if t[k] - last < dead_ns:
            keep[k] = False
        else:
            last = t[k]
    kept = np.zeros(times_ns.size, dtype=bool)
    kept[order[keep]] = True
    return kept


def simulate_pulses(
    config: CountingConfig,
    n_pulses: int,
    rng_seed: int,
    stream: int = 0,
    window_periods: int = 5,
) -> CoincidenceHistogram:
    """Monte Carlo correlation histogram over n_pulses slots.

    Records every cross-detector time difference within +-(window_periods
    * pulse period).  Deterministic for a fixed (seed, stream) and
    independent of internal block partitioning.
    """
    if n_pulses < 1:
        raise ValidationError(f"n_pulses must be >= 1, got {n_pulses}")
    if window_periods < 1:
        raise ValidationError(f"window_periods must be >= 1, got {window_periods}")
    n_pulses = int(n_pulses)
    p_s, p_i, p_both, p_nn = _click_probabilities(config)
    # Category thresholds on one uniform: [0,c0) none, [c0,c1) signal only,
    # [c1,c2) idler only, [c2,1) both.
    c0 = p_nn
    c1 = c0 + (1.0 - p_i) - p_nn          # p(signal, no idler)
    c2 = c1 + (1.0 - p_s) - p_nn          # + p(idler, no signal)
    period = config.pulse_period_ns
    sigma = config.jitter_ns

    slots_s, jit_s, slots_i, jit_i = [], [], [], []
    for start in range(0, n_pulses, _BLOCK_SLOTS):
        n_blk = min(_BLOCK_SLOTS, n_pulses - start)
        bitgen = Philox(key=(int(rng_seed) & (2**64 - 1), int(stream) & (2**64 - 1)))
        bitgen.advance(start)
        u = Generator(bitgen).random(4 * n_blk).reshape(n_blk, 4)
        cat = u[:, 0]
        active = np.flatnonzero(cat >= c0)
        if active.size == 0:
            continue
        v = cat[active]
        s_mask = (v < c1) | (v >= c2)
        i_mask = v >= c1
        # Box-Muller on the slot's two dedicated uniforms: cos branch for
        # the signal click, sin branch for the idler click (independent).
        radius = np.sqrt(-2.0 * np.log(1.0 - u[active, 1]))
        angle = 2.0 * np.pi * u[active, 2]
        s_idx = active[s_mask]
        i_idx = active[i_mask]
        slots_s.append(start + s_idx.astype(np.int64))
        jit_s.append(sigma * (radius[s_mask] * np.cos(angle[s_mask])))
        slots_i.append(start + i_idx.astype(np.int64))
        jit_i.append(sigma * (radius[i_mask] * np.sin(angle[i_mask])))

    def _concat(parts, dtype):
        return np.concatenate(parts) if parts else np.empty(0, dtype=dtype)

    slot_s = _concat(slots_s, np.int64)
    slot_i = _concat(slots_i, np.int64)
    t_s = slot_s * period + _concat(jit_s, float)
    t_i = slot_i * period + _concat(jit_i, float)

    if config.dead_time_ns > 0.0:
        keep_s = _prune_dead_time(t_s, config.dead_time_ns)
        keep_i = _prune_dead_time(t_i, config.dead_time_ns)
        slot_s, t_s = slot_s[keep_s], t_s[keep_s]
        slot_i, t_i = slot_i[keep_i], t_i[keep_i]

    diffs = []
    if slot_s.size and slot_i.size:
        for m in range(-window_periods, window_periods + 1):
            pos = np.searchsorted(slot_i, slot_s + m)
            pos = np.clip(pos, 0, slot_i.size - 1)
            hit = slot_i[pos] == slot_s + m
            diffs.append(t_i[pos[hit]] - t_s[hit])
    delays = np.concatenate(diffs) if diffs else np.empty(0)

    n_half = int(round(window_periods * period / config.bin_width_ns))
    edges = (np.arange(-n_half, n_half + 2) - 0.5) * config.bin_width_ns
    counts, _ = np.histogram(delays, bins=edges)
    return CoincidenceHistogram(
        bin_edges_ns=edges,
        counts=counts.astype(np.int64),
        acquisition_s=n_pulses / config.rep_rate_hz,
        total_pulses=n_pulses,
        pulse_period_ns=period,
        singles_signal=int(slot_s.size),
        singles_idler=int(slot_i.size),
    )


@dataclass(frozen=True)
class CarResult:
    """Coincidence-to-accidentals ratio extracted from a histogram."""

    n_c_per_s: float
    n_a_per_s: float
    car: float
    car_sigma: float
    is_lower_bound: bool
    n_side_windows: int

    def __post_init__(self):
        if self.n_a_per_s < 0:
            raise ValidationError("accidental rate cannot be negative")


def car_from_histogram(
    hist: CoincidenceHistogram, peak_halfwidth_ns: float = 5.0
) -> CarResult:
    """CAR = (N_C - N_A) / N_A from peak integrals.

    N_C integrates the zero-delay peak; N_A is the mean of all complete
    off-zero peak windows at multiples of the pulse period.  Uncertainty
    is first-order Poisson propagation.  With no accidental counts at all
    the result is flagged as a lower bound (one substitute count spread
    over the side windows).
    """
    if peak_halfwidth_ns <= 0:
        raise ValidationError(f"peak halfwidth must be > 0, got {peak_halfwidth_ns}")
    period = hist.pulse_period_ns
    centers = hist.bin_centers_ns
    lo, hi = hist.bin_edges_ns[0], hist.bin_edges_ns[-1]
    m_max = int(math.floor((hi - peak_halfwidth_ns) / period))
    side_ms = [m for m in range(-m_max, m_max + 1)
               if m != 0 and lo <= m * period - peak_halfwidth_ns
               and m * period + peak_halfwidth_ns <= hi]
    if len(side_ms) < 6:
        raise ValidationError(
            "histogram must cover >= 3 complete side peaks on each side"
        )

    def window_counts(center_ns: float) -> int:
        mask = np.abs(centers - center_ns) <= peak_halfwidth_ns + 1e-9
        return int(hist.counts[mask].sum())

    central = window_counts(0.0)
    side_total = sum(window_counts(m * period) for m in side_ms)
    n_windows = len(side_ms)
    t = hist.acquisition_s
    if side_total == 0:
        mean_side = 1.0 / n_windows
        car = central * n_windows - 1.0
        sigma = math.nan
        lower = True
    else:
        mean_side = side_total / n_windows
        car = (central - mean_side) / mean_side
        # var(C) = C, var(S) = S; CAR + 1 = C n / S.
        sigma = (
            (central * n_windows / side_total)
            * math.sqrt(1.0 / max(central, 1) + 1.0 / side_total)
        )
        lower = False
    return CarResult(
        n_c_per_s=central / t,
        n_a_per_s=mean_side / t,
        car=car,
        car_sigma=sigma,
        is_lower_bound=lower,
        n_side_windows=n_windows,
    )


@dataclass(frozen=True)
class SweepPoint:
    power_mw: float
    mean_pairs_per_pulse: float
    cc_per_s: float
    car: float
    car_sigma: float
    is_lower_bound: bool = False
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    points: tuple[SweepPoint, ...]

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("power_mw,cc_per_s,car,car_sigma\n")
            for p in self.points:
                if p.error is not None:
                    continue
                fh.write(f"{p.power_mw:.9g},{p.cc_per_s:.9g},{p.car:.9g},"
                         f"{p.car_sigma:.9g}\n")


def sweep_power(
    config: CountingConfig,
    powers_mw,
    n_pulses: int,
    rng_seed: int,
    peak_halfwidth_ns: float = 5.0,
    window_periods: int = 5,
) -> SweepResult:
    """Simulate and analyze one histogram per pump power (mu = k P^2).

    Points get independent random streams keyed by their index; per-point
    failures are recorded and the sweep continues.  Output sorted by
    power.
    """
    powers = sorted(float(p) for p in powers_mw)
    if not powers:
        raise ValidationError("need at least one power")
    if any(p <= 0 for p in powers):
        raise ValidationError("powers must be > 0 mW")
    points = []
    for idx, p_mw in enumerate(powers):
        cfg = config.at_power_mw(p_mw)
        try:
            hist = simulate_pulses(
                cfg, n_pulses, rng_seed, stream=idx, window_periods=window_periods
            )
            res = car_from_histogram(hist, peak_halfwidth_ns)
            points.append(SweepPoint(
                power_mw=p_mw,
                mean_pairs_per_pulse=cfg.mean_pairs_per_pulse,
                cc_per_s=res.n_c_per_s,
                car=res.car,
                car_sigma=res.car_sigma,
                is_lower_bound=res.is_lower_bound,
            ))
        except Exception as exc:  # per-point isolation by contract
            points.append(SweepPoint(
                power_mw=p_mw,
                mean_pairs_per_pulse=cfg.mean_pairs_per_pulse,
                cc_per_s=math.nan,
                car=math.nan,
                car_sigma=math.nan,
                error=f"{type(exc).__name__}: {exc}",
            ))
    return SweepResult(points=tuple(points))
