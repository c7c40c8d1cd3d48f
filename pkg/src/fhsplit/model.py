"""Domain types, reference presets and bundle validation.

Everything here is an immutable dataclass. Construction never raises for
out-of-range values; :func:`validate` inspects a whole :class:`Bundle` and
reports every violation at once.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

__all__ = [
    "Band",
    "Service",
    "SplitOption",
    "ScenarioConfig",
    "RadioConfig",
    "ServiceProfile",
    "QuantizationConfig",
    "LoadModel",
    "McsTable",
    "Bundle",
    "RateTable",
    "Violation",
    "InvariantViolation",
    "REFERENCE_MODULATION",
    "reference_modulation_for",
    "preset_scenarios",
    "preset_bundles",
    "get_preset",
    "validate",
]


class Band(str, Enum):
    S = "S"
    KA = "Ka"


class Service(str, Enum):
    EMBB = "eMBB"
    MMTC = "mMTC"


class SplitOption(Enum):
    """Functional split options, ordered by how much processing sits onboard."""

    OPT8 = "Opt8"
    OPT7_1 = "Opt7_1"
    OPT7_2 = "Opt7_2"
    OPT7_3 = "Opt7_3"
    OPT6 = "Opt6"
    OPT2 = "Opt2"

    @property
    def rank(self) -> int:
        return _SPLIT_ORDER.index(self)

    @property
    def label(self) -> str:
        """Human label, e.g. ``"7.1"``."""
        return self.value[3:].replace("_", ".")

    def __lt__(self, other):
        if not isinstance(other, SplitOption):
            return NotImplemented
        return self.rank < other.rank

    def __le__(self, other):
        if not isinstance(other, SplitOption):
            return NotImplemented
        return self.rank <= other.rank

    def __gt__(self, other):
        if not isinstance(other, SplitOption):
            return NotImplemented
        return self.rank > other.rank

    def __ge__(self, other):
        if not isinstance(other, SplitOption):
            return NotImplemented
        return self.rank >= other.rank

    @classmethod
    def parse(cls, text: str) -> "SplitOption":
        """Accept ``Opt7_1``, ``Opt7.1``, ``7.1`` or ``7_1`` (case-insensitive prefix)."""
        if isinstance(text, cls):
            return text
        key = text.strip()
        if key.lower().startswith("opt"):
            key = key[3:]
        key = key.replace(".", "_")
        for opt in cls:
            if opt.value[3:] == key:
                return opt
        raise ValueError(f"unknown split option {text!r}")


_SPLIT_ORDER = list(SplitOption)

# M -> M_ref
REFERENCE_MODULATION = {2: 2, 4: 2, 16: 4, 64: 16, 256: 64}


def reference_modulation_for(modulation_order: int) -> int:
    if not _is_int(modulation_order) or modulation_order not in REFERENCE_MODULATION:
        raise ValueError(
            f"modulation order {modulation_order!r} not in {sorted(REFERENCE_MODULATION)}"
        )
    return REFERENCE_MODULATION[modulation_order]


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    altitude_km: float
    num_cells: int
    beams_per_cell: int = 1
    antenna_elements_per_beam: int = 2
    total_antennas: int = field(init=False)

    def __post_init__(self):
        try:
            total = self.num_cells * self.beams_per_cell * self.antenna_elements_per_beam
        except TypeError:
            total = 0
        object.__setattr__(self, "total_antennas", total)


@dataclass(frozen=True)
class RadioConfig:
    band: Band
    bandwidth_hz: float
    beam_radius_km: float
    oversampling: float = 1.0
    numerology: int = 0
    cp_duration_s: float = 4.688e-6
    subframe_duration_s: float = 1e-3
    symbols_per_subframe: int = 14
    subcarriers_per_rb: int = 12
    data_res_per_rb: int = 110


@dataclass(frozen=True)
class ServiceProfile:
    service: Service
    ue_density_per_km2: float
    reference_peak_rate_bps: float
    reference_bandwidth_hz: float
    modulation_order: int
    code_rate: float
    num_layers: int = 8
    reference_layers: int = 1
    # None -> filled from REFERENCE_MODULATION when the modulation order is known
    reference_modulation: Optional[int] = None
    ul_fraction: float = 1.0
    ul_content_size_bytes: float = 30.0

    def __post_init__(self):
        if self.reference_modulation is None and self.modulation_order in REFERENCE_MODULATION:
            object.__setattr__(
                self, "reference_modulation", REFERENCE_MODULATION[self.modulation_order]
            )


@dataclass(frozen=True)
class QuantizationConfig:
    q_time_bits: int = 16
    q_freq_bits: int = 10
    q_llr_bits: int = 3


@dataclass(frozen=True)
class LoadModel:
    utilization: float = 0.6
    signaling_time_base_s: float = 1e-3


@dataclass(frozen=True)
class McsTable:
    """Ordered (modulation order, code rate) pairs."""

    pairs: tuple[tuple[int, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((m, rc) for m, rc in self.pairs))

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def problems(self) -> list[str]:
        out = []
        if not self.pairs:
            out.append("MCS table is empty")
        prev = None
        for i, (m, rc) in enumerate(self.pairs):
            if not _is_int(m) or m not in REFERENCE_MODULATION:
                out.append(f"[{i}] modulation order {m!r} not in {sorted(REFERENCE_MODULATION)}")
            if not _is_real(rc) or not 0 < rc <= 1:
                out.append(f"[{i}] code rate {rc!r} outside (0, 1]")
            if prev is not None and _is_int(m) and _is_int(prev) and m <= prev:
                out.append(f"[{i}] modulation orders must be strictly increasing")
            prev = m
        return out


@dataclass(frozen=True)
class Bundle:
    """A full configuration: everything one rate table depends on."""

    scenario: ScenarioConfig
    radio: RadioConfig
    service: ServiceProfile
    quantization: QuantizationConfig = QuantizationConfig()
    load: LoadModel = LoadModel()
    per_user_scaling: bool = True
    # Allow reference_modulation to disagree with REFERENCE_MODULATION.
    custom_reference_modulation: bool = False
    mcs_table: Optional[McsTable] = None

    @property
    def name(self) -> str:
        return f"{self.scenario.name}-{self.radio.band.value}-{self.service.service.value}"

    def with_mcs(self, modulation_order: int, code_rate: float) -> "Bundle":
        """Copy with a new (M, R_c) pair and M_ref re-derived from the lookup rule."""
        service = replace(
            self.service,
            modulation_order=modulation_order,
            code_rate=code_rate,
            reference_modulation=reference_modulation_for(modulation_order),
        )
        return replace(self, service=service)


@dataclass(frozen=True)
class RateTable:
    """Fronthaul rate per split option for one bundle, in bit/s."""

    scenario_name: str
    entries: dict
    reductions_vs: dict = field(default_factory=dict)
    band: Optional[str] = None
    service: Optional[str] = None
    breakdown: object = field(default=None, compare=False, repr=False)

    @property
    def label(self) -> str:
        parts = [self.scenario_name, self.band, self.service]
        return "-".join(p for p in parts if p)

    def rate(self, option) -> float:
        """Rate for ``option``; accepts a SplitOption or any spelling ``parse`` knows."""
        return self.entries[SplitOption.parse(option)]

    def reduction(self, target, reference=SplitOption.OPT8):
        return self.reductions_vs.get((SplitOption.parse(reference), SplitOption.parse(target)))


# --- validation -----------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def __str__(self):
        return f"{self.path}: {self.message}"


class InvariantViolation(ValueError):
    """Raised by :func:`validate`; carries every violation found."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("\n".join(str(v) for v in self.violations))


def _is_real(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


class _Checker:
    def __init__(self):
        self.violations: list[Violation] = []

    def add(self, path, message):
        self.violations.append(Violation(path, message))

    def real(self, path, x, *, low=None, low_open=False, high=None):
        if not _is_real(x):
            self.add(path, f"must be a finite real number, got {x!r}")
            return False
        if low is not None and (x <= low if low_open else x < low):
            self.add(path, f"must be {'>' if low_open else '>='} {low}, got {x!r}")
            return False
        if high is not None and x > high:
            self.add(path, f"must be <= {high}, got {x!r}")
            return False
        return True

    def integer(self, path, x, *, low=None):
        if not _is_int(x):
            self.add(path, f"must be an integer, got {x!r}")
            return False
        if low is not None and x < low:
            self.add(path, f"must be >= {low}, got {x!r}")
            return False
        return True


def _check_scenario(c: _Checker, s: ScenarioConfig):
    if not isinstance(s.name, str) or not s.name:
        c.add("scenario.name", "must be a non-empty string")
    c.real("scenario.altitude_km", s.altitude_km, low=0, low_open=True)
    ok = c.integer("scenario.num_cells", s.num_cells, low=1)
    ok &= c.integer("scenario.beams_per_cell", s.beams_per_cell, low=1)
    ok &= c.integer("scenario.antenna_elements_per_beam", s.antenna_elements_per_beam, low=1)
    if ok and s.total_antennas != s.num_cells * s.beams_per_cell * s.antenna_elements_per_beam:
        c.add("scenario.total_antennas", "must equal num_cells * beams_per_cell * antenna_elements_per_beam")


def _check_radio(c: _Checker, r: RadioConfig):
    if not isinstance(r.band, Band):
        c.add("radio.band", f"must be one of {[b.value for b in Band]}, got {r.band!r}")
    c.real("radio.bandwidth_hz", r.bandwidth_hz, low=0, low_open=True)
    c.real("radio.beam_radius_km", r.beam_radius_km, low=0, low_open=True)
    c.real("radio.oversampling", r.oversampling, low=1)
    c.integer("radio.numerology", r.numerology, low=0)
    c.real("radio.cp_duration_s", r.cp_duration_s, low=0, low_open=True)
    c.real("radio.subframe_duration_s", r.subframe_duration_s, low=0, low_open=True)
    ok = c.integer("radio.symbols_per_subframe", r.symbols_per_subframe, low=1)
    ok &= c.integer("radio.subcarriers_per_rb", r.subcarriers_per_rb, low=1)
    ok &= c.integer("radio.data_res_per_rb", r.data_res_per_rb, low=0)
    if ok and r.data_res_per_rb > r.symbols_per_subframe * r.subcarriers_per_rb:
        c.add("radio.data_res_per_rb", "must be <= symbols_per_subframe * subcarriers_per_rb")


def _check_service(c: _Checker, s: ServiceProfile, custom_ref: bool):
    if not isinstance(s.service, Service):
        c.add("service.service", f"must be one of {[v.value for v in Service]}, got {s.service!r}")
    c.real("service.ue_density_per_km2", s.ue_density_per_km2, low=0)
    c.real("service.reference_peak_rate_bps", s.reference_peak_rate_bps, low=0, low_open=True)
    c.real("service.reference_bandwidth_hz", s.reference_bandwidth_hz, low=0, low_open=True)
    m_ok = _is_int(s.modulation_order) and s.modulation_order in REFERENCE_MODULATION
    if not m_ok:
        c.add("service.modulation_order", f"must be one of {sorted(REFERENCE_MODULATION)}, got {s.modulation_order!r}")
    c.real("service.code_rate", s.code_rate, low=0, low_open=True, high=1)
    c.integer("service.num_layers", s.num_layers, low=1)
    c.integer("service.reference_layers", s.reference_layers, low=1)
    if c.integer("service.reference_modulation", s.reference_modulation, low=1):
        if m_ok and not custom_ref:
            expected = REFERENCE_MODULATION[s.modulation_order]
            if s.reference_modulation != expected:
                c.add(
                    "service.reference_modulation",
                    f"lookup rule gives M_ref={expected} for M={s.modulation_order}, "
                    f"got {s.reference_modulation} (set custom_reference_modulation to override)",
                )
    c.real("service.ul_fraction", s.ul_fraction, low=0, high=1)
    c.real("service.ul_content_size_bytes", s.ul_content_size_bytes, low=0)


def _check_quantization(c: _Checker, q: QuantizationConfig):
    ok = c.integer("quantization.q_time_bits", q.q_time_bits, low=1)
    ok &= c.integer("quantization.q_freq_bits", q.q_freq_bits, low=1)
    c.integer("quantization.q_llr_bits", q.q_llr_bits, low=1)
    if ok:
        if q.q_freq_bits > q.q_time_bits:
            c.add("quantization.q_freq_bits", "must be <= q_time_bits")
        elif q.q_freq_bits == q.q_time_bits:
            warnings.warn(
                "q_freq_bits == q_time_bits: frequency-domain samples normally need fewer bits",
                stacklevel=4,
            )


def _check_load(c: _Checker, load: LoadModel):
    if _is_real(load.utilization) and not 0 <= load.utilization <= 1:
        c.add("load.utilization", f"utilization ∈ [0,1] violated, got {load.utilization!r}")
    elif not _is_real(load.utilization):
        c.add("load.utilization", f"must be a finite real number, got {load.utilization!r}")
    c.real("load.signaling_time_base_s", load.signaling_time_base_s, low=0, low_open=True)


def validate(bundle: Bundle) -> Bundle:
    """Check every invariant of ``bundle``; return it unchanged or raise.

    All violations are collected before raising :class:`InvariantViolation`.
    """
    c = _Checker()
    _check_scenario(c, bundle.scenario)
    _check_radio(c, bundle.radio)
    _check_service(c, bundle.service, bundle.custom_reference_modulation)
    _check_quantization(c, bundle.quantization)
    _check_load(c, bundle.load)
    if not isinstance(bundle.per_user_scaling, bool):
        c.add("overrides.per_user_scaling", "must be a boolean")
    if bundle.mcs_table is not None:
        for msg in bundle.mcs_table.problems():
            c.add("mcs_table", msg)
    if c.violations:
        raise InvariantViolation(c.violations)
    return bundle


# --- presets --------------------------------------------------------------

_SCENARIOS = {
    "SC1": ScenarioConfig(name="SC1", altitude_km=600.0, num_cells=19),
    "SC2": ScenarioConfig(name="SC2", altitude_km=10.0, num_cells=8),
}
_BANDWIDTH_HZ = {Band.S: 30e6, Band.KA: 400e6}
_REFERENCE_BW_HZ = {Band.S: 5e6, Band.KA: 100e6}
_BEAM_RADIUS_KM = {
    ("SC1", Band.S): 25.0,
    ("SC1", Band.KA): 10.0,
    ("SC2", Band.S): 6.0,
    ("SC2", Band.KA): 6.0,
}
_UE_DENSITY = {Service.EMBB: 0.1, Service.MMTC: 500.0}
_PEAK_RATE_BPS = {
    (Service.EMBB, Band.S): 2e6,
    (Service.EMBB, Band.KA): 100e6,
    (Service.MMTC, Band.S): 0.256e6,
    (Service.MMTC, Band.KA): 7e6,
}
# (M, R_c) used for the per-service result figures
_SERVICE_MCS = {Service.EMBB: (16, 0.64), Service.MMTC: (4, 0.66)}


def _make_preset(scenario: str, band: Band, service: Service) -> Bundle:
    m, rc = _SERVICE_MCS[service]
    return Bundle(
        scenario=_SCENARIOS[scenario],
        radio=RadioConfig(
            band=band,
            bandwidth_hz=_BANDWIDTH_HZ[band],
            beam_radius_km=_BEAM_RADIUS_KM[scenario, band],
        ),
        service=ServiceProfile(
            service=service,
            ue_density_per_km2=_UE_DENSITY[service],
            reference_peak_rate_bps=_PEAK_RATE_BPS[service, band],
            reference_bandwidth_hz=_REFERENCE_BW_HZ[band],
            modulation_order=m,
            code_rate=rc,
        ),
    )


def preset_bundles() -> dict[str, Bundle]:
    """All SC1/SC2 x S/Ka x eMBB/mMTC presets keyed by name, e.g. ``"SC1-S-eMBB"``."""
    out = {}
    for scenario in _SCENARIOS:
        for band in Band:
            for service in Service:
                b = _make_preset(scenario, band, service)
                out[b.name] = b
    return out


def preset_scenarios():
    """Presets as (scenario, radio, service, quantization, load) tuples."""
    return [
        (b.scenario, b.radio, b.service, b.quantization, b.load)
        for b in preset_bundles().values()
    ]


def get_preset(name: str) -> Bundle:
    presets = preset_bundles()
    for key, bundle in presets.items():
        if key.lower() == name.lower():
            return bundle
    raise KeyError(f"unknown preset {name!r}; choose from {', '.join(presets)}")
