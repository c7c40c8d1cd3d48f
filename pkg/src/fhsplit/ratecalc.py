"""Uplink fronthaul rate per functional split option.

The lower-layer options (8 down to 6) form a multiplicative chain starting
from the time-domain IQ rate of every antenna element. Option 2 is computed
on its own from the reference peak rate plus a per-user signaling term.
All rates are platform-wide totals in bit/s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import (
    Bundle,
    LoadModel,
    McsTable,
    QuantizationConfig,
    RadioConfig,
    RateTable,
    ScenarioConfig,
    ServiceProfile,
    SplitOption,
    reference_modulation_for,
    validate,
)

__all__ = [
    "RateBreakdown",
    "beam_area_km2",
    "users_per_beam",
    "service_link_rate",
    "rate_opt8",
    "cp_removal_factor",
    "rate_opt7_1",
    "rate_opt7_2",
    "rate_opt7_3",
    "rate_opt6",
    "opt2_payload_per_beam",
    "opt2_signaling_per_beam",
    "rate_opt2",
    "compute_rate_table",
    "reduction_percent",
    "sweep_mcs",
    "feasible_splits",
]

CHAIN = (
    SplitOption.OPT8,
    SplitOption.OPT7_1,
    SplitOption.OPT7_2,
    SplitOption.OPT7_3,
    SplitOption.OPT6,
)


@dataclass(frozen=True)
class RateBreakdown:
    """Intermediate quantities behind a :class:`RateTable`.

    ``factors[opt]`` is the multiplier applied to the predecessor's rate for
    Opt7_1..Opt6. Option 2 is kept per beam so the aggregation stays visible.
    """

    n_ue: float
    service_link_rate: float
    rates: dict
    factors: dict
    beams: int
    opt2_payload_per_beam: float
    opt2_signaling_per_beam: float

    @property
    def opt2_per_beam(self) -> float:
        return self.opt2_payload_per_beam + self.opt2_signaling_per_beam


def beam_area_km2(beam_radius_km: float) -> float:
    if not beam_radius_km > 0:
        raise ValueError(f"beam radius must be > 0, got {beam_radius_km!r}")
    return math.pi * beam_radius_km**2


def users_per_beam(area_km2: float, density_per_km2: float) -> float:
    """Number of UEs in one beam footprint; kept real-valued, no rounding."""
    if area_km2 < 0 or density_per_km2 < 0:
        raise ValueError("area and density must be non-negative")
    return area_km2 * density_per_km2


def service_link_rate(
    scenario: ScenarioConfig,
    radio: RadioConfig,
    n_ue: float,
    per_user_scaling: bool = True,
) -> float:
    """Aggregate complex sample rate over all antenna elements (samples/s).

    With ``per_user_scaling=False`` the N_UE multiplier is dropped.
    """
    users = n_ue if per_user_scaling else 1.0
    return (
        scenario.num_cells
        * scenario.beams_per_cell
        * users
        * radio.bandwidth_hz
        * scenario.antenna_elements_per_beam
        * radio.oversampling
    )


def rate_opt8(service_link: float, q: QuantizationConfig) -> float:
    # I and Q, Q_T bits each
    return service_link * 2 * q.q_time_bits


def cp_removal_factor(radio: RadioConfig) -> float:
    cp_total = radio.symbols_per_subframe * (radio.numerology + 1) * radio.cp_duration_s
    return radio.subframe_duration_s / (radio.subframe_duration_s + cp_total)


def rate_opt7_1(r_opt8: float, radio: RadioConfig, q: QuantizationConfig) -> float:
    return r_opt8 * cp_removal_factor(radio) * (q.q_freq_bits / q.q_time_bits)


def rate_opt7_2(r_opt7_1: float, load: LoadModel) -> float:
    return r_opt7_1 * load.utilization


def _opt7_3_factor(radio, scenario, service, q) -> float:
    data_share = radio.data_res_per_rb / (radio.symbols_per_subframe * radio.subcarriers_per_rb)
    llr_bits = math.log2(service.modulation_order) / q.q_freq_bits * q.q_llr_bits
    return data_share / scenario.antenna_elements_per_beam * llr_bits


def rate_opt7_3(
    r_opt7_2: float,
    radio: RadioConfig,
    scenario: ScenarioConfig,
    service: ServiceProfile,
    q: QuantizationConfig,
) -> float:
    if service.modulation_order < 2:
        raise ValueError("modulation order must be >= 2")
    return r_opt7_2 * _opt7_3_factor(radio, scenario, service, q)


def rate_opt6(r_opt7_3: float, service: ServiceProfile, q: QuantizationConfig) -> float:
    return r_opt7_3 / q.q_llr_bits * service.code_rate


def opt2_payload_per_beam(radio: RadioConfig, service: ServiceProfile) -> float:
    return (
        service.reference_peak_rate_bps
        * (radio.bandwidth_hz / service.reference_bandwidth_hz)
        * (service.num_layers / service.reference_layers)
        * (service.modulation_order / service.reference_modulation)
    )


def opt2_signaling_per_beam(service: ServiceProfile, load: LoadModel, n_ue: float) -> float:
    """UL signaling of all users in a beam; content bytes per signaling period."""
    bits_per_s = service.ul_content_size_bytes * 8 / load.signaling_time_base_s
    return n_ue * service.ul_fraction * bits_per_s * service.num_layers


def rate_opt2(
    scenario: ScenarioConfig,
    radio: RadioConfig,
    service: ServiceProfile,
    load: LoadModel,
    n_ue: float,
) -> float:
    per_beam = opt2_payload_per_beam(radio, service) + opt2_signaling_per_beam(service, load, n_ue)
    return per_beam * scenario.num_cells * scenario.beams_per_cell


def reduction_percent(reference: float, target: float) -> float:
    """Relative saving of ``target`` against ``reference`` in percent.

    Negative when ``target`` exceeds ``reference``.
    """
    if not reference > 0:
        raise ValueError(f"reference rate must be > 0, got {reference!r}")
    return 100.0 * (1.0 - target / reference)


def compute_rate_table(bundle: Bundle) -> RateTable:
    """Validate ``bundle`` and evaluate all six split options.

    Reductions are filled in against Opt8 whenever its rate is positive.
    """
    validate(bundle)
    sc, radio, svc, q, load = (
        bundle.scenario,
        bundle.radio,
        bundle.service,
        bundle.quantization,
        bundle.load,
    )
    n_ue = users_per_beam(beam_area_km2(radio.beam_radius_km), svc.ue_density_per_km2)
    link = service_link_rate(sc, radio, n_ue, bundle.per_user_scaling)

    r8 = rate_opt8(link, q)
    r71 = rate_opt7_1(r8, radio, q)
    r72 = rate_opt7_2(r71, load)
    r73 = rate_opt7_3(r72, radio, sc, svc, q)
    r6 = rate_opt6(r73, svc, q)
    payload = opt2_payload_per_beam(radio, svc)
    signaling = opt2_signaling_per_beam(svc, load, n_ue)
    beams = sc.num_cells * sc.beams_per_cell
    r2 = (payload + signaling) * beams

    rates = {
        SplitOption.OPT8: r8,
        SplitOption.OPT7_1: r71,
        SplitOption.OPT7_2: r72,
        SplitOption.OPT7_3: r73,
        SplitOption.OPT6: r6,
        SplitOption.OPT2: r2,
    }
    factors = {
        SplitOption.OPT7_1: cp_removal_factor(radio) * q.q_freq_bits / q.q_time_bits,
        SplitOption.OPT7_2: load.utilization,
        SplitOption.OPT7_3: _opt7_3_factor(radio, sc, svc, q),
        SplitOption.OPT6: svc.code_rate / q.q_llr_bits,
    }
    reductions = {}
    if r8 > 0:
        for opt, rate in rates.items():
            reductions[SplitOption.OPT8, opt] = reduction_percent(r8, rate)

    breakdown = RateBreakdown(
        n_ue=n_ue,
        service_link_rate=link,
        rates=dict(rates),
        factors=factors,
        beams=beams,
        opt2_payload_per_beam=payload,
        opt2_signaling_per_beam=signaling,
    )
    return RateTable(
        scenario_name=sc.name,
        entries=rates,
        reductions_vs=reductions,
        band=radio.band.value,
        service=svc.service.value,
        breakdown=breakdown,
    )


def sweep_mcs(bundle: Bundle, mcs: McsTable) -> list[tuple[int, float, RateTable]]:
    """One rate table per (M, R_c) pair; M_ref follows the lookup rule per pair."""
    pairs = list(mcs)
    if not pairs:
        raise ValueError("MCS table is empty")
    for m, _ in pairs:
        reference_modulation_for(m)
    return [(m, rc, compute_rate_table(bundle.with_mcs(m, rc))) for m, rc in pairs]


def feasible_splits(table: RateTable, feeder_capacity_bps: float) -> list[SplitOption]:
    """Split options whose rate fits in the feeder link, in split order."""
    if not feeder_capacity_bps > 0:
        raise ValueError(f"feeder capacity must be > 0, got {feeder_capacity_bps!r}")
    return sorted(opt for opt, rate in table.entries.items() if rate <= feeder_capacity_bps)
