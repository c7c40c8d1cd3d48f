from dataclasses import replace

import pytest

from fhsplit.model import (
    REFERENCE_MODULATION,
    Band,
    InvariantViolation,
    LoadModel,
    McsTable,
    QuantizationConfig,
    ScenarioConfig,
    Service,
    SplitOption,
    get_preset,
    preset_bundles,
    preset_scenarios,
    reference_modulation_for,
    validate,
)


def test_preset_catalog_covers_both_scenarios_bands_services():
    names = set(preset_bundles())
    assert names == {
        f"{sc}-{band}-{svc}" for sc in ("SC1", "SC2") for band in ("S", "Ka") for svc in ("eMBB", "mMTC")
    }
    assert len(preset_scenarios()) == 8


def test_preset_sc1_s_embb():
    b = get_preset("SC1-S-eMBB")
    assert b.scenario.num_cells == 19
    assert b.scenario.altitude_km == 600
    assert b.radio.bandwidth_hz == 30e6
    assert b.radio.beam_radius_km == 25
    assert b.service.ue_density_per_km2 == 0.1
    assert b.service.reference_peak_rate_bps == 2e6
    assert b.service.reference_bandwidth_hz == 5e6
    assert (b.service.modulation_order, b.service.code_rate) == (16, 0.64)


def test_preset_sc2_ka_mmtc():
    b = get_preset("SC2-Ka-mMTC")
    assert b.scenario.num_cells == 8
    assert b.scenario.altitude_km == 10
    assert b.radio.bandwidth_hz == 400e6
    assert b.radio.beam_radius_km == 6
    assert b.service.ue_density_per_km2 == 500
    assert b.service.reference_peak_rate_bps == 7e6
    assert (b.service.modulation_order, b.service.code_rate, b.service.reference_modulation) == (4, 0.66, 2)


@pytest.mark.parametrize("name", list(preset_bundles()))
def test_common_table_values(name):
    b = get_preset(name)
    assert b.load.utilization == 0.6
    assert b.load.signaling_time_base_s == 1e-3
    assert b.quantization == QuantizationConfig(16, 10, 3)
    assert b.scenario.beams_per_cell == 1
    assert b.scenario.antenna_elements_per_beam == 2
    assert b.scenario.total_antennas == b.scenario.num_cells * 2
    r = b.radio
    assert (r.oversampling, r.numerology, r.cp_duration_s, r.subframe_duration_s) == (1.0, 0, 4.688e-6, 1e-3)
    assert (r.symbols_per_subframe, r.subcarriers_per_rb, r.data_res_per_rb) == (14, 12, 110)
    s = b.service
    assert (s.num_layers, s.reference_layers, s.ul_fraction, s.ul_content_size_bytes) == (8, 1, 1.0, 30.0)
    assert validate(b) is b


def test_get_preset_case_insensitive_and_unknown():
    assert get_preset("sc1-ka-embb").name == "SC1-Ka-eMBB"
    with pytest.raises(KeyError):
        get_preset("SC3-S-eMBB")


@pytest.mark.parametrize("m, ref", [(2, 2), (4, 2), (16, 4), (64, 16), (256, 64)])
def test_reference_modulation_lookup(m, ref):
    assert reference_modulation_for(m) == ref


@pytest.mark.parametrize("m", [0, 1, 3, 8, 32, 128, 512, 16.0, "16", None])
def test_reference_modulation_lookup_rejects(m):
    with pytest.raises(ValueError):
        reference_modulation_for(m)


def test_total_antennas_derived():
    s = ScenarioConfig("X", 1.0, num_cells=3, beams_per_cell=2, antenna_elements_per_beam=4)
    assert s.total_antennas == 24


def test_split_option_order():
    assert list(SplitOption) == sorted(SplitOption, key=lambda o: o.rank)
    assert SplitOption.OPT8 < SplitOption.OPT7_1 < SplitOption.OPT7_2 < SplitOption.OPT7_3
    assert SplitOption.OPT7_3 < SplitOption.OPT6 < SplitOption.OPT2
    assert sorted([SplitOption.OPT2, SplitOption.OPT8, SplitOption.OPT6]) == [
        SplitOption.OPT8, SplitOption.OPT6, SplitOption.OPT2]


@pytest.mark.parametrize("text", ["Opt7_1", "opt7.1", "7.1", "7_1", "OPT7_1"])
def test_split_option_parse(text):
    assert SplitOption.parse(text) is SplitOption.OPT7_1


def test_split_option_parse_unknown():
    with pytest.raises(ValueError):
        SplitOption.parse("Opt5")


def test_utilization_out_of_range(sc1_s_embb):
    bad = replace(sc1_s_embb, load=LoadModel(utilization=1.2))
    with pytest.raises(InvariantViolation) as info:
        validate(bad)
    assert any("utilization ∈ [0,1]" in str(v) for v in info.value.violations)
    assert info.value.violations[0].path == "load.utilization"


def test_reference_modulation_mismatch(sc1_s_embb):
    bad = replace(sc1_s_embb, service=replace(sc1_s_embb.service, reference_modulation=2))
    with pytest.raises(InvariantViolation) as info:
        validate(bad)
    msg = str(info.value)
    assert "service.reference_modulation" in msg
    assert "lookup rule" in msg


def test_reference_modulation_override_allowed(sc1_s_embb):
    custom = replace(
        sc1_s_embb,
        service=replace(sc1_s_embb.service, reference_modulation=2),
        custom_reference_modulation=True,
    )
    assert validate(custom) is custom


def test_violations_are_collected_not_fail_fast(sc1_s_embb):
    bad = replace(
        sc1_s_embb,
        load=LoadModel(utilization=-0.1),
        quantization=QuantizationConfig(q_time_bits=8, q_freq_bits=10, q_llr_bits=0),
        radio=replace(sc1_s_embb.radio, cp_duration_s=0.0, data_res_per_rb=500),
        service=replace(sc1_s_embb.service, code_rate=1.5, modulation_order=32),
    )
    with pytest.raises(InvariantViolation) as info:
        validate(bad)
    paths = {v.path for v in info.value.violations}
    assert {
        "load.utilization",
        "quantization.q_freq_bits",
        "quantization.q_llr_bits",
        "radio.cp_duration_s",
        "radio.data_res_per_rb",
        "service.code_rate",
        "service.modulation_order",
    } <= paths


def test_equal_quantization_warns(sc1_s_embb):
    b = replace(sc1_s_embb, quantization=QuantizationConfig(10, 10, 3))
    with pytest.warns(UserWarning, match="q_freq_bits == q_time_bits"):
        validate(b)


def test_enums_and_types_checked(sc1_s_embb):
    bad = replace(
        sc1_s_embb,
        radio=replace(sc1_s_embb.radio, band="X"),
        scenario=ScenarioConfig("SC1", 600.0, num_cells=0),
    )
    with pytest.raises(InvariantViolation) as info:
        validate(bad)
    paths = {v.path for v in info.value.violations}
    assert {"radio.band", "scenario.num_cells"} <= paths


def test_mcs_table_problems():
    assert McsTable(((4, 0.66), (16, 0.64))).problems() == []
    assert McsTable(()).problems()
    assert McsTable(((16, 0.5), (4, 0.5))).problems()
    assert McsTable(((32, 0.5),)).problems()
    assert McsTable(((16, 0.0),)).problems()


def test_with_mcs_rederives_reference(sc1_s_embb):
    b = sc1_s_embb.with_mcs(256, 0.9)
    assert b.service.reference_modulation == REFERENCE_MODULATION[256]
    assert b.service.code_rate == 0.9
    with pytest.raises(ValueError):
        sc1_s_embb.with_mcs(32, 0.5)


def test_enum_values():
    assert Band("Ka") is Band.KA
    assert Service("mMTC") is Service.MMTC


def test_rate_table_accepts_option_spellings():
    from fhsplit.ratecalc import compute_rate_table

    t = compute_rate_table(get_preset("SC1-S-eMBB"))
    assert t.rate("7.1") == t.rate(SplitOption.OPT7_1) == t.entries[SplitOption.OPT7_1]
    assert t.reduction("Opt7_1") == t.reduction(SplitOption.OPT7_1, "8")
