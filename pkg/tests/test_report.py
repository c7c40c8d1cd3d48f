import csv
import io
import re
import xml.etree.ElementTree as ET

import pytest

from fhsplit.model import McsTable, RateTable, SplitOption as O, get_preset, preset_bundles
from fhsplit.ratecalc import compute_rate_table, sweep_mcs
from fhsplit.report import (
    CSV_HEADER,
    bar_chart_svg,
    csv_text,
    emit_bar_chart_svg,
    emit_csv,
    emit_sweep_chart_svg,
    format_percent,
    format_rate_si,
    format_rate_sci,
    sweep_chart_svg,
    sweep_csv_text,
)

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture(scope="module")
def embb_tables():
    return [compute_rate_table(b) for b in preset_bundles().values() if b.service.service.value == "eMBB"]


@pytest.mark.parametrize("value, text", [
    (4.20104645071e12, "4.20105e12"),
    (7.16283125018e12, "7.16283e12"),
    (1.0, "1.00000e0"),
    (0.0, "0.00000e0"),
    (1.23456789e-3, "1.23457e-3"),
    (9.999995e5, "1.00000e6"),
])
def test_format_rate_sci(value, text):
    assert format_rate_sci(value) == text


def test_format_percent():
    assert format_percent(41.34935888) == "41.35"
    assert format_percent(0.0) == "0.00"
    assert format_percent(None) == ""


@pytest.mark.parametrize("value, text", [
    (7.16283125018e12, "7.163 Tbit/s"),
    (2.11252621522e11, "211.253 Gbit/s"),
    (1500.0, "1.500 kbit/s"),
    (999.0, "999.000 bit/s"),
    (7.6e16, "76.000 Pbit/s"),
])
def test_format_rate_si(value, text):
    assert format_rate_si(value) == text


def test_csv_row_sc1_s_embb():
    text = csv_text([compute_rate_table(get_preset("SC1-S-eMBB"))])
    lines = text.split("\n")
    assert lines[0] == ",".join(CSV_HEADER)
    assert "SC1,S,eMBB,Opt7_1,4.20105e12,41.35" in lines
    assert "SC1,S,eMBB,Opt8,7.16283e12,0.00" in lines
    assert len(lines) == 8 and lines[-1] == ""
    assert "\r" not in text


def test_csv_empty():
    with pytest.raises(ValueError, match="nothing to emit"):
        emit_csv([], io.StringIO())


def test_csv_deterministic_and_ordered(tmp_path, embb_tables):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(embb_tables, a)
    emit_csv(list(reversed(embb_tables)), b)
    assert a.read_bytes() == b.read_bytes()
    rows = list(csv.DictReader(io.StringIO(a.read_text())))
    assert len(rows) == 24
    keys = [(r["scenario"], r["band"], r["service"]) for r in rows]
    assert keys == sorted(keys)
    for i in range(0, 24, 6):
        assert [r["split_option"] for r in rows[i:i + 6]] == [o.value for o in O]


def test_csv_loss_bounded(embb_tables):
    rows = list(csv.DictReader(io.StringIO(csv_text(embb_tables))))
    by_key = {t.label: t for t in embb_tables}
    for r in rows:
        t = by_key[f"{r['scenario']}-{r['band']}-{r['service']}"]
        assert float(r["rate_bps"]) == pytest.approx(t.entries[O(r["split_option"])], rel=5e-6)


def test_bar_chart_structure(embb_tables):
    root = ET.fromstring(bar_chart_svg(embb_tables))
    assert root.tag == SVG + "svg"
    bars = root.findall(f".//{SVG}rect[@class='bar']")
    assert len(bars) == 24
    groups = root.findall(f".//{SVG}g[@class='group']")
    assert len(groups) == 4
    for g, table in zip(groups, sorted(embb_tables, key=lambda t: (t.scenario_name, t.band))):
        heights = {O(r.get("data-option")): float(r.get("height")) for r in g.findall(f"{SVG}rect")}
        rates = table.entries
        for a in O:
            for b in O:
                if rates[a] > rates[b]:
                    assert heights[a] > heights[b]
        labels = [t.text for t in g.findall(f"{SVG}text[@class='bar-label']")]
        assert labels == [format_rate_sci(rates[o]) for o in O]


def test_bar_chart_single_table_and_grouping(tmp_path, embb_tables):
    root = ET.fromstring(bar_chart_svg(embb_tables[:1]))
    assert len(root.findall(f".//{SVG}rect[@class='bar']")) == 6
    by_band = ET.fromstring(bar_chart_svg(embb_tables, "by_band"))
    ids = [g.get("id") for g in by_band.findall(f".//{SVG}g[@class='group']")]
    assert [i.split("-")[1] for i in ids] == ["Ka", "Ka", "S", "S"]
    with pytest.raises(ValueError):
        bar_chart_svg(embb_tables, "by_colour")
    with pytest.raises(ValueError):
        bar_chart_svg([])
    path = tmp_path / "bars.svg"
    emit_bar_chart_svg(embb_tables, "by_scenario", path)
    assert path.read_text() == bar_chart_svg(embb_tables)


def test_bar_chart_zero_rates():
    t = RateTable("X", {o: 0.0 for o in O}, band="S", service="eMBB")
    root = ET.fromstring(bar_chart_svg([t]))
    assert all(float(r.get("height")) == 0 for r in root.findall(f".//{SVG}rect[@class='bar']"))


@pytest.fixture(scope="module")
def five_point_sweep():
    mcs = McsTable(((2, 0.5), (4, 0.66), (16, 0.64), (64, 0.85), (256, 0.93)))
    return sweep_mcs(get_preset("SC2-S-eMBB"), mcs)


def _polyline_points(poly):
    return [tuple(map(float, p.split(","))) for p in poly.get("points").split()]


def test_sweep_chart_structure(five_point_sweep):
    root = ET.fromstring(sweep_chart_svg(five_point_sweep))
    lines = root.findall(f".//{SVG}polyline")
    assert [p.get("data-option") for p in lines] == ["Opt7_3", "Opt6", "Opt2"]
    for p in lines:
        assert len(_polyline_points(p)) == 5
    legend = [t.text for t in root.findall(f".//{SVG}text[@class='legend']")]
    assert legend == ["Option 7.3", "Option 6", "Option 2"]
    # y grows downward in SVG: higher rate -> smaller y
    ys = [y for _, y in _polyline_points(lines[0])]
    assert ys == sorted(ys, reverse=True)
    xs = [x for x, _ in _polyline_points(lines[0])]
    gaps = [round(b - a, 6) for a, b in zip(xs, xs[1:])]
    # log-scale x: 2->4 is one octave, 4->16 two, 16->64 two, 64->256 two
    assert gaps[1] == pytest.approx(2 * gaps[0], abs=0.02)
    assert gaps[2] == pytest.approx(gaps[1], abs=0.02)
    assert gaps[3] == pytest.approx(gaps[1], abs=0.02)


def test_sweep_chart_deterministic(tmp_path, five_point_sweep):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    emit_sweep_chart_svg(five_point_sweep, a)
    emit_sweep_chart_svg(five_point_sweep, b)
    assert a.read_bytes() == b.read_bytes()
    with pytest.raises(ValueError):
        sweep_chart_svg([])


def test_sweep_csv(five_point_sweep):
    lines = sweep_csv_text(five_point_sweep).splitlines()
    assert lines[0] == "scenario,band,service,m,rc,Opt7_3_bps,Opt6_bps,Opt2_bps"
    assert len(lines) == 6
    assert re.match(r"SC2,S,eMBB,2,0\.5,", lines[1])
