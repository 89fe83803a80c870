"""Catalog loading, table reproduction, verification suite, and the CLI."""

import pytest

from flickerfloor import cli
from flickerfloor.workbench import (
    ConfigError,
    bundled_config_text,
    load_catalog,
    reproduce_tables,
    run_verification_suite,
)

KAPPA_TH_LONGITUDINAL = {  # published reference column
    "V1": 3.5e-10, "V1.5": 2.3e-10, "V2": 1.9e-10, "V5": 4.6e-11, "V80": 1.9e-12,
}
KAPPA_TH_TRANSVERSE = {
    "V1": 7.2e-11, "V1.5": 4.8e-11, "V2": 4.8e-11, "V5": 2.9e-12, "V80": 1.4e-13,
}

MINIMAL_CFG = """
[material:demo]
carriers = n:0.06
rho0 = 5.3 g/cm^3
u = 2.5e5 cm/s
d = 5e-8 cm
dos = 1e22 1/(eV*cm^3)
acoustic_match = reflecting

[sample:S]
material = demo
width = 1 um
length = 2 um
thickness = 10 nm
"""


# ---------------------------------------------------------------------------
# load_catalog
# ---------------------------------------------------------------------------

def test_bundled_ingaas_has_five_samples():
    entries, materials = load_catalog(bundled_config_text("ingaas"))
    assert [e.sample_id for e in entries] == ["V1", "V1.5", "V2", "V5", "V80"]
    assert "ingaas" in materials
    v1 = entries[0]
    assert v1.geom.w == pytest.approx(1e-4)
    assert v1.geom.l == pytest.approx(2.2e-4)
    assert v1.geom.a == pytest.approx(1e-6)
    assert v1.kappa_exp == pytest.approx(1.75e-9)


def test_empty_config_gives_empty_catalog():
    entries, materials = load_catalog("")
    assert entries == [] and materials == {}


def test_negative_thickness_rejected_naming_field():
    bad = MINIMAL_CFG.replace("thickness = 10 nm", "thickness = -1 nm")
    with pytest.raises(ConfigError) as err:
        load_catalog(bad)
    assert "thickness" in str(err.value) and "sample:S" in str(err.value)


def test_unknown_unit_rejected():
    bad = MINIMAL_CFG.replace("10 nm", "10 furlong")
    with pytest.raises(ConfigError) as err:
        load_catalog(bad)
    assert "thickness" in str(err.value)


def test_wrong_dimension_rejected():
    bad = MINIMAL_CFG.replace("width = 1 um", "width = 1 eV")
    with pytest.raises(ConfigError):
        load_catalog(bad)


def test_missing_field_rejected():
    bad = MINIMAL_CFG.replace("u = 2.5e5 cm/s\n", "")
    with pytest.raises(ConfigError) as err:
        load_catalog(bad)
    assert "'u'" in str(err.value)


def test_unknown_material_reference_rejected():
    bad = MINIMAL_CFG.replace("material = demo", "material = nothere")
    with pytest.raises(ConfigError) as err:
        load_catalog(bad)
    assert "nothere" in str(err.value)


def test_unknown_section_rejected():
    with pytest.raises(ConfigError):
        load_catalog(MINIMAL_CFG + "\n[garbage]\nx = 1\n")


def test_si_inputs_converted_to_cgs():
    cfg = MINIMAL_CFG.replace("rho0 = 5.3 g/cm^3", "rho0 = 5300 kg/m^3")
    entries, materials = load_catalog(cfg)
    assert materials["demo"].rho0.to("g/cm^3") == pytest.approx(5.3)


# ---------------------------------------------------------------------------
# reproduce_tables
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def ingaas_catalog():
    entries, _ = load_catalog(bundled_config_text("ingaas"))
    return entries


def test_longitudinal_table_with_supplied_g(ingaas_catalog):
    report = reproduce_tables(ingaas_catalog, mode="longitudinal", g_source="table")
    rows = {r["sample"]: r for r in report.rows}
    for name, ref in KAPPA_TH_LONGITUDINAL.items():
        if name == "V80":
            # published value is inconsistent with the constant kappa/g ratio
            # of the other rows; the row carries an annotation instead
            assert rows[name]["annotations"]
            continue
        assert rows[name]["kappa_th"] == pytest.approx(ref, rel=0.03), name


def test_transverse_table_with_supplied_g(ingaas_catalog):
    report = reproduce_tables(ingaas_catalog, mode="transverse", g_source="table")
    rows = {r["sample"]: r for r in report.rows}
    # 5% tolerance: the published column is rounded to two significant
    # figures, which alone shifts V2 by 3%
    for name, ref in KAPPA_TH_TRANSVERSE.items():
        if name == "V80":
            continue
        assert rows[name]["kappa_th"] == pytest.approx(ref, rel=0.05), name


def test_longitudinal_table_with_computed_g(ingaas_catalog):
    report = reproduce_tables(ingaas_catalog, mode="longitudinal", g_source="computed")
    rows = {r["sample"]: r for r in report.rows}
    for name, ref in KAPPA_TH_LONGITUDINAL.items():
        if name == "V80":
            continue
        assert rows[name]["kappa_th"] == pytest.approx(ref, rel=0.20), name


def test_ratio_column(ingaas_catalog):
    report = reproduce_tables(ingaas_catalog, mode="longitudinal", g_source="table")
    for row in report.rows:
        assert row["ratio_exp_th"] == pytest.approx(
            row["kappa_exp"] / row["kappa_th"], rel=1e-12)


def test_ybco_film_row():
    entries, _ = load_catalog(bundled_config_text("ybco"))
    report = reproduce_tables(entries, g_source="computed")
    rows = {r["sample"]: r for r in report.rows}
    assert rows["film"]["g_cm^-1"] == pytest.approx(6.0, rel=0.25)
    assert rows["film"]["kappa_th"] == pytest.approx(2.3e-15, rel=0.20)
    assert rows["film"]["gamma"] == 1.0


def test_ybco_bulk_row_uses_measured_exponent():
    entries, _ = load_catalog(bundled_config_text("ybco"))
    report = reproduce_tables(entries, g_source="computed")
    rows = {r["sample"]: r for r in report.rows}
    assert rows["bulk-B"]["gamma"] == pytest.approx(1.06)
    assert rows["bulk-B"]["kappa_th"] == pytest.approx(2.2e-14, rel=0.25)


def test_gaas_piezo_delta():
    _, materials = load_catalog(bundled_config_text("gaas_piezo"))
    from flickerfloor.noise_floor import phonon_delta
    assert phonon_delta(materials["gaas"]) == pytest.approx(0.14, rel=0.05)


def test_reproduce_tables_input_validation(ingaas_catalog):
    with pytest.raises(ConfigError):
        reproduce_tables([], mode="longitudinal")
    with pytest.raises(ConfigError):
        reproduce_tables(ingaas_catalog, mode="diagonal")
    with pytest.raises(ConfigError):
        reproduce_tables(ingaas_catalog, g_source="guess")


def test_report_is_deterministic(ingaas_catalog):
    a = reproduce_tables(ingaas_catalog, mode="longitudinal", g_source="computed")
    b = reproduce_tables(ingaas_catalog, mode="longitudinal", g_source="computed")
    assert a.to_csv() == b.to_csv()
    assert a.to_csv().splitlines()[0] == (
        "sample,g_cm^-1,g_tr_cm^-1,kappa_th,kappa_exp,ratio_exp_th,gamma,"
        "fmax_Hz,annotations")


def test_verification_suite_passes():
    report = run_verification_suite()
    assert report.rows and not report.failures


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def test_cli_factor(capsys):
    assert cli.main(["factor", "--sample", "V1"]) == 0
    out = capsys.readouterr().out
    assert "g = " in out and "longitudinal" in out


def test_cli_factor_quadrature_matches(capsys):
    assert cli.main(["factor", "--sample", "V2", "--method", "quadrature"]) == 0
    quad = float(capsys.readouterr().out.split()[2])
    assert cli.main(["factor", "--sample", "V2"]) == 0
    closed = float(capsys.readouterr().out.split()[2])
    assert quad == pytest.approx(closed, rel=1e-6)


def test_cli_kappa_with_table_g(capsys):
    assert cli.main(["kappa", "--sample", "V1", "--g-source", "table"]) == 0
    out = capsys.readouterr().out
    kappa_th = float(out.split()[2])
    assert kappa_th == pytest.approx(3.5e-10, rel=0.01)


def test_cli_delta(capsys, tmp_path):
    cfg = tmp_path / "gaas.cfg"
    cfg.write_text(bundled_config_text("gaas_piezo"))
    assert cli.main(["delta", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "delta = 0.14" in out


def test_cli_report_csv(tmp_path):
    out = tmp_path / "report.csv"
    assert cli.main(["report", "--output", str(out), "--g-source", "table"]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("sample,")
    assert len(lines) == 6


def test_cli_spectrum(tmp_path):
    out = tmp_path / "spec.csv"
    assert cli.main(["spectrum", "--sample", "V1", "--u0", "1 V",
                     "--fmin", "1", "--fmax", "100", "--points", "5",
                     "--output", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "f,S,stderr"
    assert len(lines) == 6


def test_cli_estimate_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["estimate", "--gamma", "1.0", "--n", "512", "--records", "4",
            "--seed", "7"]
    assert cli.main(args + ["--output", str(a)]) == 0
    assert cli.main(args + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_verify_wk(capsys):
    assert cli.main(["verify-wk"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_cli_input_errors_exit_1(capsys, tmp_path):
    assert cli.main(["factor", "--sample", "NOPE"]) == 1
    assert "unknown sample" in capsys.readouterr().err
    assert cli.main(["factor", "--sample", "V1",
                     "--config", str(tmp_path / "missing.cfg")]) == 1
    bad = tmp_path / "bad.cfg"
    bad.write_text("[sample:X]\nmaterial = none\n")
    assert cli.main(["report", "--config", str(bad)]) == 1
