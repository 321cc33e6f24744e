"""End-to-end CLI tests through cli_main (no process spawning)."""

import json

from roughpi.catalog import builtin_catalog
from roughpi.cli import cli_main
from roughpi.rough import mmg, rough_prefix


def run(capsys, *argv):
    code = cli_main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- roughs ---

def test_roughs_text(capsys):
    code, out, _ = run(capsys, "roughs", "7", "--limit", "100")
    assert code == 0
    assert [int(line) for line in out.split()] == rough_prefix(7, 100)


def test_roughs_bfile(capsys):
    code, out, _ = run(capsys, "roughs", "5", "--limit", "30", "--bfile")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "1 1"
    assert lines[1] == "2 5"
    assert len(lines) == len(rough_prefix(5, 30))


def test_roughs_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "roughs", "3", "--limit", "20")
    assert code == 0
    payload = json.loads(out)
    assert payload["values"] == rough_prefix(3, 20)
    assert payload["oeis"] == "A005408"
    assert payload["k"] == 3 and payload["limit"] == 20


def test_roughs_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "roughs", "5", "--limit", "12")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "index,value"
    assert lines[1] == "1,1"
    assert lines[2] == "2,5"


def test_roughs_composite_k_is_usage_error(capsys):
    code, _, err = run(capsys, "roughs", "4", "--limit", "10")
    assert code == 2
    assert "prime" in err


# --- mmg ---

def test_mmg_text(capsys):
    code, out, _ = run(capsys, "mmg", "5")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "modulus 6"
    assert lines[1] == "order 2"
    assert lines[2] == "elements 1 5"


def test_mmg_json_k7(capsys):
    code, out, _ = run(capsys, "--format", "json", "mmg", "7")
    assert code == 0
    payload = json.loads(out)
    assert payload["modulus"] == 30
    assert payload["order"] == 8
    assert payload["elements"] == list(mmg(7).elements)


def test_mmg_composite_k_is_usage_error(capsys):
    code, _, err = run(capsys, "mmg", "9")
    assert code == 2
    assert "prime" in err


# --- verify ---

def test_verify_single_pass(capsys):
    code, out, _ = run(capsys, "verify", "f5")
    assert code == 0
    assert "PASS S5-f" in out
    assert "1 passed, 0 failed" in out


def test_verify_unknown_id_is_usage_error(capsys):
    code, _, err = run(capsys, "verify", "nope")
    assert code == 2
    assert "nope" in err


def test_verify_json_payload(capsys):
    code, out, _ = run(capsys, "--format", "json", "verify", "f3")
    assert code == 0
    payload = json.loads(out)
    assert len(payload) == 1
    entry = payload[0]
    assert entry["passed"] is True
    assert entry["formula_id"] == "S3-f"
    assert entry["quadrature_value"].startswith("0.78539816339744830961")
    assert entry["residue_value"].startswith("0.78539816339744830961")
    assert entry["absences"] == {}


def test_verify_precision_flag_changes_digits(capsys):
    code, out, _ = run(capsys, "--precision", "40", "--format", "json",
                       "verify", "f3")
    assert code == 0
    entry = json.loads(out)[0]
    digits = entry["quadrature_value"].split(".")[1]
    assert len(digits) >= 39
    assert entry["quadrature_value"].startswith("0.78539816339744830961566084581987572")


def test_verify_all_reports_the_known_miss(capsys):
    code, out, _ = run(capsys, "verify", "all")
    assert code == 1
    lines = out.strip().splitlines()
    fails = [line for line in lines if line.startswith("FAIL")]
    assert len(fails) == 1
    assert "S5-jj2" in fails[0]
    assert "18 passed, 1 failed" in lines[-1]


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "verify", "h5")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "id,passed,quadrature,series,residue,expected"
    cells = lines[1].split(",")
    assert cells[0] == "S5-h" and cells[1] == "true"
    assert cells[4] == ""  # no residue route for this one


# --- expand ---

def test_expand_text_f3(capsys):
    code, out, _ = run(capsys, "expand", "f3", "--terms", "4")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "1/(1+x^2)"
    assert lines[1] == "[1] + [-1/3] + [1/5] + [-1/7]"


def test_expand_text_f5_blocks(capsys):
    code, out, _ = run(capsys, "expand", "f5", "--terms", "4")
    assert code == 0
    blocks = out.strip().splitlines()[1]
    assert blocks == "[1 + 1/5] + [-1/7 - 1/11]"


def test_expand_json_f7(capsys):
    code, out, _ = run(capsys, "--format", "json", "expand", "f7",
                       "--terms", "10")
    assert code == 0
    payload = json.loads(out)
    assert payload["id"] == "S7-f"
    assert payload["terms"] == [
        [1, 1], [7, -1], [11, -1], [13, 1], [17, 1], [19, -1], [23, -1],
        [29, 1], [31, -1], [37, 1],
    ]


def test_expand_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "expand", "jj1",
                       "--terms", "3")
    assert code == 0
    assert out.strip().splitlines() == ["n,coeff", "1,1", "3,1", "5,-1"]


def test_expand_bad_terms(capsys):
    code, _, err = run(capsys, "expand", "f3", "--terms", "0")
    assert code == 2


# --- derive ---

def test_derive_f7_finds_catalog_child(capsys):
    code, out, _ = run(capsys, "--format", "json", "derive", "f7", "--k", "7")
    assert code == 0
    payload = json.loads(out)
    assert payload["identity_ok"] is True
    assert payload["catalog_match"] == "S11-f"
    assert payload["recognized"] == "32*pi/105"
    assert payload["step"]["scale"] == [8, 7]
    assert payload["step"]["parent_id"] == "S7-f"


def test_derive_jj1_text(capsys):
    code, out, _ = run(capsys, "derive", "jj1", "--k", "3")
    assert code == 0
    assert "sign -" in out
    assert "scale 2/3" in out
    assert "identity PASS" in out
    assert "catalog match S5-jj3" in out


def test_derive_family_break_exits_one(capsys):
    code, _, err = run(capsys, "derive", "jj2", "--k", "5")
    assert code == 1
    assert "no recursion sign" in err


def test_derive_bad_k_is_usage_error(capsys):
    code, _, err = run(capsys, "derive", "f7", "--k", "4")
    assert code == 2


# --- scan-s7 ---

def test_scan_s7_text(capsys):
    code, out, _ = run(capsys, "scan-s7")
    assert code == 0
    lines = out.strip().splitlines()
    assert len([line for line in lines if "conflict[" in line]) == 3
    assert "conflict[duplicate_printed_integrand] ss1" in out
    assert "conflict[duplicate_printed_integrand] ss4" in out
    assert "conflict[printed_row_mismatch] ss6" in out
    assert "pole at x = 1" in out
    assert "4*pi/15" in out


def test_scan_s7_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "scan-s7")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["rows"]) == 16
    assert len(payload["conflicts"]) == 3
    assert payload["pattern_matches"]["ss6"] is None
    divergent = [r for r in payload["rows"] if r["value"] is None]
    assert len(divergent) == 1 and divergent[0]["note"].startswith("pole")


# --- catalog ---

def test_catalog_text(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 19
    assert any(line.startswith("S3-f") and "pi/4" in line for line in lines)


def test_catalog_dump_is_canonical_json(capsys):
    code, out, _ = run(capsys, "catalog", "--dump")
    assert code == 0
    assert out == builtin_catalog().to_json_str()


def test_catalog_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "catalog")
    assert code == 0
    payload = json.loads(out)
    assert len(payload) == 19
    by_id = {entry["id"]: entry for entry in payload}
    assert by_id["S7-g"]["expected"] == "sqrt(3)*pi/5"
    assert by_id["S7-f"]["integrand"] == "(1-x^6)(1-x^10)(1+x^12)/(1+x^30)"


# --- global behavior ---

def test_no_args_is_usage_error(capsys):
    code, out, err = run(capsys)
    assert code == 2


def test_unknown_command_is_usage_error(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 2
    assert "frobnicate" in err


def test_low_precision_rejected(capsys):
    code, _, err = run(capsys, "--precision", "5", "roughs", "3", "--limit", "10")
    assert code == 2
    assert "precision" in err


def test_seedless_flag_accepted(capsys):
    code, out, _ = run(capsys, "--seedless", "roughs", "3", "--limit", "9")
    assert code == 0
    assert out.split() == ["1", "3", "5", "7", "9"]


def test_help_exits_zero(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0
    assert "verify" in out
