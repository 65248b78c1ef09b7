"""End-to-end exercises of the mapcert command line through main()."""

import json

import numpy as np
import pytest

from mapcert.cli import main
from mapcert.documents import (
    matrix_to_payload,
    parse_certificate_document,
    parse_map_file,
)


def write_doc(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def transpose_doc(tmp_path, name="transpose.json"):
    return write_doc(
        tmp_path,
        name,
        {
            "kind": "conjugation",
            "dim_in": 2,
            "dim_out": 2,
            "payload": matrix_to_payload(np.eye(2)),
            "transposed": True,
        },
    )


def test_version_flag(capsys):
    assert main(["--version"]) == 0
    assert "mapcert" in capsys.readouterr().out


def test_missing_subcommand_is_a_usage_error(capsys):
    assert main([]) == 2
    capsys.readouterr()


def test_analyze_transpose_map(tmp_path, capsys):
    code = main(["analyze", transpose_doc(tmp_path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "map: conjugation 2 -> 2 (transposed)" in out
    assert "Optimal: Certified  (weak span 4 / 4)" in out
    assert "Exposed: Certified  (strong span 6 / 6)" in out


def test_analyze_is_deterministic(tmp_path, capsys):
    path = transpose_doc(tmp_path)
    main(["analyze", path])
    first = capsys.readouterr().out
    main(["analyze", path])
    assert capsys.readouterr().out == first


def test_analyze_writes_json_report(tmp_path, capsys):
    report_path = tmp_path / "report.json"
    code = main(["analyze", transpose_doc(tmp_path), "--json", str(report_path)])
    capsys.readouterr()
    assert code == 0
    doc = parse_certificate_document(report_path.read_bytes())
    assert doc.seed == 0
    claims = {c["claim"]: c["verdict"] for c in doc.certificates}
    assert claims == {"Optimal": "Certified", "Exposed": "Certified"}
    assert doc.zero_set_summary["weak_span_dim"] == 4
    assert doc.zero_set_summary["strong_span_dim"] == 6
    assert doc.zero_set_summary["saturated"] is True


def test_analyze_flags_negative_map(tmp_path, capsys):
    # diag(1, -1) conjugation choi is Hermitian but not positive
    choi = np.diag([1.0, 0.0, 0.0, -1.0])
    path = write_doc(
        tmp_path,
        "bad.json",
        {"kind": "choi", "dim_in": 2, "dim_out": 2, "payload": matrix_to_payload(choi)},
    )
    code = main(["analyze", path])
    out = capsys.readouterr().out
    assert code == 3
    assert "positivity heuristic: FAILED" in out


def test_analyze_missing_file(tmp_path, capsys):
    code = main(["analyze", str(tmp_path / "absent.json")])
    err = capsys.readouterr().err
    assert code == 2
    assert "error:" in err


def test_analyze_schema_error(tmp_path, capsys):
    path = write_doc(tmp_path, "broken.json", {"kind": "soup"})
    assert main(["analyze", path]) == 2
    assert "kind" in capsys.readouterr().err


def test_analyze_rejects_bad_tol(tmp_path, capsys):
    code = main(["analyze", transpose_doc(tmp_path), "--tol", "-1"])
    capsys.readouterr()
    assert code == 2


def test_sweep_small_grid(capsys):
    code = main(["sweep", "--n-range", "2", "--m-range", "2..3"])
    out = capsys.readouterr().out
    assert code == 0
    assert "rank-2 count check" in out
    assert "dimension sweep" in out
    # n=2, m=3, rank 2: input rule 10, output rule 9
    assert any(line.split()[:6] == ["2", "3", "2", "10", "10", "9"] for line in out.splitlines())


def test_sweep_is_deterministic(capsys):
    argv = ["sweep", "--n-range", "2", "--m-range", "2", "--seed", "5"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_sweep_json_report(tmp_path, capsys):
    report_path = tmp_path / "sweep.json"
    code = main(["sweep", "--n-range", "2", "--m-range", "2", "--json", str(report_path)])
    capsys.readouterr()
    assert code == 0
    doc = parse_certificate_document(report_path.read_bytes())
    # one rank-2 check plus the (1, 2)-rank grid cells
    assert len(doc.sweep) == 3
    assert all(r["agrees_with"] != "neither" for r in doc.sweep)


def test_sweep_rejects_bad_range(capsys):
    assert main(["sweep", "--n-range", "3..2"]) == 2
    capsys.readouterr()


def test_generate_conjugation_round_trip(capsys):
    code = main(["generate", "--kind", "conjugation", "--n", "2", "--m", "3", "--rank", "1"])
    out = capsys.readouterr().out
    assert code == 0
    doc = parse_map_file(out)
    assert (doc.kind, doc.dim_in, doc.dim_out) == ("conjugation", 2, 3)
    assert doc.transposed is True
    assert doc.meta["rank"] == "1"


def test_generate_is_deterministic(capsys):
    argv = ["generate", "--kind", "random-cp", "--n", "2", "--m", "2", "--seed", "9"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_generate_untransposed(capsys):
    code = main(
        ["generate", "--kind", "conjugation", "--n", "2", "--m", "2", "--no-transposed"]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert parse_map_file(out).transposed is False


@pytest.mark.parametrize(
    "argv",
    [
        ["generate", "--kind", "random-cp", "--n", "2", "--m", "2", "--rank", "1"],
        ["generate", "--kind", "random-choi", "--n", "2", "--m", "2", "--kraus", "2"],
        ["generate", "--kind", "random-choi", "--n", "2", "--m", "2", "--transposed"],
        ["generate", "--kind", "conjugation", "--n", "0", "--m", "2"],
        ["generate", "--kind", "conjugation", "--n", "2", "--m", "3", "--rank", "5"],
    ],
)
def test_generate_flag_validation(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err


def test_generate_then_analyze_pipeline(tmp_path, capsys):
    code = main(["generate", "--kind", "random-choi", "--n", "2", "--m", "2", "--seed", "3"])
    out = capsys.readouterr().out
    assert code == 0
    path = tmp_path / "gen.json"
    path.write_text(out)
    # a Ginibre choi matrix is PSD, so its map is completely positive and
    # generically has no zeros at all
    code = main(["analyze", str(path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "Optimal: Inconclusive" in out


def test_generate_cp_then_analyze(tmp_path, capsys):
    main(["generate", "--kind", "random-cp", "--n", "2", "--m", "3", "--seed", "1"])
    doc_text = capsys.readouterr().out
    path = tmp_path / "cp.json"
    path.write_text(doc_text)
    assert main(["analyze", str(path)]) == 0
    out = capsys.readouterr().out
    assert "positivity heuristic: passed" in out
