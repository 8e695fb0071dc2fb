"""End-to-end checks of the command-line surface: argument handling, exit
codes, and that the emitted artifacts agree with the library calls they
wrap."""

import json
import os

import pytest

from kuengine import cli, margolis
from kuengine.render import ChartDocument


def run(argv, capsys):
    rc = cli.main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def test_groups_window_golden(capsys):
    rc, out, _ = run(["groups", "--prime", "2", "--from", "80", "--to", "84"], capsys)
    assert rc == 0
    rows = {r["degree"]: r for r in json.loads(out)}
    assert sorted(rows) == [80, 81, 82, 83, 84]
    assert rows[82]["group"] == [8, 2, 2, 2, 2, 2, 2]
    assert rows[82]["pretty"].startswith("Z/8 + Z/2")
    assert "free" not in rows[82]

    rc, out, _ = run(["groups", "--prime", "2", "--window", "7:7"], capsys)
    assert rc == 0
    assert json.loads(out) == [{"degree": 7, "group": [], "pretty": "0"}]


def test_groups_free_column_tracks_the_degree_shift(capsys):
    # the trivial Z/p summands sit 2p above the free generators they shadow,
    # and homology mode reads everything 2p higher still
    rc, out, _ = run(
        ["groups", "--prime", "2", "--from", "83", "--to", "83", "--include-free"],
        capsys,
    )
    assert rc == 0
    (coh,) = json.loads(out)
    assert coh["free"] == 245

    rc, out, _ = run(
        ["groups", "--prime", "2", "--from", "79", "--to", "79", "--homology",
         "--include-free"],
        capsys,
    )
    assert rc == 0
    (hom,) = json.loads(out)
    assert hom["free"] == 245
    assert hom["group"] == coh["group"]


def test_chart_json_writes_atomically_and_roundtrips(tmp_path, capsys):
    target = tmp_path / "a1.json"
    rc, out, _ = run(
        ["chart", "A:1", "--prime", "2", "--out", str(target)], capsys
    )
    assert rc == 0
    assert out == ""  # --out redirects everything
    assert os.listdir(tmp_path) == ["a1.json"]  # no .tmp debris
    doc = ChartDocument.from_json(target.read_text())
    assert doc.prime == 2 and doc.source == "closed-form"
    assert [(d.degree, d.filtration) for d in doc.dots] == [(8, 0), (8, 1), (10, 0)]
    assert doc.to_json() + "\n" == target.read_text()


def test_chart_emission_is_deterministic(capsys):
    rc1, svg1, _ = run(["chart", "B:3", "--prime", "2", "--format", "svg"], capsys)
    rc2, svg2, _ = run(["chart", "B:3", "--prime", "2", "--format", "svg"], capsys)
    assert rc1 == rc2 == 0
    assert svg1 == svg2
    assert svg1.startswith("<svg")


def test_chart_selector_validation(capsys):
    for argv in (
        ["chart"],  # no selector, no --einfty
        ["chart", "Q:3"],
        ["chart", "A:5", "B:4"],  # overlay blocks must agree
        ["chart", "A:5", "S:5:8"],
        ["chart", "A:1", "B:1", "S:1:2"],
        ["chart", "A:1", "--einfty", "--window", "0:40"],
        ["chart", "--einfty"],  # needs a window
        ["chart", "full-even"],  # unbounded without a window
    ):
        rc, _, err = run(argv, capsys)
        assert rc == 2, argv
        assert err.startswith("kuengine: "), argv


def test_chart_overlay_has_dashed_dots(capsys):
    rc, out, _ = run(
        ["chart", "A:5", "B:5", "--prime", "2", "--window", "68:136"], capsys
    )
    assert rc == 0
    doc = ChartDocument.from_json(out)
    flags = {d.overlay for d in doc.dots}
    assert flags == {True, False}


def test_audit_exit_codes(capsys):
    rc, out, _ = run(
        ["audit", "--which", "theorem61", "--prime", "3", "--max", "60"], capsys
    )
    assert rc == 0
    assert json.loads(out)["ok"] is True

    # the odd-primary regular-representation splitting has no p = 2 analogue
    rc, _, err = run(["audit", "--which", "theorem61", "--prime", "2"], capsys)
    assert rc == 2
    assert "kuengine:" in err


def test_audit_failure_exits_one(monkeypatch, capsys):
    monkeypatch.setattr(
        cli.k1, "bockstein_audit", lambda p, n: {"ok": False, "p": p, "n_max": n}
    )
    rc, out, _ = run(["audit", "--which", "bockstein", "--max", "10"], capsys)
    assert rc == 1
    assert json.loads(out)["ok"] is False


def test_ps_formats_agree_with_the_series(capsys):
    want = list(margolis.free_part_ps(2, 12).c)
    rc, out, _ = run(["ps", "--prime", "2", "--max", "12"], capsys)
    assert rc == 0
    assert json.loads(out) == want

    rc, out, _ = run(["ps", "--prime", "2", "--max", "12", "--format", "csv"], capsys)
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "degree,count"
    assert [int(l.split(",")[1]) for l in lines[1:]] == want


def test_usage_errors(capsys):
    for argv in (
        ["groups", "--prime", "6", "--from", "0", "--to", "4"],
        ["groups", "--prime", "2", "--from", "10"],  # --to missing
        ["groups", "--prime", "2", "--window", "9:3"],  # empty window
        ["groups", "--prime", "2", "--window", "abc"],
        ["groups", "--prime", "2"],  # no window at all
    ):
        rc, _, err = run(argv, capsys)
        assert rc == 2, argv
        assert err.startswith("kuengine: "), argv


def test_bad_subcommand_is_an_argparse_error():
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2
