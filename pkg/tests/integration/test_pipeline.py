"""End-to-end runs over the shipped fixtures."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from pvas_bound import DecideOptions, decide
from pvas_bound.adapters.text_format import parse_gvas
from pvas_bound.cli import EXIT_OK, main
from pvas_bound.core.pvas import reduce_to_gvas
from pvas_bound.fixtures import ackermann, ackermann_gvas, fixture_gvas, fixture_pvas, fixture_text
from pvas_bound.models.verdict import BoundedProof, VerdictKind


def _write(tmp_path: Path, name: str, text: str) -> str:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestFixtureVerdicts:
    @pytest.mark.parametrize(
        ("name", "kind"),
        [
            ("g1", VerdictKind.UNBOUNDED),
            ("decreasing", VerdictKind.BOUNDED),
            ("ackermann1", VerdictKind.BOUNDED),
            ("ackermann2", VerdictKind.BOUNDED),
            ("ackermann1_init5", VerdictKind.BOUNDED),
        ],
    )
    def test_grammars(self, name: str, kind: VerdictKind) -> None:
        assert decide(fixture_gvas(name)).kind is kind

    @pytest.mark.parametrize(
        ("name", "maximum"), [("doubling", 6), ("ackermann0", 2), ("ackermann1", 3)]
    )
    def test_reduced_pvas(self, name: str, maximum: int) -> None:
        verdict = decide(reduce_to_gvas(fixture_pvas(name)))
        assert verdict.kind is VerdictKind.BOUNDED
        assert verdict.proof is BoundedProof.ORACLE_CLOSURE
        assert verdict.reach_set is not None
        assert max(verdict.reach_set) == maximum

    @pytest.mark.parametrize("value", [0, 1, 4])
    def test_ackermann_closure_values(self, value: int) -> None:
        verdict = decide(ackermann_gvas(2, c_init=value), DecideOptions(oracle_schedule=(64,)))
        assert verdict.reach_set is not None
        assert max(verdict.reach_set) == ackermann(2, value)


class TestCommandLine:
    def test_decide_then_verify(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        grammar = _write(tmp_path, "g1.gvas", fixture_text("g1.gvas"))
        assert main(["decide", grammar, "--json"]) == EXIT_OK
        certificate = json.loads(capsys.readouterr().out)["certificate"]
        cert_path = _write(tmp_path, "cert.json", json.dumps(certificate))
        normalized = _write(tmp_path, "g1n.gvas", "")
        assert main(["normalize", grammar]) == EXIT_OK
        Path(normalized).write_text(capsys.readouterr().out, encoding="utf-8")
        assert main(["verify", normalized, "--certificate", cert_path, "--json"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["valid"]

    def test_reduce_then_decide(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        pvas = _write(tmp_path, "doubling.pvas", fixture_text("doubling.pvas"))
        assert main(["reduce", pvas]) == EXIT_OK
        reduced = _write(tmp_path, "doubling.gvas", capsys.readouterr().out)
        assert parse_gvas(Path(reduced).read_text(encoding="utf-8")).start == "@Run[2,0]"
        assert main(["decide", reduced, "--json"]) == EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert document["verdict"] == "bounded"
        assert document["reach_set"] == [0, 1, 2, 3, 4, 5, 6]

    def test_fixture_round_trip(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["fixture", "decreasing.gvas"]) == EXIT_OK
        path = _write(tmp_path, "d.gvas", capsys.readouterr().out)
        assert main(["oracle", path, "--json"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["values"] == [0, 1, 2, 3, 4, 5]
