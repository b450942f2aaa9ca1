"""Tests for JSON documents and Graphviz output."""

from __future__ import annotations

import json

import pytest
from pydantic import ValidationError

from pvas_bound.adapters.json_codec import (
    certificate_document,
    dump_json,
    flow_tree_document,
    load_certificate,
    load_flow_tree,
    parse_path,
    parse_tree_document,
    to_dot,
)
from pvas_bound.core.errors import FormatError
from pvas_bound.fixtures import fixture_certificate, fixture_text
from pvas_bound.models.flowtree import NEG_INF
from pvas_bound.models.grammar import ParseTree


class TestLoad:
    def test_bare_tree(self) -> None:
        flow = load_flow_tree(fixture_text("ackermann1_init5.json"))
        assert flow.symbol == "X_1"
        assert flow.out_value == NEG_INF
        assert len(flow.children) == 3

    def test_tree_member_of_certificate(self) -> None:
        flow = load_flow_tree(fixture_text("g1_certificate.json"))
        assert flow.children[1].in_value == 1

    def test_certificate_paths(self) -> None:
        cert = load_certificate(fixture_text("g1_certificate.json"))
        assert (cert.s, cert.t) == ((), (1,))

    def test_explicit_paths_override(self) -> None:
        cert = load_certificate(fixture_text("g1_certificate.json"), s=(), t=(0,))
        assert cert.t == (0,)

    def test_bare_tree_needs_paths(self) -> None:
        with pytest.raises(FormatError, match="needs paths"):
            load_certificate(fixture_text("ackermann1_init5.json"))
        cert = load_certificate(fixture_text("ackermann1_init5.json"), s=(), t=(1,))
        assert cert.flow.node(cert.t).symbol == "X_1"

    def test_syntax_error_position(self) -> None:
        with pytest.raises(FormatError) as info:
            load_flow_tree('{\n  "sym": "S",\n  "in": }')
        assert info.value.line == 3

    def test_schema_error(self) -> None:
        with pytest.raises(ValidationError):
            load_flow_tree(json.dumps({"sym": "S", "in": "seven"}))


class TestDump:
    def test_certificate_document(self) -> None:
        document = certificate_document(fixture_certificate("g1_certificate"))
        assert document["s"] == []
        assert document["t"] == [1]
        assert document["tree"]["children"][1]["out"] == "-inf"

    def test_dump_round_trip(self) -> None:
        cert = fixture_certificate("g1_certificate")
        assert load_certificate(dump_json(certificate_document(cert))) == cert
        assert load_flow_tree(dump_json(flow_tree_document(cert.flow))) == cert.flow

    def test_parse_tree_document(self) -> None:
        tree = ParseTree(symbol="S", children=(ParseTree(symbol=1), ParseTree(symbol=None)))
        assert parse_tree_document(tree) == {
            "sym": "S",
            "children": [{"sym": 1, "children": []}, {"sym": None, "children": []}],
        }


class TestPaths:
    def test_parse_path(self) -> None:
        assert parse_path("0.1.1") == (0, 1, 1)
        assert parse_path("root") == ()
        assert parse_path("") == ()

    def test_bad_path(self) -> None:
        with pytest.raises(FormatError):
            parse_path("0.x")


class TestDot:
    def test_marked_nodes(self) -> None:
        cert = fixture_certificate("g1_certificate")
        dot = to_dot(cert.flow, (cert.s, cert.t))
        assert dot.startswith("digraph flow {")
        assert dot.count("peripheries=2") == 2
        assert "n0 -> n1;" in dot
        assert "eps\\n-inf | -inf" in dot
