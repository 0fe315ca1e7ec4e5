import json
from fractions import Fraction

import pytest

from hkcert.bounds import BoundSpec, GeneralBoundObjective, HBoundObjective
from hkcert.certify import certify_point, cover_range, prove_dimension
from hkcert.report import (
    ReportDocument,
    ScalarResult,
    SeriesResult,
    TableResult,
    dumps,
    loads,
    parse,
    serialize,
    surface_csv,
    surface_grid,
    surface_svg,
)
from hkcert.search import SearchParams, optimize_bound
from hkcert.targets import verify_quadric_identities

F = Fraction
FAST = SearchParams(grid=(60, 30), refine_rounds=1)


def _roundtrip(payload, verdict=None):
    doc = ReportDocument.build("test", {"alpha": "1/3", "n": 4}, payload, verdict)
    again = loads(dumps(doc))
    assert again == doc
    return again


class TestRoundTrip:
    def test_scalar(self):
        back = _roundtrip(ScalarResult("nu", F(7, 8)))
        assert back.payload.value == F(7, 8)

    def test_scalar_reduces_to_lowest_terms(self):
        doc = ReportDocument.build("test", {}, ScalarResult("x", F(2, 4)))
        data = serialize(doc)
        assert data["payload"]["value"]["exact"] == "1/2"

    def test_table(self):
        payload = TableResult(
            name="rows",
            columns=("e", "value", "ok"),
            rows=({"e": 6, "value": F(71, 67), "ok": True},
                  {"e": 7, "value": F(1, 3), "ok": False}),
        )
        back = _roundtrip(payload)
        assert back.payload.rows[0]["value"] == F(71, 67)

    def test_series(self):
        _roundtrip(SeriesResult((F(1), F(1, 2), F(1, 3))))

    def test_candidate(self):
        cand = optimize_bound(HBoundObjective(7, 7), FAST)
        _roundtrip(cand)

    def test_certificate(self):
        cert = certify_point(HBoundObjective(6, 7), F("2.84243"), F("0.8"), F(71, 67))
        _roundtrip(cert)

    def test_certificate_general(self):
        cert = certify_point(
            GeneralBoundObjective(BoundSpec(8, 21, 19, 4)),
            F("2.17991"), F("0.706957"), F(8341, 8064),
        )
        _roundtrip(cert)

    def test_coverage_plan(self):
        plan = cover_range(7, 1, 13, 40, F(71, 67), FAST)
        back = _roundtrip(plan, verdict="complete")
        assert back.payload == plan

    def test_coverage_plan_with_gaps(self):
        plan = cover_range(8, 4, 6, 7, F(8341, 8064), FAST)
        assert plan.gaps
        _roundtrip(plan)

    def test_proof_report(self):
        report = prove_dimension(2, 1, FAST)
        back = _roundtrip(report, verdict=report.verdict)
        assert back.payload == report

    def test_proof_report_dim7(self):
        report = prove_dimension(7, 1, FAST)
        back = _roundtrip(report, verdict="proved")
        assert back.payload == report

    def test_identity_report(self):
        _roundtrip(verify_quadric_identities(19))

    def test_surface(self):
        grid = surface_grid(7, 7, grid=(8, 6))
        back = _roundtrip(grid)
        assert back.payload == grid

    def test_timestamp_survives(self):
        doc = ReportDocument.build("test", {}, ScalarResult("x", F(1, 2)))
        assert doc.timestamp is not None
        assert loads(dumps(doc)).timestamp == doc.timestamp

    def test_no_timestamp(self):
        doc = ReportDocument.build("test", {}, ScalarResult("x", F(1, 2)),
                                   timestamp=False)
        assert doc.timestamp is None

    def test_unknown_payload_rejected(self):
        with pytest.raises(TypeError):
            serialize(ReportDocument.build("test", {}, object()))
        with pytest.raises(ValueError):
            parse({"schema_version": "1", "command": "x", "params": {},
                   "payload": {"payload_kind": "mystery"},
                   "verdict": None, "timestamp": None})


class TestSurfaceGrid:
    def test_max_matches_unrefined_optimizer(self):
        grid = surface_grid(7, 7, grid=(60, 40))
        cand = optimize_bound(
            HBoundObjective(7, 7),
            SearchParams(grid=(60, 40), refine_rounds=0),
        )
        value, s_at, t_at = grid.max_cell()
        assert abs(value - cand.value) <= 1e-6
        assert (s_at, t_at) == (cand.s_exact, cand.t_exact)

    def test_reference_max_dim7(self):
        grid = surface_grid(7, 7, grid=(200, 100))
        assert grid.max_cell()[0] >= 1.06046

    def test_reference_max_dim8(self):
        grid = surface_grid(8, 21, mu=19, k=4, grid=(200, 100))
        assert grid.max_cell()[0] >= 1.03535

    def test_degenerate_box_all_ones(self):
        grid = surface_grid(7, 7, grid=(2, 2), s_range=(0, 0), t_range=(0, 0))
        assert all(v == 1.0 for row in grid.values for v in row)

    def test_requires_mu_for_other_k(self):
        with pytest.raises(ValueError):
            surface_grid(8, 21, k=4)

    def test_rejects_tiny_grid(self):
        with pytest.raises(ValueError):
            surface_grid(7, 7, grid=(1, 5))


class TestRenderings:
    def test_csv_shape(self):
        grid = surface_grid(7, 7, grid=(5, 4))
        text = surface_csv(grid)
        lines = text.strip().splitlines()
        assert lines[0] == "s,t,value"
        assert len(lines) == 1 + 5 * 4
        s, t, v = lines[1].split(",")
        assert float(s) == 0.0 and float(t) == 0.0 and float(v) == 1.0

    def test_csv_values_are_lossless(self):
        grid = surface_grid(7, 7, grid=(4, 3))
        for line in surface_csv(grid).strip().splitlines()[1:]:
            _, _, v = line.split(",")
            assert float(v) in {x for row in grid.values for x in row}

    def test_svg_deterministic_and_marked(self):
        grid = surface_grid(7, 7, grid=(40, 30))
        a = surface_svg(grid, F(1))
        b = surface_svg(grid, F(1))
        assert a == b
        assert a.startswith("<svg")
        assert a.count("<rect") == 40 * 30
        assert "stroke" in a  # some cell exceeds the target level
        above = sum(1 for row in grid.values for v in row if v > 1.0)
        assert a.count("stroke-width") == above

    def test_svg_without_target(self):
        grid = surface_grid(7, 7, grid=(6, 5))
        assert "stroke" not in surface_svg(grid, None)


def test_json_is_sorted_and_stable():
    doc = ReportDocument.build("test", {"b": 1, "a": 2},
                               ScalarResult("x", F(3, 4)), timestamp=False)
    text = dumps(doc)
    assert text == dumps(doc)
    data = json.loads(text)
    assert list(data) == sorted(data)
