import pytest

from src.diagram_pipeline import DiagramPipeline


@pytest.fixture
def pipeline(arrow_index, weq_trivial, cof_trivial):
    return DiagramPipeline(arrow_index, weq_trivial, other=cof_trivial)


class TestDiagramPipeline:
    def test_available_checks(self, pipeline):
        assert pipeline.get_available_checks() == ["objectwise", "diagdown", "induced", "adjoint",
                                                   "intersection", "delocalization"]

    def test_full_pipeline_with_second_structure(self, pipeline):
        reports = pipeline.run_full_pipeline()
        assert [r.title for r in reports] == ["objectwise", "induced-structure hypotheses", "induced",
                                              "adjoint", "intersection", "diagram delocalization"]
        assert all(r.verified for r in reports)

    def test_second_structure_checks_are_skipped_without_one(self, arrow_index, weq_trivial):
        reports = DiagramPipeline(arrow_index, weq_trivial).run_full_pipeline()
        assert len(reports) == 4

    def test_requested_check_without_second_structure(self, arrow_index, weq_trivial):
        report = DiagramPipeline(arrow_index, weq_trivial).run_check("intersection")
        assert report.status == "refuted"
        assert report.conditions[0].status == "error"
        assert "second base structure" in report.conditions[0].message

    def test_unknown_check(self, pipeline):
        with pytest.raises(ValueError, match="Unknown check"):
            pipeline.run_check("homotopy")
        assert len(pipeline.run_full_pipeline(["objectwise", "homotopy"])) == 1

    def test_intersection_report_carries_structure(self, pipeline):
        report = pipeline.run_check("intersection")
        assert report.verified
        assert report.structure is not None
        assert report.structure.weq == ["<0,0>=><0,0>", "<0,1>=><0,1>", "<1,1>=><1,1>"]

    def test_adjoint_report_has_one_condition_per_shape_object(self, pipeline):
        report = pipeline.run_check("adjoint")
        assert [c.name for c in report.conditions] == ["adjoint at 0", "adjoint at 1"]

    def test_dataframe_export(self, pipeline):
        assert pipeline.export_to_dataframe().empty
        pipeline.run_full_pipeline(["objectwise", "diagdown"])
        df = pipeline.export_to_dataframe()
        assert list(df.columns) == ["check", "condition", "status", "witness", "message"]
        assert len(df) == 7
        assert set(df["status"]) == {"pass"}

    def test_pipeline_stats(self, pipeline):
        assert pipeline.get_pipeline_stats() == {"total_checks": 0, "verified": 0}
        pipeline.run_full_pipeline(["objectwise"])
        stats = pipeline.get_pipeline_stats()
        assert stats["verified"] == 1
        assert stats["condition_status_breakdown"] == {"pass": 1}
