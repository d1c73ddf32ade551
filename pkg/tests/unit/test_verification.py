import pytest

from snowflake_groups.algebra.hnn import HnnFamily, is_trivial, make_hnn
from snowflake_groups.algebra.presentations import make_snowflake_G
from snowflake_groups.algebra.words import substitute
from snowflake_groups.config.limits_config import Limits
from snowflake_groups.exceptions import CosetLimitError, ParameterError
from snowflake_groups.service.verification_service import (
    snowflake_to_klein_map,
    verify_cover_iso,
    verify_rewrite,
)
from tests.fixtures.sample_data import COVER_CASES


class TestVerifyRewrite:
    """Tests for the Klein-bottle rewrite check."""

    @pytest.mark.unit
    @pytest.mark.parametrize("p,q", [(3, 1), (1, 1), (2, 5)])
    def test_passes(self, p, q):
        """Round trips and relator images all check out."""
        report = verify_rewrite(p, q)
        assert report.passed
        stages = {check.stage for check in report.checks}
        assert stages == {"round_trip", "relator_images"}
        assert sum(check.stage == "round_trip" for check in report.checks) == 6

    @pytest.mark.unit
    def test_resource_errors_propagate(self, mocker):
        """Resource limits inside the rewrite check are not swallowed."""
        mocker.patch(
            "snowflake_groups.service.verification_service.is_trivial",
            side_effect=CosetLimitError(1, 2),
        )
        with pytest.raises(CosetLimitError):
            verify_rewrite(3, 1)


class TestVerifyCoverIso:
    """Tests for the index-2 cover pipeline."""

    @pytest.mark.unit
    @pytest.mark.parametrize("p,q", COVER_CASES)
    def test_passes(self, p, q):
        """Every stage passes for the standard parameter pairs."""
        report = verify_cover_iso(p, q)
        assert report.passed, report.to_dict()
        assert report.table.index == 2
        assert report.simplified.presentation.alphabet.names == ("t_0", "a_1", "b_1", "t_1")

    @pytest.mark.unit
    def test_report_dict(self):
        """The report carries index, transversal and simplified presentation."""
        data = verify_cover_iso(3, 1).to_dict()
        assert data["passed"] is True
        assert data["failed_stage"] is None
        assert data["index"] == 2
        assert data["transversal"] == ["1", "a"]
        assert data["simplified"]["generators"] == ["t_0", "a_1", "b_1", "t_1"]
        assert len(data["simplified"]["relators"]) == 3

    @pytest.mark.unit
    def test_coset_limit_marks_exhaustion(self):
        """A coset cap of 1 stops at the enumeration stage."""
        report = verify_cover_iso(3, 1, Limits(max_cosets=1))
        assert not report.passed
        assert report.resource_exhausted
        assert report.failed_stage == "enumeration"
        assert report.rewritten is None

    @pytest.mark.unit
    def test_stage_error_stops_pipeline(self, mocker):
        """A library error is recorded as the failing stage and later stages are skipped."""
        mocker.patch(
            "snowflake_groups.service.verification_service.tietze_simplify",
            side_effect=ParameterError("boom"),
        )
        report = verify_cover_iso(3, 1)
        assert report.failed_stage == "simplify"
        assert not report.resource_exhausted
        assert all(check.stage not in ("to_snowflake", "from_snowflake") for check in report.checks)
        assert report.checks[-1].detail == "boom"

    @pytest.mark.unit
    @pytest.mark.parametrize("p,q", [(3, 1), (2, 3)])
    def test_snowflake_relators_map_into_klein_form(self, p, q):
        """a -> a^2, b -> b, s -> t, t -> a t a^-1 kills every relator of G."""
        klein = make_hnn(HnnFamily.R_KLEIN, p, q)
        mapping = snowflake_to_klein_map()
        for relator in make_snowflake_G(p, q).relators:
            assert is_trivial(klein, substitute(relator, mapping))
