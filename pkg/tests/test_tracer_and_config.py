import logging
from fractions import Fraction

import pytest

from onb_uniformity.core import config
from onb_uniformity.core import logger as logger_module
from onb_uniformity.core.errors import (
    DimensionMismatchError,
    DomainError,
    InvalidDimensionError,
    OnbLabError,
    ResourceLimitError,
    UsageError,
)
from onb_uniformity.routes.dto import CheckResult, ReportResults, parse_rational, rational_string
from onb_uniformity.tracer import get_operation_calls, get_operation_stats, reset_traces, trace_operation


@trace_operation("square")
def square(x):
    return x * x


@trace_operation("explode")
def explode():
    raise DomainError("bad input")


class TestTracer:

    def test_stats_count_calls(self):
        square(2)
        square(3)
        stats = get_operation_stats()["square"]
        assert stats["count"] == 2
        assert stats["errors"] == 0
        assert stats["avg_duration_ms"] == pytest.approx(stats["total_duration_ms"] / 2)
        assert stats["max_duration_ms"] <= stats["total_duration_ms"]

    def test_errors_are_recorded_and_raised(self):
        with pytest.raises(DomainError):
            explode()
        stats = get_operation_stats()["explode"]
        assert stats["errors"] == 1
        assert stats["last_error"] == "DomainError: bad input"

    def test_calls_keep_argument_preview(self):
        square(12345)
        (call,) = get_operation_calls("square")
        assert "12345" in call.arguments
        assert call.status == "success"

    def test_reset(self):
        square(1)
        reset_traces()
        assert get_operation_stats() == {}

    def test_wrapper_keeps_metadata(self):
        assert square.__name__ == "square"


class TestConfigAndLogging:

    def test_show_config(self):
        shown = config.show_config()
        assert shown["sigma_band"] == config.SIGMA_BAND
        assert {"threads", "block_size", "fast_path_dim", "output_dir"} <= shown.keys()

    def test_configure_logging_is_idempotent(self, monkeypatch):
        root = logging.getLogger("onb_uniformity")
        monkeypatch.setattr(logger_module, "_configured", False)
        before = list(root.handlers)
        try:
            logger_module.configure_logging("debug")
            logger_module.configure_logging("warning")
            added = [handler for handler in root.handlers if handler not in before]
            assert len(added) == 1
            assert root.level == logging.WARNING
        finally:
            for handler in root.handlers[:]:
                if handler not in before:
                    root.removeHandler(handler)
            root.setLevel(logging.NOTSET)

    def test_loggers_live_under_package(self):
        assert logger_module.get_logger("custom").name == "onb_uniformity.custom"
        assert logger_module.get_logger("onb_uniformity.cli").name == "onb_uniformity.cli"


class TestErrors:

    @pytest.mark.parametrize("error", [InvalidDimensionError, DomainError, DimensionMismatchError])
    def test_value_errors(self, error):
        assert issubclass(error, ValueError)
        assert issubclass(error, OnbLabError)

    def test_resource_limit_is_not_a_value_error(self):
        assert not issubclass(ResourceLimitError, ValueError)

    def test_usage_error_carries_help(self):
        error = UsageError("missing --seed", "usage: onb-lab")
        assert str(error) == "missing --seed"
        assert error.help_text == "usage: onb-lab"


class TestReportTypes:

    def test_rationals(self):
        assert rational_string(Fraction(1, 3)) == "1/3"
        assert rational_string(Fraction(-6, 4)) == "-3/2"
        assert parse_rational("1/3") == Fraction(1, 3)

    def test_exact_values_carry_float_twin(self):
        results = ReportResults()
        results.add_exact("x", Fraction(1, 3))
        assert results.exact_values["x"] == "1/3"
        assert results.float_values["x"] == pytest.approx(1 / 3)

    def test_check_result_alias(self):
        check = CheckResult(name="c", bound_name="b", passed=True, observed=0.0, bound=1.0)
        assert check.model_dump(by_alias=True)["pass"] is True
        assert CheckResult.model_validate({"name": "c", "bound_name": "b", "pass": False,
                                           "observed": 0.0, "bound": 1.0}).passed is False
