import pytest
import polars as pl
from pbwcrystal.report import VerificationReport
from pbwcrystal.verify import SuiteResult


@pytest.fixture
def report():
    """Fixture for a report with one clean and one failing suite."""
    clean = SuiteResult("rank2", "B2", cases=10, seconds=0.5)
    broken = SuiteResult("transport", "A3", cases=4, counterexamples=["f_2 on (1,0)", "f_1 on (0,1)"],
                         seconds=1.25)
    return VerificationReport([broken, clean])


def test_frame_rows(report):
    """Test one row per counterexample and one row per clean suite."""
    frame = report.to_frame()
    assert frame.height == 3
    assert frame.columns == ["suite", "type", "cases", "violations", "seconds", "counterexample"]
    assert frame["suite"].to_list() == ["rank2", "transport", "transport"]
    assert frame["counterexample"].to_list() == ["", "f_1 on (0,1)", "f_2 on (1,0)"]


def test_summary_and_status(report):
    """Test the grouped summary and the pass flag."""
    summary = report.summary()
    assert summary.height == 2
    assert summary.filter(pl.col("suite") == "transport")["violations"].item() == 2
    assert not report.passed
    assert report.violations == 2
    assert VerificationReport().passed


def test_render_is_stable(report):
    """Test the plain text output without timings."""
    text = report.render()
    lines = text.splitlines()
    assert lines[0].startswith("rank2")
    assert lines[0].endswith("ok")
    assert lines[1].endswith("FAIL")
    assert "  transport A3: f_1 on (0,1)" in lines
    assert "1.25" not in text
    report.results.append(SuiteResult("convexity", "A2", cases=1))
    assert report.render().count("\n") == len(lines) + 1


def test_write_csv(report, tmp_path):
    """Test the CSV export creates its folder and reads back."""
    path = report.write_csv(tmp_path / "out" / "verification.csv")
    frame = pl.read_csv(path)
    assert frame.height == 3
    assert frame["violations"].to_list() == [0, 2, 2]
