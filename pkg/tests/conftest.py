import numpy as np
import pytest

from qwgo.statevector import GridDomain


@pytest.fixture
def table_objective(tmp_path):
    """Write grid values to an x,f CSV and return (path, domain) for RunConfig."""

    def make(values, lo=0.0, hi=1.0):
        values = np.asarray(values, dtype=float)
        q = int(np.log2(len(values)))
        d = GridDomain(lo, hi, q)
        path = tmp_path / f"table_{q}_{abs(hash(values.tobytes()))}.csv"
        rows = "".join(f"{float(x)!r},{float(f)!r}\n" for x, f in zip(d.coords(), values))
        path.write_text("x,f\n" + rows)
        return str(path), (lo, hi)

    return make


def pytest_terminal_summary(terminalreporter):
    from tests.test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        passed, detail = RESULTS[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}")
