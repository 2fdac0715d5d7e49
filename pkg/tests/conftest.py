import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("GONLAB_HYPOTHESIS", "default"))


def rationals(bound=10, max_den=12):
    return st.builds(
        lambda p, q: Fraction(p, q),
        st.integers(-bound * max_den, bound * max_den),
        st.integers(1, max_den),
    ).filter(lambda x: abs(x) <= bound)


def positive_rationals(max_num=50, max_den=50):
    return st.builds(Fraction, st.integers(1, max_num), st.integers(1, max_den))


@pytest.fixture
def tmp_files(tmp_path):
    """Write named text files into a temp dir and return their paths."""

    def write(**files):
        out = {}
        for name, text in files.items():
            p = tmp_path / name
            p.write_text(text)
            out[name] = str(p)
        return out

    return write


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion; they are printed at the end of the run."""

    def report(label: str, ok: bool, detail: str = "") -> bool:
        line = f"criterion {label}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
        print(line)
        _ACCEPTANCE_LINES.append(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
