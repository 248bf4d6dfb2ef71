"""The ten acceptance criteria, each at its stated size and time limit.

Run directly (``python3 tests/test_acceptance.py``) for a plain report.
"""

import pytest

from contact_surgery.suites import CRITERIA, SuiteConfig


@pytest.mark.parametrize("suite", CRITERIA, ids=[f"criterion_{k}" for k in range(1, 11)])
def test_criterion(suite, capsys):
    res = suite(SuiteConfig.from_env())
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, "\n".join(res.failures)


if __name__ == "__main__":
    import sys

    ok = True
    for suite in CRITERIA:
        res = suite(SuiteConfig.from_env())
        print(res.line())
        for f in res.failures:
            print("    " + f)
        ok &= res.passed
    sys.exit(0 if ok else 1)
