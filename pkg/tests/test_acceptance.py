"""Every acceptance criterion at its stated tolerance.

One line per criterion (and one per check) is printed in the terminal
summary.  Criterion 11 is the heavy tier: ``pytest --heavy``.
"""

from __future__ import annotations

import pytest

from hermcodes.acceptance import CRITERIA, HEAVY

from conftest import ACCEPTANCE_LINES


def _params():
    for num, (title, fn) in CRITERIA.items():
        marks = [pytest.mark.heavy] if num in HEAVY else []
        yield pytest.param(num, title, fn, id=f"criterion_{num:02d}", marks=marks)


@pytest.mark.parametrize("num,title,fn", list(_params()))
def test_criterion(num, title, fn):
    checks = fn()
    ok = all(c.ok for c in checks)
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title}")
    ACCEPTANCE_LINES.extend("    " + c.line() for c in checks)
    print(ACCEPTANCE_LINES[-len(checks) - 1])
    failed = [c.line() for c in checks if not c.ok]
    assert not failed, "\n".join(failed)
