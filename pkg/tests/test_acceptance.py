"""One test per acceptance criterion; each prints a single pass/fail headline."""

from __future__ import annotations

import pytest

from qdimer.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, tmp_path, capsys):
    res = run_criterion(k, seed=0, out_dir=tmp_path)
    with capsys.disabled():
        print()
        print(res.headline())
        for line in res.lines:
            print(line)
    assert res.passed, "\n".join([res.headline(), *res.lines])
