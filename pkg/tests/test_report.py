import math
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import pytest

from isarlimits import report

GOLDEN = Path(__file__).parent / "golden" / "csv_headers.txt"


def golden():
    out = {}
    for line in GOLDEN.read_text().splitlines():
        name, header = line.split(" ", 1)
        out[name] = header
    return out


@pytest.mark.parametrize("name", sorted(golden()))
def test_headers_pinned(name):
    assert ",".join(getattr(report, name)) == golden()[name]


def test_fmt():
    assert report.fmt(True) == "true"
    assert report.fmt(0.1) == "0.1"
    assert report.fmt(np.float64(2.5)) == "2.5"
    assert report.fmt(math.nan) == "nan"
    assert report.fmt(datetime(2024, 7, 5, 11, 3, 7, tzinfo=timezone.utc)) == "2024-07-05T11:03:07Z"


def test_to_csv_layout():
    text = report.to_csv(["a", "b"], [[1, 0.5], ["x,y", False]])
    assert text == 'a,b\n1,0.5\n"x,y",false\n'
    with pytest.raises(ValueError):
        report.to_csv(["a"], [[1, 2]])
