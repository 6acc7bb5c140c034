import csv
import json
import time

import pytest

from isarlimits import recipes


@pytest.mark.parametrize("name", recipes.names())
def test_recipe_runs_and_writes_manifest(name, tmp_path):
    t0 = time.perf_counter()
    recipes.run(name, tmp_path)
    elapsed = time.perf_counter() - t0
    assert elapsed < 60
    man = json.loads((tmp_path / f"{name}.manifest.json").read_text())
    assert man["recipe"] == name and man["anchor"]
    csvs = sorted(tmp_path.glob(f"{name}*.csv"))
    assert csvs
    for path in csvs:
        with path.open() as fh:
            assert len(list(csv.reader(fh))) >= 2


def test_unknown_recipe(tmp_path):
    with pytest.raises(KeyError):
        recipes.run("fig1", tmp_path)
