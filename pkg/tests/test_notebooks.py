import runpy
from pathlib import Path

import pytest

NB = Path(__file__).resolve().parent.parent / "notebooks"


@pytest.mark.parametrize("name", ["01_degree_p2_walkthrough.py", "02_root_of_unity_sums.py"])
def test_notebook_runs(name, capsys):
    runpy.run_path(str(NB / name), run_name="__main__")
    assert capsys.readouterr().out
