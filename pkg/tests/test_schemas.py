import csv
import io
import json
from pathlib import Path

import jsonschema
import pytest

from heightlab.bounds import CSV_COLUMNS
from heightlab.cli import run

SCHEMAS = Path(__file__).resolve().parent.parent / "docs" / "schemas"

CASES = [
    ("conjugate_set", ["roots", "--poly", "laguerre:5", "--bits", "128"]),
    ("mahler", ["mahler", "--poly", "laguerre:4"]),
    ("height", ["height-add", "--poly", "laguerre:4", "--a", "0,1,2,3"]),
    ("height", ["height-mult", "--coeffs=-1,-1,1", "--a", "1,-1", "--group", "sn"]),
    ("sn", ["sn", "--n", "6", "--h", "2", "--k", "3"]),
    ("sn", ["sn", "--x", "1,2,-3", "--y", "0,1,-1"]),
    ("cn", ["cn", "--n", "40"]),
    ("generator", ["check-generator", "--group", "an", "--a", "1,1,2,3,4"]),
    ("laguerre", ["laguerre", "--n", "6"]),
    ("laguerre", ["families", "laguerre", "--n", "6", "--conditions"]),
    ("report", ["verify", "--poly", "laguerre:4", "--a", "1,2,3,4", "--group", "an", "--mode", "multiplicative"]),
    ("report", ["verify", "--poly", "laguerre:5", "--a", "0,0,0,0,0", "--group", "sn", "--mode", "additive"]),
]


def load(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


@pytest.mark.parametrize("name,argv", CASES, ids=[" ".join(a[:2]) for _, a in CASES])
def test_cli_output_matches_schema(capsys, name, argv):
    assert run(argv) == 0
    jsonschema.validate(json.loads(capsys.readouterr().out), load(name))


def test_schemas_are_valid():
    for path in SCHEMAS.glob("*.schema.json"):
        jsonschema.Draft202012Validator.check_schema(json.loads(path.read_text()))


def test_report_csv_columns(capsys):
    run(["verify", "--poly", "laguerre:4", "--a", "1,2,3,4", "--group", "an", "--mode", "multiplicative", "--format", "csv"])
    reader = csv.reader(io.StringIO(capsys.readouterr().out))
    assert next(reader) == list(CSV_COLUMNS)
