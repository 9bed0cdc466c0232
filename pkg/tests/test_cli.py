import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from planegerms import cli
from planegerms.cli import flatten, run
from planegerms.equivalence import decide_equivalence, invariant_signature
from planegerms.oracle import SlopeEstimate
from planegerms.serialize import germ_to_json, load_schema, read_germ

CORPUS = Path(__file__).parent / "data" / "corpus"
SCHEMAS = {
    "invariants": "invariants",
    "expand": "expansion",
    "order": "order",
    "contact": "contact",
    "intersect": "intersect",
    "equiv": "certificate",
    "verify": "verify",
    "oracle": "oracle",
}


def call(*argv):
    out = io.StringIO()
    status = run(list(argv), out)
    text = out.getvalue()
    return status, (json.loads(text) if text.startswith("{") else text)


def corpus(name):
    return str(CORPUS / f"{name}.json")


# -- spec examples -------------------------------------------------------------------------


def test_equiv_of_two_cusps():
    assert call("equiv", corpus("cusp"), corpus("cusp_sheared")) == (0, {"verdict": "equivalent", "sigma": [0]})


def test_invariants_of_a_higher_cusp():
    status, out = call("invariants", '{"polynomial": "y^2 - x^5"}')
    assert status == 0
    assert out["factors"] == [{"mult": 1, "m": 2, "pairs": [[5, 1]], "msub": [2]}]


def test_not_equivalent_is_a_success():
    status, out = call("equiv", corpus("cusp_squared"), corpus("cusp"))
    assert status == 0
    assert out["verdict"] == "not_equivalent"
    assert out["witness"]["kind"] == "MultiplicityMultisetMismatch"


def test_read_germ_examples():
    poly = read_germ({"polynomial": "y^2 - x^3"})
    branches = read_germ({"branches": [{"m": 2, "psi": [{"exp": 3, "coeff": "1"}], "mult": 1}]})
    assert invariant_signature(poly) == invariant_signature(branches)
    status, out = call("invariants", '{"polynomial": "1 + y"}')
    assert status == 2 and out["error"]["code"] == "GermNotVanishing"


# -- exit codes and errors ------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv, code",
    [
        (["invariants", "y^2 - 2*w"], "UnknownIdentifier"),
        (["invariants", '{"branches": [{"m": 4, "psi": [{"exp": 6, "coeff": "1"}], "mult": 1}]}'], "NotIrreducible"),
        (["invariants", "y^3 - 2*x^3"], "UnsupportedExtension"),
        (["invariants", '{"polynomial": 3}'], "SchemaError"),
        (["verify", "x*y", "x*y", "--sigma", "0,5"], "InvalidCertificate"),
        (["frobnicate"], "InvalidInput"),
        (["order", "y^2 - x^3"], "InvalidInput"),
    ],
)
def test_input_errors_exit_2(argv, code):
    status, out = call(*argv)
    assert status == 2
    assert out["error"]["code"] == code
    jsonschema.validate(out, load_schema("error"))


def test_parse_errors_carry_offsets():
    _, out = call("invariants", "y^2 - 2*w")
    assert out["error"]["offset"] == 8


def test_schema_errors_carry_a_pointer():
    _, out = call("invariants", '{"branches": [{"m": 0, "psi": [], "mult": 1}]}')
    assert out["error"]["code"] == "SchemaError"
    assert out["error"]["pointer"].startswith("/branches/0")


def test_oracle_disagreement_exits_3(monkeypatch):
    monkeypatch.setattr(cli, "estimate_order", lambda *a, **k: SlopeEstimate(9.0, 0.0, 16, (1e-6, 1e-3)))
    status, out = call("order", "y^2 - x^3", "--arc", "0", "--check")
    assert status == 3 and out["error"]["code"] == "OracleMismatch"


def test_invalid_output_exits_3(monkeypatch):
    monkeypatch.setitem(cli.COMMANDS, "equiv", lambda args: ({"verdict": "maybe"}, "certificate"))
    status, out = call("equiv", "x*y", "x*y")
    assert status == 3 and out["error"]["code"] == "InternalError"


# -- every command --------------------------------------------------------------------------

RUNS = [
    ["invariants", "(y^2 - x^3)*(y - x)"],
    ["expand", "y^2 - x^2 - x^3", "--trunc", "4"],
    ["order", "y^2 - x^3", "--arc", "0", "--check"],
    ["order", "x*y", "--arc", "2*t", "--check"],
    ["contact", "y^2 - x^3", "--arc", "0", "--check"],
    ["intersect", "y*(y - x^2)*(y^2 - x^3)"],
    ["intersect", "y^2 - x^3", "y^2 - x^5"],
    ["equiv", "y*(y - x)", "(y - x)*y"],
    ["verify", "y*(y - x^2)", "y*(y - x^3)", "--sigma", "[0, 1]"],
    ["oracle", "y^2 - x^3", "--arc", "t", "--kind", "order"],
    ["oracle", "y^2 - x^3", "--arc", "0", "--kind", "contact", "--check"],
]


@pytest.mark.parametrize("argv", RUNS, ids=[" ".join(a[:2]) for a in RUNS])
def test_outputs_validate_and_text_lists_every_field(argv):
    status, out = call(*argv)
    assert status == 0, out
    jsonschema.validate(out, load_schema(SCHEMAS[argv[0]]))
    status, text = call(*argv, "--format", "text")
    assert status == 0
    assert text.splitlines() == flatten(out)
    keys = {line.split(": ", 1)[0] for line in text.splitlines()}
    for line in flatten(out):
        assert line.split(": ", 1)[0] in keys


def test_command_values():
    assert call("order", "y^2 - x^3", "--arc", "0")[1]["nu"] == "3"
    assert call("order", "(y^2 - x^3)^2", "--arc", "0")[1]["nu"] == "6"
    assert call("contact", "y^2 - x^3", "--arc", "0")[1]["contact"] == "3/2"
    assert call("intersect", "y^2 - x^3", "y^2 - x^5")[1]["total"] == 6
    assert call("verify", "y*(y - x^2)", "y*(y - x^3)", "--sigma", "0,1")[1]["valid"] is False


def test_flatten_paths():
    assert flatten({"a": {"b": [1, 2]}, "c": [{"d": None}]}) == ["a.b: [1, 2]", "c[0].d: null"]


def test_cap_from_environment(monkeypatch):
    monkeypatch.setenv("PLANEGERMS_CONDUCTOR_CAP", "2")
    assert call("invariants", "y^2 + x^2")[0] == 2
    assert call("invariants", "y^2 + x^2", "--cap", "4")[0] == 0


# -- round trips --------------------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(p.stem for p in CORPUS.glob("*.json")))
def test_round_trip_through_json(name):
    g = read_germ(corpus(name))
    again = read_germ(json.loads(json.dumps(germ_to_json(g))))
    assert decide_equivalence(g, again).verdict == "equivalent"


@pytest.mark.parametrize("poly, branches", [("cusp", "cusp_branches"), ("line_cusp_poly", "line_cusp"), ("node", "node_branches")])
def test_polynomial_and_branch_paths_agree(poly, branches):
    assert invariant_signature(read_germ(corpus(poly))) == invariant_signature(read_germ(corpus(branches)))


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "planegerms", "equiv", corpus("node_branches"), corpus("node_branches_reordered")],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "equivalent"
