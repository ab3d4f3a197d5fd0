import json

import numpy as np
import pytest

from apps.circuit import solve_circuit
from errors import SpecFormatError
from solver.homogeneous import solve_homogeneous
from storage import (
    ChainReader,
    CsvReader,
    CsvWriter,
    GraphReader,
    NetlistReader,
    ProblemReader,
    ResultWriter,
    RunManifest,
    convert_units,
)

EXPECTED_TIME = {
    "target": [1],
    "terminal": {"values": [0.0, 0.0]},
    "driver": {"type": "affine", "g": [1.0, 0.0]},
    "constants": {"c": 1.0},
}
UNIT_CHAIN = {"rates": [[-1.0, 0.0], [1.0, 0.0]]}

NETLIST = """\
* делитель напряжения
V in 1
R in mid 1k   # верхнее плечо
R mid gnd 1000

V gnd 0
"""


@pytest.mark.parametrize("token,value", [("1k", 1e3), ("4.7u", 4.7e-6), ("2meg", 2e6), ("1e-3", 1e-3),
                                         ("10", 10.0), ("3M", 3e-3)])
def test_convert_units(token, value):
    assert convert_units(token) == pytest.approx(value, rel=1e-12)


@pytest.mark.parametrize("token", ["3x", "k1", ""])
def test_convert_units_rejects_garbage(token):
    with pytest.raises(SpecFormatError):
        convert_units(token)


def test_netlist_with_comments():
    circuit = NetlistReader.parse(NETLIST)
    assert circuit.nodes == ("in", "mid", "gnd")
    assert circuit.sources == {0: 1.0, 2: 0.0}
    assert solve_circuit(circuit).u[1] == pytest.approx(0.5, abs=1e-10)


def test_netlist_error_names_line():
    with pytest.raises(SpecFormatError) as err:
        NetlistReader.parse("V in 1\nR in\n")
    assert err.value.fields["line"] == 2
    with pytest.raises(SpecFormatError) as err:
        NetlistReader.parse("V in 1\nV gnd 0\nR in gnd 1q\n")
    assert err.value.fields["line"] == 3


def test_csv_round_trip_is_exact(tmp_path):
    rows = [(0, 0.1), (1, 1 / 3), (2, 1e-300)]
    path = CsvWriter.write(tmp_path / "out" / "values.csv", ["state", "value"], rows, {"mode": "homogeneous"})
    assert path.read_text(encoding="utf-8").startswith('# {"mode": "homogeneous"}\nstate,value\n')
    metadata, records = CsvReader.read(path)
    assert metadata == {"mode": "homogeneous"}
    assert [r["value"] for r in records] == [0.1, 1 / 3, 1e-300]
    assert records[2]["state"] == 2.0


def test_csv_reader_requires_metadata(tmp_path):
    path = tmp_path / "plain.csv"
    path.write_text("state,value\n0,1.0\n", encoding="utf-8")
    with pytest.raises(ValueError):
        CsvReader.read(path)


def test_manifest_digest_ignores_wall_clock(tmp_path):
    source = tmp_path / "input.json"
    source.write_text("{}", encoding="utf-8")
    first = RunManifest("solve", seed=1, tolerances={"residual": 1e-10})
    second = RunManifest("solve", seed=1, tolerances={"residual": 1e-10})
    for manifest in (first, second):
        manifest.add_input(source)
    first.finish()
    assert first.digest() == second.digest()
    assert "_started" not in first.to_dict()
    assert "wall_clock" not in first.stable_dict()
    assert RunManifest("solve", seed=2).digest() != RunManifest("solve", seed=1).digest()


def test_result_writer_updates_manifest(tmp_path):
    manifest = RunManifest("solve")
    path = ResultWriter.emit(tmp_path, manifest, ["state", "u"], [(0, 1.0)], {"mode": "homogeneous"})
    assert path.name == "solve.csv"
    stored = json.loads((tmp_path / "solve.manifest.json").read_text(encoding="utf-8"))
    assert set(stored["outputs"]) == {"solve.csv"}
    metadata, _rows = CsvReader.read(path)
    assert metadata["command"] == "solve" and metadata["mode"] == "homogeneous"


def test_problem_reader_inline_chain(tmp_path):
    p = ProblemReader.from_dict({"chain": UNIT_CHAIN, **EXPECTED_TIME}, tmp_path)
    assert p.c == 1.0
    np.testing.assert_allclose(solve_homogeneous(p).u, [1.0, 0.0], atol=1e-10)


def test_problem_reader_chain_file(write_json):
    write_json("chain.json", UNIT_CHAIN)
    path = write_json("problem.json", {"chain_file": "chain.json", **EXPECTED_TIME})
    p = ProblemReader.read(path)
    assert p.target == frozenset({1})
    assert [f.name for f in ProblemReader.input_files(path)] == ["problem.json", "chain.json"]


def test_problem_reader_requires_driver(tmp_path):
    with pytest.raises(SpecFormatError) as err:
        ProblemReader.from_dict({"chain": UNIT_CHAIN, "target": [1]}, tmp_path)
    assert err.value.fields["field"] == "driver"


def test_chain_reader_checks_declared_size():
    with pytest.raises(SpecFormatError):
        ChainReader.from_dict({"n": 3, **UNIT_CHAIN})
    named = ChainReader.from_dict({"state_names": ["busy", "done"], **UNIT_CHAIN})
    assert named.state_names == ("busy", "done")


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(SpecFormatError):
        ChainReader.read(tmp_path / "absent.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{\n  \"rates\": [", encoding="utf-8")
    with pytest.raises(SpecFormatError) as err:
        ChainReader.read(broken)
    assert err.value.fields["line"] == 2


def test_graph_reader():
    g = GraphReader.from_dict({
        "nodes": ["a", "b", "c"],
        "edges": [{"from": "a", "to": "b", "distance": 1}, {"from": "b", "to": "a", "distance": 1},
                  {"from": "b", "to": "c", "distance": 2}],
        "target": "c",
        "speedups": [{"label": "fast", "edges": [{"from": "a", "to": "b", "factor": 2}]}],
    })
    assert g.target == 2
    assert g.distances[1][2] == 2.0 and np.isinf(g.distances[2][1])
    ((label, factors),) = g.speedups
    assert label == "fast" and factors[1][0] == 2.0
    with pytest.raises(SpecFormatError):
        GraphReader.from_dict({"nodes": ["a"], "edges": [{"from": "a", "to": "z", "distance": 1}], "target": "a"})


def test_graph_reader_requires_numeric_distances():
    edges = [{"from": "a", "to": "b"}]
    with pytest.raises(SpecFormatError) as err:
        GraphReader.from_dict({"nodes": ["a", "b"], "edges": edges, "target": "b"})
    assert err.value.fields["field"] == "distance"
    edges = [{"from": "a", "to": "b", "distance": "far"}]
    with pytest.raises(SpecFormatError) as err:
        GraphReader.from_dict({"nodes": ["a", "b"], "edges": edges, "target": "b"})
    assert err.value.fields["field"] == "distance"
    edges = [{"from": "a", "to": "b", "distance": 1}]
    speedups = [{"label": "fast", "edges": [{"from": "a", "to": "b"}]}]
    with pytest.raises(SpecFormatError) as err:
        GraphReader.from_dict({"nodes": ["a", "b"], "edges": edges, "target": "b", "speedups": speedups})
    assert err.value.fields["field"] == "factor"
