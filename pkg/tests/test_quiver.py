import json

import pytest

from icetors.errors import SchemaError, UnsupportedAlgebraError, UsageError
from icetors.quiver import Arrow, Quiver, build_algebra, builtin, line_quiver, load_algebra


def test_line_a3_path_basis():
    alg = builtin("lineA:3")
    assert alg.dim == 6
    assert sorted(str(p) for p in alg.path_basis) == sorted(["e1", "e2", "e3", "a2", "a3", "a2a3"])
    assert alg.is_hereditary


def test_nakayama_relation_kills_long_path():
    alg = builtin("paperNakayama")
    assert alg.dim == 5
    assert "a2a3" not in {str(p) for p in alg.path_basis}
    assert not alg.is_hereditary and alg.is_nakayama


def test_single_vertex_is_the_field():
    alg = builtin("lineA:1")
    assert alg.dim == 1 and [str(p) for p in alg.path_basis] == ["e1"]


def test_unknown_builtin():
    with pytest.raises(UsageError):
        builtin("lineB:3")
    with pytest.raises(UsageError):
        builtin("lineA:0")


def test_non_composable_relation_mentions_order():
    with pytest.raises(SchemaError, match="rightmost"):
        build_algebra(line_quiver(3), [["a3", "a2"]])


def test_loop_is_infinite():
    q = Quiver(1, (Arrow("x", 1, 1),))
    with pytest.raises(UnsupportedAlgebraError):
        build_algebra(q, [], cap=50)


def test_loop_with_relation_is_finite():
    q = Quiver(1, (Arrow("x", 1, 1),))
    assert build_algebra(q, [["x", "x"]]).dim == 2


def test_non_prime_field():
    with pytest.raises(SchemaError):
        build_algebra(line_quiver(2), [], p=4)


def test_json_file_matches_builtin(tmp_path):
    data = {"vertices": 3, "arrows": [{"name": "a2", "from": 2, "to": 1}, {"name": "a3", "from": 3, "to": 2}],
            "relations": [["a2", "a3"]], "field": 2}
    f = tmp_path / "nak.json"
    f.write_text(json.dumps(data))
    alg = load_algebra(str(f))
    assert alg == builtin("paperNakayama")


def test_malformed_json(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"arrows": []}))
    with pytest.raises(SchemaError):
        load_algebra(str(f))
    g = tmp_path / "broken.json"
    g.write_text("{")
    with pytest.raises(SchemaError):
        load_algebra(str(g))


def test_missing_file():
    with pytest.raises(UsageError):
        load_algebra("/nonexistent/algebra.json")
