import json
import logging

import attrs
import jsonschema
import pytest

from modules.errors import ConfigError
from modules.polynomials import IntPolyQ
from modules.results import HallCache, ResultTable


@pytest.fixture
def bar_table(a2):
    entries = {"P12,P12": [1], "P12,S1+S2": [-1, 1], "S1+S2,P12": [], "S1+S2,S1+S2": [1]}
    return ResultTable("bar-matrix", a2.digest(), ("P12", "S1+S2"), entries,
                       {"primes": (2, 3, 5, 7, 11, 13), "seed": 0, "dim": (1, 1)})


def test_json_round_trip(bar_table):
    text = bar_table.to_json()
    doc = json.loads(text)
    assert doc["entries"]["P12,S1+S2"] == [-1, 1]
    assert doc["provenance"]["dim"] == [1, 1]
    again = ResultTable.from_json(text)
    assert again.to_json() == text


def test_schema_rejects_bad_documents(bar_table):
    doc = bar_table.to_dict()
    doc["kind"] = "unknown"
    with pytest.raises(ConfigError):
        ResultTable.from_json(json.dumps(doc))
    with pytest.raises(ConfigError):
        ResultTable.from_json("{not json")
    broken = attrs.evolve(bar_table, entries={"P12,P12": [1.5]})
    with pytest.raises(jsonschema.ValidationError):
        broken.to_json()


def test_unknown_kind_is_rejected(a2):
    with pytest.raises(ValueError):
        ResultTable("plot", a2.digest(), (), {})


def test_text_rendering(bar_table):
    text = bar_table.render("text")
    lines = text.splitlines()
    assert lines[0].startswith("# bar-matrix quiver=")
    assert lines[0].endswith("d=(1,1)")
    assert "q - 1" in lines[2]
    assert lines[3].split("|")[1].strip() == "0"


def test_tsv_rendering(bar_table):
    lines = bar_table.render("tsv").splitlines()
    assert lines[0] == "key\tvalue"
    assert "P12,S1+S2\t-1,1" in lines
    assert "S1+S2,P12\t" in lines


def test_list_rendering_outside_polynomial_kinds(a2):
    table = ResultTable("labels", a2.digest(), ("P12",), {"P12": [0, 1, 0]})
    assert "P12: 0,1,0" in table.render("text")


def test_cache_persists(tmp_path, a2):
    with HallCache(tmp_path, a2, (2, 3, 5)) as cache:
        cache.put("P12|S1|S2", IntPolyQ((1,)))
        cache.put("S1^2|S1|S1", IntPolyQ((1, 1)))
    files = list(tmp_path.glob("*.json"))
    assert [f.name for f in files] == [f"{a2.digest()}-2-3-5.json"]
    with HallCache(tmp_path, a2, (5, 3, 2)) as cache:
        assert len(cache) == 2
        assert cache.get("S1^2|S1|S1") == IntPolyQ((1, 1))


def test_cache_for_other_primes_starts_empty(tmp_path, a2):
    with HallCache(tmp_path, a2, (2, 3, 5)) as cache:
        cache.put("P12|S1|S2", IntPolyQ((1,)))
    with HallCache(tmp_path, a2, (2, 3, 7)) as cache:
        assert len(cache) == 0


def test_unreadable_cache_is_ignored(tmp_path, a2, caplog):
    cache = HallCache(tmp_path, a2, (2, 3, 5))
    cache.path.write_text("garbage", encoding="utf-8")
    with caplog.at_level(logging.WARNING):
        with cache:
            assert len(cache) == 0
            cache.put("P12|S1|S2", IntPolyQ((1,)))
    assert "ignoring unreadable cache" in caplog.text
    assert json.loads(cache.path.read_text(encoding="utf-8"))["polynomials"] == {"P12|S1|S2": [1]}


def test_memory_cache_writes_nothing(tmp_path, a2):
    with HallCache(None, a2, (2, 3, 5)) as cache:
        cache.put("P12|S1|S2", IntPolyQ((1,)))
        assert cache.path is None
    assert not list(tmp_path.iterdir())


def test_failed_save_leaves_no_temporary_file(tmp_path, a2, monkeypatch):
    def full_disk(*args, **kwargs):
        raise OSError("no space left on device")

    cache = HallCache(tmp_path, a2, (2, 3, 5))
    cache.put("P12|S1|S2", IntPolyQ((1,)))
    monkeypatch.setattr(json, "dump", full_disk)
    with pytest.raises(OSError):
        cache.save()
    assert not list(tmp_path.iterdir())
