"""
results.py: output tables and the on-disk Hall-polynomial cache.

Polynomials are serialized as ascending integer coefficient lists in q
(``q - 1`` is ``[-1, 1]``, the zero polynomial is ``[]``).  Every JSON
document is validated against a schema when it is written and when it is read.
"""

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import attrs
import jsonschema

from .errors import ConfigError
from .polynomials import IntPolyQ
from .quiver import QuiverSpec

__all__ = ["ResultTable", "HallCache", "RESULT_SCHEMA", "CACHE_SCHEMA", "SCHEMA_VERSION", "KINDS"]

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
KINDS = ("roots", "indecs", "labels", "hall-poly", "bar-matrix", "census", "verify")
POLYNOMIAL_KINDS = ("hall-poly", "bar-matrix")

_INT_LIST = {"type": "array", "items": {"type": "integer"}}

RESULT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "kind", "quiver", "labels", "entries", "provenance"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "kind": {"enum": list(KINDS)},
        "quiver": {"type": "string", "pattern": "^[0-9a-f]{16}$"},
        "labels": {"type": "array", "items": {"type": "string"}},
        "entries": {
            "type": "object",
            "additionalProperties": {"anyOf": [_INT_LIST, {"type": "integer"}, {"type": "string"}]},
        },
        "provenance": {
            "type": "object",
            "properties": {
                "primes": _INT_LIST,
                "seed": {"type": "integer"},
                "dim": _INT_LIST,
                "degree_bounds": {"type": "object", "additionalProperties": {"type": "integer"}},
            },
        },
    },
}

CACHE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "quiver", "primes", "polynomials"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "quiver": {"type": "string"},
        "primes": _INT_LIST,
        "polynomials": {"type": "object", "additionalProperties": _INT_LIST},
    },
}

Entry = Union[List[int], int, str]


def _plain(value):
    """Tuples to lists, recursively, so the schema sees JSON arrays."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@attrs.frozen
class ResultTable:
    """
    One command's output: ``labels`` fixes the row order, ``entries`` maps
    string keys to coefficient lists, integers or short strings.
    """

    kind: str = attrs.field(validator=attrs.validators.in_(KINDS))
    quiver: str
    labels: Tuple[str, ...] = attrs.field(converter=tuple)
    entries: Dict[str, Entry] = attrs.field(converter=dict)
    provenance: Dict[str, object] = attrs.field(factory=dict, converter=dict)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "kind": self.kind,
            "quiver": self.quiver,
            "labels": list(self.labels),
            "entries": _plain(self.entries),
            "provenance": _plain(self.provenance),
        }

    def to_json(self) -> str:
        doc = self.to_dict()
        jsonschema.validate(instance=doc, schema=RESULT_SCHEMA)
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ResultTable":
        """
        :raises ConfigError: on malformed JSON or a schema violation.
        """
        try:
            doc = json.loads(text)
            jsonschema.validate(instance=doc, schema=RESULT_SCHEMA)
        except (json.JSONDecodeError, jsonschema.ValidationError) as exc:
            raise ConfigError(f"not a result table: {exc}") from exc
        return cls(doc["kind"], doc["quiver"], doc["labels"], doc["entries"], doc["provenance"],
                   doc["schema_version"])

    def _value_text(self, value: Entry) -> str:
        if isinstance(value, list):
            return str(IntPolyQ(value)) if self.kind in POLYNOMIAL_KINDS else ",".join(map(str, value))
        return str(value)

    def to_tsv(self) -> str:
        lines = ["key\tvalue"]
        for key in sorted(self.entries):
            value = self.entries[key]
            cell = ",".join(map(str, value)) if isinstance(value, list) else str(value)
            lines.append(f"{key}\t{cell}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        header = f"# {self.kind} quiver={self.quiver}"
        if "dim" in self.provenance:
            header += " d=(" + ",".join(map(str, self.provenance["dim"])) + ")"
        lines = [header]
        if self.kind == "bar-matrix":
            cells = [[self._value_text(self.entries[f"{m},{n}"]) for n in self.labels] for m in self.labels]
            width = max([len(x) for x in self.labels] + [len(c) for row in cells for c in row] + [1])
            lines.append(" " * width + " | " + " | ".join(x.ljust(width) for x in self.labels))
            for label, row in zip(self.labels, cells):
                lines.append(label.ljust(width) + " | " + " | ".join(c.ljust(width) for c in row))
        else:
            for key in sorted(self.entries):
                lines.append(f"{key}: {self._value_text(self.entries[key])}")
        return "\n".join(line.rstrip() for line in lines) + "\n"

    def render(self, output_format: str) -> str:
        if output_format == "json":
            return self.to_json()
        if output_format == "tsv":
            return self.to_tsv()
        return self.to_text()


class HallCache:
    """
    Hall polynomials persisted per (quiver digest, prime set).

    Usage:
        with HallCache(directory, quiver, primes) as cache:
            counter = HallCounter(catalog, primes, cache)
            ...

    With ``directory=None`` the cache lives in memory only.  An unreadable
    cache file is ignored with a warning and rewritten on exit.
    """

    def __init__(self, directory: Optional[Path], quiver: QuiverSpec, primes: Sequence[int]) -> None:
        self.quiver = quiver.digest()
        self.primes = tuple(sorted(primes))
        self.path = None
        if directory is not None:
            self.path = Path(directory) / f"{self.quiver}-{'-'.join(map(str, self.primes))}.json"
        self._polys: Dict[str, IntPolyQ] = {}
        self._dirty = False

    def __enter__(self) -> "HallCache":
        self.load()
        return self

    def load(self) -> None:
        if self.path is None or not self.path.exists():
            return
        try:
            doc = json.loads(self.path.read_text(encoding="utf-8"))
            jsonschema.validate(instance=doc, schema=CACHE_SCHEMA)
        except (OSError, json.JSONDecodeError, jsonschema.ValidationError) as exc:
            logger.warning("ignoring unreadable cache %s: %s", self.path, exc)
            return
        if doc["quiver"] != self.quiver or tuple(doc["primes"]) != self.primes:
            logger.warning("ignoring cache %s written for another quiver or prime set", self.path)
            return
        self._polys = {key: IntPolyQ(coeffs) for key, coeffs in doc["polynomials"].items()}
        logger.info("loaded %d Hall polynomials from %s", len(self._polys), self.path)

    def get(self, key: str) -> Optional[IntPolyQ]:
        return self._polys.get(key)

    def put(self, key: str, poly: IntPolyQ) -> None:
        if self._polys.get(key) != poly:
            self._polys[key] = poly
            self._dirty = True

    def __len__(self) -> int:
        return len(self._polys)

    def save(self) -> None:
        if self.path is None or not self._dirty:
            return
        doc = {
            "schema_version": SCHEMA_VERSION,
            "quiver": self.quiver,
            "primes": list(self.primes),
            "polynomials": {key: list(poly.coeffs) for key, poly in sorted(self._polys.items())},
        }
        jsonschema.validate(instance=doc, schema=CACHE_SCHEMA)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                json.dump(doc, handle, indent=1, sort_keys=True)
            os.replace(tmp, self.path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
        self._dirty = False
        logger.info("saved %d Hall polynomials to %s", len(self._polys), self.path)

    def __exit__(self, exc_type, exc_value, traceback) -> None:
        """Write back on every exit, including after a failed computation."""
        self.save()
