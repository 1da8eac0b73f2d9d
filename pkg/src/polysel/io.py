"""Instance files, digests, and the report envelope.

Instances are JSON documents with the shape
  {"n": int, "d": int, "polys": [{"terms": [{"exps": [int...], "coef": number}]}]}
and are always serialized from the canonical term order, so the digest is
stable under any reordering of the input terms. Reports are plain text: an
envelope, a separator line, then a payload whose bytes are the determinism
contract (the timestamp lives in the envelope, above the separator).
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction

from .errors import InstanceFormatError
from .poly import Instance, Polynomial

VERSION = "0.1.0"
SEPARATOR = "---"


def instance_to_jsonable(instance: Instance) -> dict:
    return {
        "n": instance.n,
        "d": instance.d,
        "polys": [
            {
                "terms": [
                    {"exps": list(exps), "coef": coef}
                    for exps, coef in p.terms
                ]
            }
            for p in instance.polys
        ],
    }


def instance_from_jsonable(data) -> Instance:
    try:
        n = int(data["n"])
        d = int(data["d"])
        raw_polys = data["polys"]
        if not isinstance(raw_polys, list) or not raw_polys:
            raise InstanceFormatError("polys must be a nonempty list")
        polys = []
        for k, entry in enumerate(raw_polys):
            terms = {}
            for term in entry["terms"]:
                exps = tuple(int(e) for e in term["exps"])
                coef = float(term["coef"])
                if not math.isfinite(coef):
                    raise InstanceFormatError(
                        f"poly {k + 1}: non-finite coefficient {term['coef']!r}"
                    )
                terms[exps] = terms.get(exps, 0.0) + coef
            polys.append(Polynomial.from_dict(n, terms))
        return Instance(n=n, d=d, polys=tuple(polys))
    except InstanceFormatError:
        raise
    except Exception as exc:
        raise InstanceFormatError(f"malformed instance: {exc}") from exc


def dumps_instance(instance: Instance) -> str:
    return json.dumps(instance_to_jsonable(instance), indent=2, sort_keys=True) + "\n"


def load_instance(path: str) -> Instance:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path} is not valid JSON: {exc}") from exc
    return instance_from_jsonable(data)


def save_instance(instance: Instance, path: str):
    write_text_atomic(path, dumps_instance(instance))


def instance_digest(instance: Instance) -> str:
    blob = json.dumps(
        instance_to_jsonable(instance), sort_keys=True, separators=(",", ":")
    ).encode("utf-8")
    return "sha256:" + hashlib.sha256(blob).hexdigest()


def fmt(value) -> str:
    """Round-trip-safe scalar formatting for report payloads."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    if value is None:
        return "-"
    return str(value)


def fmt_seq(values, sep: str = ",") -> str:
    return sep.join(fmt(v) for v in values)


def kv(key: str, value) -> str:
    return f"{key}: {fmt(value)}"


def table(name: str, columns, rows) -> list[str]:
    lines = [f"table {name}", "\t".join(columns)]
    for row in rows:
        lines.append("\t".join(fmt(cell) if not isinstance(cell, str) else cell
                               for cell in row))
    lines.append("end table")
    return lines


@dataclass(frozen=True)
class Report:
    """Envelope plus payload; only the payload is covered by determinism."""

    command: str
    payload: str
    digest: str = "-"
    seed: str = "-"
    version: str = VERSION

    def render(self, timestamp: str | None = None) -> str:
        when = timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds")
        head = [
            "# polysel report",
            kv("version", self.version),
            kv("command", self.command),
            kv("instance", self.digest),
            kv("seed", self.seed),
            kv("generated_at", when),
            SEPARATOR,
        ]
        return "\n".join(head) + "\n" + self.payload


def split_payload(text: str) -> str:
    """Payload part of a rendered report (for byte-level comparisons)."""
    marker = f"\n{SEPARATOR}\n"
    pos = text.find(marker)
    if pos < 0:
        raise ValueError("not a polysel report: separator missing")
    return text[pos + len(marker):]


def write_text_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".polysel-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def emit(report: Report, out: str | None):
    text = report.render()
    if out:
        write_text_atomic(out, text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
