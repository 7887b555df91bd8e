"""Strict parsing and deterministic serialization of spec documents.

All external documents are UTF-8 JSON.  Parsing is strict: unknown fields
are rejected, complex numbers are always [re, im] pairs, angles are
radians.  Serialization renders every float with 17 significant digits so
repeated runs produce byte-identical reports.
"""

from __future__ import annotations

import json

import numpy as np

from .action import GeneratorAction
from .algebra import AlgebraElement
from .errors import GqmInputError
from .groupoid import (
    FiniteGroupoid,
    QuiverSpec,
    from_explicit,
    from_quiver,
    group_as_groupoid,
    pair_groupoid,
)
from .states import CharacteristicFunction, delta_state

GROUPOID_KINDS = ("pair", "quiver", "explicit", "group")


def _require_object(doc, what):
    if not isinstance(doc, dict):
        raise GqmInputError("%s must be a JSON object" % what)
    return doc


def _take(doc, allowed, required, what):
    """Strict field extraction: every required key present, nothing else."""
    unknown = sorted(set(doc) - set(allowed))
    if unknown:
        raise GqmInputError(
            "unknown field(s) in %s: %s" % (what, ", ".join(unknown))
        )
    missing = sorted(set(required) - set(doc))
    if missing:
        raise GqmInputError(
            "missing field(s) in %s: %s" % (what, ", ".join(missing))
        )
    return {k: doc[k] for k in doc}


def _string_list(value, what):
    if not isinstance(value, list) or not all(
        isinstance(x, str) for x in value
    ):
        raise GqmInputError("%s must be an array of strings" % what)
    return list(value)


def _string_map(value, what):
    if not isinstance(value, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in value.items()
    ):
        raise GqmInputError("%s must map strings to strings" % what)
    return dict(value)


def _real(value, what):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise GqmInputError("%s must be a real number" % what)
    return float(value)


def parse_complex(value, what="complex value"):
    if (not isinstance(value, list) or len(value) != 2
            or any(isinstance(v, bool) or not isinstance(v, (int, float))
                   for v in value)):
        raise GqmInputError("%s must be a [re, im] pair" % what)
    return complex(value[0], value[1])


def parse_groupoid_doc(doc) -> FiniteGroupoid:
    doc = _require_object(doc, "groupoid spec")
    kind = doc.get("kind")
    if kind not in GROUPOID_KINDS:
        raise GqmInputError(
            "groupoid spec 'kind' must be one of %s" % ", ".join(GROUPOID_KINDS)
        )
    if kind == "pair":
        fields = _take(doc, ("kind", "events"), ("kind", "events"),
                       "pair groupoid spec")
        return pair_groupoid(_string_list(fields["events"], "'events'"))
    if kind == "quiver":
        fields = _take(doc, ("kind", "events", "arrows"),
                       ("kind", "events", "arrows"), "quiver spec")
        arrows = []
        if not isinstance(fields["arrows"], list):
            raise GqmInputError("'arrows' must be an array")
        for k, entry in enumerate(fields["arrows"]):
            entry = _require_object(entry, "arrow %d" % k)
            a = _take(entry, ("label", "source", "target"),
                      ("label", "source", "target"), "arrow %d" % k)
            arrows.append((a["label"], a["source"], a["target"]))
        return from_quiver(
            QuiverSpec(_string_list(fields["events"], "'events'"), arrows)
        )
    if kind == "group":
        fields = _take(doc, ("kind", "events", "elements", "identity", "table"),
                       ("kind", "events", "elements", "identity", "table"),
                       "group spec")
        events = _string_list(fields["events"], "'events'")
        if len(events) != 1:
            raise GqmInputError("a group spec declares exactly one event")
        table = {}
        if not isinstance(fields["table"], list):
            raise GqmInputError("'table' must be an array")
        for k, entry in enumerate(fields["table"]):
            entry = _require_object(entry, "table entry %d" % k)
            row = _take(entry, ("left", "right", "result"),
                        ("left", "right", "result"), "table entry %d" % k)
            key = (row["left"], row["right"])
            if key in table:
                raise GqmInputError("duplicate table entry for %r" % (key,))
            table[key] = row["result"]
        return group_as_groupoid(
            _string_list(fields["elements"], "'elements'"),
            table, fields["identity"], event=events[0],
        )
    # kind == "explicit"
    fields = _take(
        doc,
        ("kind", "events", "transitions", "source", "target", "units",
         "inverse", "compose"),
        ("kind", "events", "transitions", "source", "target", "units",
         "inverse", "compose"),
        "explicit groupoid spec",
    )
    composition = {}
    if not isinstance(fields["compose"], list):
        raise GqmInputError("'compose' must be an array")
    for k, entry in enumerate(fields["compose"]):
        entry = _require_object(entry, "compose entry %d" % k)
        row = _take(entry, ("inner", "outer", "result"),
                    ("inner", "outer", "result"), "compose entry %d" % k)
        key = (row["outer"], row["inner"])
        if key in composition:
            raise GqmInputError("duplicate compose entry for %r" % (key,))
        composition[key] = row["result"]
    return from_explicit(
        _string_list(fields["events"], "'events'"),
        _string_list(fields["transitions"], "'transitions'"),
        _string_map(fields["source"], "'source'"),
        _string_map(fields["target"], "'target'"),
        _string_map(fields["units"], "'units'"),
        _string_map(fields["inverse"], "'inverse'"),
        composition,
    )


def parse_groupoid_text(text) -> FiniteGroupoid:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GqmInputError("groupoid spec is not valid JSON: %s" % exc)
    return parse_groupoid_doc(doc)


STATE_TYPES = ("characteristic", "delta", "action", "generator-action")


def parse_state_doc(doc, g: FiniteGroupoid):
    """Returns a CharacteristicFunction for 'characteristic'/'delta', a
    potential dict for 'action', and a GeneratorAction payload dict for
    'generator-action' (the caller binds it to its quiver)."""
    doc = _require_object(doc, "state spec")
    kind = doc.get("type")
    if kind not in STATE_TYPES:
        raise GqmInputError(
            "state spec 'type' must be one of %s" % ", ".join(STATE_TYPES)
        )
    if kind == "characteristic":
        fields = _take(doc, ("type", "values"), ("type", "values"),
                       "characteristic state spec")
        values = _require_object(fields["values"], "'values'")
        return CharacteristicFunction.from_dict(g, {
            label: parse_complex(v, "value of %r" % label)
            for label, v in values.items()
        })
    if kind == "delta":
        fields = _take(doc, ("type", "event"), ("type", "event"),
                       "delta state spec")
        return delta_state(g, fields["event"])
    if kind == "action":
        fields = _take(doc, ("type", "potential"), ("type", "potential"),
                       "action state spec")
        pot = _require_object(fields["potential"], "'potential'")
        return {
            "type": "action",
            "potential": {x: _real(v, "potential at %r" % x)
                          for x, v in pot.items()},
        }
    fields = _take(doc, ("type", "values"), ("type", "values"),
                   "generator-action state spec")
    values = _require_object(fields["values"], "'values'")
    return {
        "type": "generator-action",
        "values": {label: _real(v, "action on %r" % label)
                   for label, v in values.items()},
    }


def bind_generator_action(payload, quiver: QuiverSpec) -> GeneratorAction:
    ga = GeneratorAction(quiver, dict(payload["values"]))
    ga.validate()
    return ga


def parse_unitary_doc(doc) -> np.ndarray:
    doc = _require_object(doc, "frame spec")
    fields = _take(doc, ("unitary",), ("unitary",), "frame spec")
    rows = fields["unitary"]
    if not isinstance(rows, list) or not rows:
        raise GqmInputError("'unitary' must be a non-empty array of rows")
    mat = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != len(rows):
            raise GqmInputError("unitary row %d has wrong length" % i)
        mat.append([parse_complex(c, "unitary entry (%d, %d)" % (i, j))
                    for j, c in enumerate(row)])
    return np.array(mat, dtype=complex)


def parse_algebra_doc(doc, g: FiniteGroupoid) -> AlgebraElement:
    doc = _require_object(doc, "algebra element spec")
    fields = _take(doc, ("coeffs",), ("coeffs",), "algebra element spec")
    coeffs = _require_object(fields["coeffs"], "'coeffs'")
    return AlgebraElement.from_dict(g, {
        label: parse_complex(v, "coefficient of %r" % label)
        for label, v in coeffs.items()
    })


# -- serialization -------------------------------------------------------


def format_real(x) -> float:
    """Round-trippable float for JSON: emitted via a 17-significant-digit
    decimal so identical runs give identical bytes."""
    return float("%.17g" % float(x))


def complex_pair(z):
    z = complex(z)
    return [format_real(z.real), format_real(z.imag)]


def matrix_to_json(mat) -> dict:
    mat = np.asarray(mat, dtype=complex)
    return {
        "dim": int(mat.shape[0]),
        "rows": [[complex_pair(z) for z in row] for row in mat],
    }


def matrix_to_csv(mat) -> str:
    mat = np.asarray(mat, dtype=complex)
    lines = []
    for row in mat:
        cells = []
        for z in row:
            re, im = format_real(z.real), format_real(z.imag)
            cells.append("%.17g%+.17gj" % (re, im))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def algebra_to_doc(a: AlgebraElement) -> dict:
    g = a.groupoid
    coeffs = {}
    for t in g.transitions:
        z = a.coeffs[g.transition_index[t]]
        if z != 0:
            coeffs[t] = complex_pair(z)
    return {"coeffs": coeffs}


def state_to_doc(phi: CharacteristicFunction) -> dict:
    g = phi.groupoid
    values = {}
    for t in g.transitions:
        z = phi.values[g.transition_index[t]]
        if z != 0:
            values[t] = complex_pair(z)
    return {"type": "characteristic", "values": values}


def groupoid_to_doc(g: FiniteGroupoid) -> dict:
    """Explicit-kind document; re-parsing gives back an equal groupoid."""
    return {
        "kind": "explicit",
        "events": list(g.events),
        "transitions": list(g.transitions),
        "source": {t: g.source[t] for t in g.transitions},
        "target": {t: g.target[t] for t in g.transitions},
        "units": {x: g.unit_of[x] for x in g.events},
        "inverse": {t: g.inverse[t] for t in g.transitions},
        "compose": [
            {"inner": i, "outer": o, "result": r}
            for (o, i), r in sorted(g.composition.items())
        ],
    }


def dump_json(doc) -> str:
    """Canonical JSON text: sorted keys, stable separators, newline at EOF."""
    return json.dumps(doc, sort_keys=True, separators=(",", ": "),
                      indent=2) + "\n"
