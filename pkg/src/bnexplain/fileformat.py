"""Network file format: a small JSON schema.

Example::

    {
      "name": "drug",
      "variables": [
        {"name": "Sex",      "states": ["m", "f"]},
        {"name": "Drug",     "states": ["yes", "no"]},
        {"name": "Recovery", "states": ["rec", "norec"]}
      ],
      "cpts": {
        "Sex":      {"parents": [],              "table": [[0.5, 0.5]]},
        "Drug":     {"parents": ["Sex"],         "table": [[0.75, 0.25], [0.25, 0.75]]},
        "Recovery": {"parents": ["Sex", "Drug"], "table": [[0.6, 0.4], [0.7, 0.3],
                                                           [0.2, 0.8], [0.3, 0.7]]}
      }
    }

Edges are implied by the parent lists. CPT rows run over the parents' states
lexicographically with the last parent varying fastest (for Recovery above:
(m,yes), (m,no), (f,yes), (f,no)); columns follow the child's state order.
"""

from __future__ import annotations

import json
from os import PathLike

from .errors import NetworkFormatError
from .network import Cpt, Network, Variable


def parse_network(text: str) -> Network:
    """Parse network-file content into a validated :class:`Network`.

    Raises:
        NetworkFormatError: malformed JSON (with line/column) or wrong shapes.
        NetworkValidationError: structural violations (cycles, row sums, ...).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(
            f"invalid network file: {exc.msg} at line {exc.lineno}, column {exc.colno}"
        ) from exc

    if not isinstance(doc, dict):
        raise NetworkFormatError("network file must contain a JSON object")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise NetworkFormatError('"name" must be a string')
    raw_vars = doc.get("variables")
    if not isinstance(raw_vars, list):
        raise NetworkFormatError('missing or invalid "variables" list')
    raw_cpts = doc.get("cpts")
    if not isinstance(raw_cpts, dict):
        raise NetworkFormatError('missing or invalid "cpts" mapping')

    variables = []
    for i, entry in enumerate(raw_vars):
        if not isinstance(entry, dict) or not isinstance(entry.get("name"), str):
            raise NetworkFormatError(f'variables[{i}]: expected an object with a "name" string')
        states = entry.get("states")
        if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
            raise NetworkFormatError(f'variables[{i}] ({entry["name"]!r}): "states" must be a list of strings')
        variables.append(Variable(name=entry["name"], states=tuple(states)))

    cpts = {}
    for var, entry in raw_cpts.items():
        if not isinstance(entry, dict):
            raise NetworkFormatError(f"cpts[{var!r}]: expected an object")
        parents = entry.get("parents")
        table = entry.get("table")
        if not isinstance(parents, list) or not all(isinstance(p, str) for p in parents):
            raise NetworkFormatError(f'cpts[{var!r}]: "parents" must be a list of variable names')
        if not isinstance(table, list) or not all(isinstance(row, list) for row in table):
            raise NetworkFormatError(f'cpts[{var!r}]: "table" must be a list of rows')
        rows = []
        for i, row in enumerate(table):
            for p in row:
                if not isinstance(p, (int, float)) or isinstance(p, bool):
                    raise NetworkFormatError(f"cpts[{var!r}], row {i}: entry {p!r} is not a number")
            rows.append(tuple(float(p) for p in row))
        cpts[var] = Cpt(child=var, parents=tuple(parents), table=tuple(rows))

    return Network(variables, cpts, name=name)


def load_network(path: str | PathLike) -> Network:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_network(fh.read())


def serialize_network(net: Network) -> str:
    """Render a network back to file-format text; reparsing yields an equal network."""
    doc = {
        "name": net.name,
        "variables": [{"name": v.name, "states": list(v.states)} for v in net.variables],
        "cpts": {
            v.name: {
                "parents": list(net.cpts[v.name].parents),
                "table": [list(row) for row in net.cpts[v.name].table],
            }
            for v in net.variables
        },
    }
    return json.dumps(doc, indent=2) + "\n"
