"""Bundled catalog of group inputs and their published reference values.

The catalog ships as data files (``data/*.grp``, ``data/*.perm``,
``data/catalog.json``) so users can drop in further representations they
download themselves without touching code.  Expected values carry an opaque
``ref`` tag naming the reference table they reproduce.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str                 # presentation | permutation | external
    grp: str | None
    perm: str | None
    extended: bool
    data: dict

    def grp_text(self):
        return _read(self.grp)

    def perm_text(self):
        return _read(self.perm)


def _read(fname):
    if fname is None:
        return None
    return resources.files("gzoo.data").joinpath(fname).read_text()


def load_catalog():
    raw = json.loads(_read("catalog.json"))
    entries = []
    for e in raw["entries"]:
        entries.append(CatalogEntry(
            name=e["name"],
            kind=e["kind"],
            grp=e.get("grp"),
            perm=e.get("perm"),
            extended=bool(e.get("extended", False)),
            data=e,
        ))
    return entries


def get_entry(name: str) -> CatalogEntry:
    for e in load_catalog():
        if e.name.lower() == name.lower():
            return e
    raise KeyError(f"no catalog entry named {name!r}")
