"""End-to-end pipeline and report emission.

A pipeline run takes a presentation (via low-index search) or a raw
permutation input and produces one row per (subgroup class, stabilizer
class), each row carrying the rank/classification data, the bicolored-map
signature, the geometries in both modes with their classification, and the
contextuality parameter when coset representatives exist.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import __version__
from .catalog import CatalogEntry, get_entry, load_catalog
from .contextuality import kappa as kappa_of
from .cosets import (DEFAULT_MAX_COSETS, CosetTable, low_index_subgroups,
                     table_to_permutations)
from .dessin import passport as passport_of
from .dessin import signature as signature_of
from .errors import BudgetExceeded, Disconnected, GzooError, TrivialClass
from .geometry import (build_defined_geometry, build_stabilized_geometry,
                       classify_generalized_polygon, classify_gu, configuration,
                       graph_stats, polygon_label)
from .permgroup import (classify_two_point_stabilizers, group_from, rank_profile)
from .textio import PermutationInput, parse_group_file, parse_permutations

SCHEMA_VERSION = 1


@dataclass
class PipelineOptions:
    max_index: int = 25
    max_cosets: int = DEFAULT_MAX_COSETS
    clique_budget: int = 1_000_000
    closure_budget: int = 1 << 20
    with_kappa: bool = True
    with_stabilized: bool = True
    with_defined: bool = True
    gu_limit: int = 500_000   # skip nearest-point work above n*lines this big


@dataclass
class GeometryReport:
    mode: str
    class_order: int
    config: object
    stats: object
    gu: object | None
    polygon: int | None
    polygon_name: str | None
    kappa: object | None
    lines: tuple
    flags: tuple = ()

    def to_json(self):
        out = {
            "mode": self.mode,
            "class_order": self.class_order,
            "config": {
                "p": self.config.points,
                "degrees": sorted(set(self.config.point_degrees)),
                "l": self.config.lines,
                "sizes": sorted(set(self.config.line_sizes)),
                "uniform": self.config.uniform,
                "label": self.config.label(),
            },
            "spectrum": [[e, m] for e, m in self.stats.spectrum],
            "flags": list(self.flags),
        }
        if self.stats.srg is not None:
            out["srg"] = list(self.stats.srg)
        if self.gu is not None and self.gu.u is not None:
            out["gu"] = self.gu.u
        if self.polygon is not None:
            out["polygon"] = self.polygon
            out["polygon_name"] = self.polygon_name
        if self.kappa is not None:
            out["kappa"] = {
                "edges": self.kappa.edge_count,
                "contextual": self.kappa.contextual_count,
                "value": self.kappa.kappa_str,
                "exact": [self.kappa.kappa.numerator, self.kappa.kappa.denominator],
            }
        return out


@dataclass
class ReportRow:
    group: str
    index: int
    label: str
    rank: int | None = None
    orbital_count: int | None = None
    subdegrees: tuple = ()
    m: int | None = None
    class_orders: tuple = ()
    classes_json: list = field(default_factory=list)
    signature: tuple | None = None
    passport: tuple | None = None
    geometries: list = field(default_factory=list)
    flags: list = field(default_factory=list)

    def to_json(self):
        out = {
            "schema_version": SCHEMA_VERSION,
            "group": self.group,
            "index": self.index,
            "label": self.label,
            "flags": list(self.flags),
        }
        if self.rank is not None:
            out["rank"] = self.rank
            out["orbital_count"] = self.orbital_count
            out["subdegrees"] = list(self.subdegrees)
            out["m"] = self.m
            out["classes"] = self.classes_json
        if self.signature is not None:
            b, w, f, g = self.signature
            out["signature"] = {"B": b, "W": w, "F": f, "g": g}
        if self.passport is not None:
            out["passport"] = list(self.passport)
        out["geometries"] = [g.to_json() for g in self.geometries]
        return out


def class_labels(tables):
    """'27', '40_a', '40_b', ... in deterministic table order."""
    by_n = {}
    for t in tables:
        by_n.setdefault(t.n, []).append(t)
    labels = {}
    for n, ts in by_n.items():
        if len(ts) == 1:
            labels[id(ts[0])] = str(n)
        else:
            for i, t in enumerate(ts):
                labels[id(t)] = f"{n}_{chr(ord('a') + i)}"
    return labels


def analyze_representation(name, label, pi: PermutationInput,
                           table: CosetTable | None,
                           options: PipelineOptions,
                           dessin_input: PermutationInput | None = None) -> ReportRow:
    """One full row for a transitive two-generator representation."""
    row = ReportRow(group=name, index=pi.degree, label=label)
    g = group_from(pi)
    if not g.is_transitive():
        row.flags.append("intransitive")
        return row
    profile = rank_profile(g)
    cls = classify_two_point_stabilizers(g)
    row.rank = profile.rank
    row.orbital_count = profile.orbital_count
    row.subdegrees = profile.subdegrees
    row.m = cls.m
    row.class_orders = tuple(c.order for c in cls.classes)
    row.classes_json = [{"order": c.order,
                         "suborbit_sizes": list(c.suborbit_sizes),
                         "fingerprint_only": c.fingerprint_only}
                        for c in cls.classes]
    din = dessin_input or pi
    sig = signature_of(din)
    row.signature = sig.as_tuple()
    row.passport = passport_of(din).as_strings()

    if profile.rank <= 2:
        row.flags.append("no non-trivial geometry")
        return row

    for ci, sc in enumerate(cls.classes):
        builders = []
        if options.with_stabilized:
            builders.append(("stabilized", lambda k=ci: build_stabilized_geometry(
                g, cls, k, on_trivial="setwise")))
        if options.with_defined:
            builders.append(("defined", lambda k=ci: build_defined_geometry(
                g, cls, k, clique_budget=options.clique_budget)))
        for mode, make in builders:
            try:
                geom = make()
            except (TrivialClass, BudgetExceeded) as exc:
                row.flags.append(f"{mode} class {sc.order}: {exc}")
                continue
            if not geom.lines:
                row.flags.append(f"{mode} class {sc.order}: no lines")
                continue
            cfg = configuration(geom)
            stats = graph_stats(geom)
            gu = None
            polygon = None
            pname = None
            if stats.connected and geom.n * max(1, len(geom.lines)) <= options.gu_limit:
                try:
                    gu = classify_gu(geom)
                except Disconnected:
                    gu = None
                polygon = classify_generalized_polygon(geom)
                if polygon is not None:
                    pname = polygon_label(polygon, geom)
            kp = None
            if options.with_kappa and table is not None:
                kp = kappa_of(table, geom)
            row.geometries.append(GeometryReport(
                mode=mode, class_order=sc.order, config=cfg, stats=stats,
                gu=gu, polygon=polygon, polygon_name=pname, kappa=kp,
                lines=geom.lines, flags=geom.flags))
    return row


def pipeline_presentation(name, text, options: PipelineOptions):
    pres, _sub = parse_group_file(text)
    tables = low_index_subgroups(pres, options.max_index)
    labels = class_labels(tables)
    rows = []
    for t in tables:
        if t.n == 1:
            continue
        pi = table_to_permutations(t)
        # black vertices are the second generator's cycles in table-derived maps
        dessin_input = PermutationInput(degree=pi.degree,
                                        images=(pi.images[1], pi.images[0]))
        try:
            rows.append(analyze_representation(name, labels[id(t)], pi, t,
                                               options, dessin_input=dessin_input))
        except GzooError as exc:
            row = ReportRow(group=name, index=t.n, label=labels[id(t)])
            row.flags.append(f"error: {exc}")
            rows.append(row)
    return rows


def pipeline_permutation(name, text, options: PipelineOptions):
    pi = parse_permutations(text)
    row = analyze_representation(name, str(pi.degree), pi, None, options)
    row.flags.append("no-coset-table")
    return [row]


def pipeline_entry(entry: CatalogEntry, options: PipelineOptions):
    if entry.kind == "presentation":
        maxi = options.max_index
        for key in ("low_index", "battery"):
            if key in entry.data:
                maxi = max(maxi, entry.data[key]["max_index"])
        opts = PipelineOptions(**{**options.__dict__, "max_index": maxi})
        return pipeline_presentation(entry.name, entry.grp_text(), opts)
    if entry.kind == "permutation":
        return pipeline_permutation(entry.name, entry.perm_text(), options)
    raise GzooError(f"entry {entry.name} needs an external file "
                    f"({entry.data.get('note', 'not bundled')})")


def emit(rows, fmt="text") -> bytes:
    if fmt == "json":
        payload = [r.to_json() for r in rows]
        return (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode()
    cols = ["group", "label", "rank", "m", "signature", "geometry", "kappa"]
    table = [cols]
    for r in rows:
        best = None
        for geo in r.geometries:
            if geo.mode == "defined" or best is None:
                best = geo
        sig = "-" if r.signature is None else ",".join(map(str, r.signature))
        geom_txt = "-"
        kap = "-"
        if best is not None:
            geom_txt = best.config.label()
            extra = []
            if best.stats.srg:
                extra.append("srg" + str(best.stats.srg))
            if best.polygon_name:
                extra.append(best.polygon_name)
            elif best.gu is not None and best.gu.u is not None:
                extra.append(f"G{best.gu.u}")
            if extra:
                geom_txt += " " + " ".join(extra)
            if best.kappa is not None:
                kap = best.kappa.kappa_str
        table.append([r.group, r.label, str(r.rank or "-"), str(r.m or "-"),
                      f"({sig})", geom_txt, kap])
    widths = [max(len(row[i]) for row in table) for i in range(len(cols))]
    lines = []
    for i, row in enumerate(table):
        lines.append("  ".join(cell.ljust(widths[j]) for j, cell in enumerate(row)))
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return ("\n".join(lines) + "\n").encode()


# -- regression check -----------------------------------------------------------


@dataclass
class CheckResult:
    entry: str
    ref: str
    subject: str
    verdict: str              # match | mismatch | warn | not-computable-at-budget
    detail: str = ""


def _check_low_index(entry, spec, options, results):
    rows = pipeline_presentation(entry.name, entry.grp_text(),
                                 PipelineOptions(**{**options.__dict__,
                                                    "max_index": spec["max_index"],
                                                    "with_kappa": False,
                                                    "with_stabilized": False,
                                                    "with_defined": False}))
    by_index = {}
    for r in rows:
        by_index.setdefault(r.index, set()).add((r.rank, r.m))
    expected = {int(row[0]): (row[1], row[2]) for row in spec["rows"]}
    ok = set(by_index) == set(expected) and all(
        by_index[i] == {expected[i]} for i in expected)
    computed = sorted((i, *sorted(v)[0]) for i, v in by_index.items())
    results.append(CheckResult(entry.name, spec.get("ref", "-"), "(index, r, m) rows",
                               "match" if ok else "mismatch", f"computed {computed}"))


def _check_battery(entry, spec, options, results):
    opts = PipelineOptions(**{**options.__dict__, "max_index": spec["max_index"]})
    rows = pipeline_presentation(entry.name, entry.grp_text(), opts)
    by_sig = {}
    for r in rows:
        by_sig[(r.index, r.signature)] = r
    for want in spec["rows"]:
        key = (want["index"], tuple(want["signature"]))
        ref = spec.get("ref", "-")
        subj = f"index {want['index']} signature {tuple(want['signature'])}"
        row = by_sig.get(key)
        if row is None:
            results.append(CheckResult(entry.name, ref, subj, "mismatch",
                                       "no class with this signature"))
            continue
        ok = True
        detail = []
        if "rank" in want and row.rank != want["rank"]:
            ok = False
            detail.append(f"rank {row.rank} != {want['rank']}")
        geo = _pick_geometry(row, tuple(want["config"]))
        if geo is None:
            ok = False
            detail.append("no geometry with expected configuration")
        else:
            if "spectrum" in want:
                got = [list(x) for x in geo.stats.spectrum]
                if got != want["spectrum"]:
                    ok = False
                    detail.append(f"spectrum {got}")
            if "gu" in want and (geo.gu is None or geo.gu.u != want["gu"]):
                ok = False
                detail.append(f"gu {None if geo.gu is None else geo.gu.u}")
        results.append(CheckResult(entry.name, ref, subj,
                                   "match" if ok else "mismatch", "; ".join(detail)))
        if geo is not None and "kappa" in want and geo.kappa is not None:
            got = float(geo.kappa.kappa)
            close = abs(got - want["kappa"]) <= 0.001
            results.append(CheckResult(
                entry.name, ref, subj + " kappa", "match" if close else "warn",
                f"computed {geo.kappa.kappa_str} vs published {want['kappa']:.3f}"))


def _pick_geometry(row, config4):
    p, deg, l, size = config4
    for geo in row.geometries:
        cfg = geo.config
        if (cfg.points == p and cfg.lines == l
                and set(cfg.point_degrees) == {deg} and set(cfg.line_sizes) == {size}):
            return geo
    return None


def _check_permutation(entry, options, results):
    spec = entry.data.get("analyze", {})
    ref = spec.get("ref", "-")
    rows = pipeline_permutation(entry.name, entry.perm_text(), options)
    row = rows[0]
    checks = [("order", None), ("rank", row.rank), ("subdegrees", list(row.subdegrees)),
              ("m", row.m)]
    if "order" in spec:
        g = group_from(parse_permutations(entry.perm_text()))
        checks[0] = ("order", g.order())
    for key, got in checks:
        if key in spec:
            verdict = "match" if got == spec[key] else "mismatch"
            results.append(CheckResult(entry.name, ref, key, verdict,
                                       f"computed {got}"))
    if "signature" in spec:
        verdict = "match" if list(row.signature) == spec["signature"] else "mismatch"
        results.append(CheckResult(entry.name, ref, "signature", verdict,
                                   f"computed {row.signature}"))
    if "passport" in spec:
        verdict = "match" if list(row.passport) == spec["passport"] else "mismatch"
        results.append(CheckResult(entry.name, ref, "passport", verdict,
                                   f"computed {row.passport}"))
    if "class_orders" in spec:
        got = sorted(row.class_orders, reverse=True)
        want = sorted(spec["class_orders"], reverse=True)
        verdict = "match" if got == want else "mismatch"
        results.append(CheckResult(entry.name, ref, "stabilizer orders", verdict,
                                   f"computed {got}"))
    for want in entry.data.get("geometries", []):
        subj = f"class order {want['class_order']} {want['mode']}"
        geo = _pick_geometry(row, tuple(want["config"]))
        ok = geo is not None and geo.class_order == want["class_order"]
        detail = []
        if ok and "spectrum" in want:
            got = [list(x) for x in geo.stats.spectrum]
            if got != want["spectrum"]:
                ok = False
                detail.append(f"spectrum {got}")
        if ok and "gu" in want and (geo.gu is None or geo.gu.u != want["gu"]):
            ok = False
            detail.append(f"gu {None if geo is None or geo.gu is None else geo.gu.u}")
        results.append(CheckResult(entry.name, want.get("ref", ref), subj,
                                   "match" if ok else "mismatch", "; ".join(detail)))


def run_checks(options: PipelineOptions | None = None, entries=None,
               include_extended=False):
    """Regression comparison of computed values against the catalog.

    Returns a list of CheckResult; external entries report
    not-computable-at-budget rather than failing.
    """
    options = options or PipelineOptions()
    results = []
    for entry in load_catalog():
        if entries and entry.name not in entries:
            continue
        if entry.extended and not include_extended:
            results.append(CheckResult(entry.name, "-", "extended entry",
                                       "not-computable-at-budget",
                                       "enable extended checks to run"))
            continue
        if entry.kind == "external":
            results.append(CheckResult(entry.name, entry.data.get("expected", {}).get("ref", "-"),
                                       "external representation",
                                       "not-computable-at-budget",
                                       entry.data.get("note", "")))
            continue
        if "low_index" in entry.data:
            _check_low_index(entry, entry.data["low_index"], options, results)
        if "battery" in entry.data:
            _check_battery(entry, entry.data["battery"], options, results)
        if entry.kind == "permutation":
            _check_permutation(entry, options, results)
    return results


def format_checks(results) -> str:
    lines = []
    for r in results:
        lines.append(f"[{r.verdict:>26}] {r.entry:<12} {r.ref:<4} {r.subject}"
                     + (f" -- {r.detail}" if r.detail else ""))
    counts = {}
    for r in results:
        counts[r.verdict] = counts.get(r.verdict, 0) + 1
    lines.append("summary: " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    return "\n".join(lines)
