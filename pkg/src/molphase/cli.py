"""Command-line driver: ``molphase <subcommand> [options]``.

Every run prints its resolved configuration along with the result (JSON
``config`` key, ``#``-prefixed header in CSV, HTML comment in markdown).
Exit status: 0 success, 1 computation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from importlib import resources

import numpy as np

from . import __version__
from .groups import GroupError, build_group, get_group, normalize_label

SCHEMA = 1


class UsageError(Exception):
    pass


# --- output --------------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _config(args):
    skip = {"func", "output"}
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    cfg["threads"] = os.environ.get("MOLPHASE_THREADS", "1")
    cfg["version"] = __version__
    return cfg


UNITS = "dimensionless; angles in radians, times in units of 1/B"


def _flatten(obj, prefix=""):
    """Key/value rows for payloads without a natural table."""
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out += _flatten(v, f"{prefix}.{k}" if prefix else str(k))
        return out
    if isinstance(obj, (list, tuple)) and any(isinstance(v, (dict, list, tuple)) for v in obj):
        out = []
        for i, v in enumerate(obj):
            out += _flatten(v, f"{prefix}[{i}]")
        return out
    if isinstance(obj, (list, tuple)):
        return [(prefix, " ".join(_cell(v) for v in obj))]
    return [(prefix, obj)]


def _kind(values):
    """Column metadata: exact for integers, rationals and labels; float otherwise."""
    vals = [v for v in values if v is not None]
    if vals and all(isinstance(v, (bool, int, Fraction)) for v in vals):
        return "exact"
    if any(isinstance(v, (float, complex)) for v in vals):
        return "float"
    return "label" if vals and all(isinstance(v, str) for v in vals) else "mixed"


def _emit(args, payload, rows=None, columns=None):
    """Render ``payload`` (JSON) or ``rows`` (CSV / markdown) to the output target."""
    fmt = args.format
    cfg = _config(args)
    if fmt != "json" and rows is None:
        rows, columns = _flatten(_jsonable(payload)), ["field", "value"]
    if fmt == "json":
        text = json.dumps({"schema": SCHEMA, "config": cfg, "units": UNITS, **_jsonable(payload)},
                          indent=2, sort_keys=False) + "\n"
    else:
        meta = {c: _kind([r[i] for r in rows]) for i, c in enumerate(columns)}
        header = (f"schema: {SCHEMA}", f"config: {json.dumps(cfg, sort_keys=True)}",
                  f"columns: {json.dumps(meta)}", f"units: {UNITS}")
        if fmt == "csv":
            buf = io.StringIO()
            buf.writelines(f"# {h}\n" for h in header)
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(columns)
            for r in rows:
                w.writerow([_cell(v) for v in r])
            text = buf.getvalue()
        else:
            lines = [f"<!-- {h} -->" for h in header]
            lines += ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
            lines += ["| " + " | ".join(_cell(v) for v in r) + " |" for r in rows]
            text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Fraction):
        return str(v)
    return str(v)


# --- selectors -------------------------------------------------------------------------


def _group(name):
    try:
        return get_group(name)
    except (GroupError, ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from exc


def _preset(name):
    from .species import get_preset
    try:
        return get_preset(name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from exc


def _irrep_label(group, label):
    label = label.rstrip("*")
    if hasattr(group, "irrep"):
        try:
            return group.irrep(label).label
        except (KeyError, GroupError, ValueError) as exc:
            raise UsageError(f"{group.name} has no irrep {label!r}") from exc
    return normalize_label(label)


def _floats(text, name):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"--{name}: expected comma-separated numbers") from exc


def _cutoffs(text):
    out = []
    for x in text.split(","):
        x = x.strip().lower()
        if x in ("inf", "∞"):
            out.append(math.inf)
        else:
            try:
                out.append(int(x))
            except ValueError as exc:
                raise UsageError(f"bad cutoff {x!r}") from exc
    return out


# --- subcommands -------------------------------------------------------------------------


def cmd_species(args):
    from .species import species_report
    rep = species_report(_preset(args.molecule))
    rows = [(s.display, s.rot, s.nuc, rep.sigma, s.d, s.weight) for s in rep.species]
    payload = {"molecule": args.molecule, **rep.to_dict()}
    _emit(args, payload, rows, ["species", "rot", "nuc", "sigma", "d", "weight"])


def cmd_weights(args):
    from .species import species_report, total_nuclear_dimension
    preset = _preset(args.molecule)
    rep = species_report(preset)
    total = total_nuclear_dimension(preset)
    check = sum(s.d * s.weight for s in rep.species)
    payload = {"molecule": args.molecule, "weights": {s.display: s.weight for s in rep.species},
               "sum_d_weight": check, "nuclear_dimension": total, "exact": check == total}
    rows = [(s.display, s.d, s.weight) for s in rep.species]
    _emit(args, payload, rows, ["species", "d", "weight"])


def cmd_fraction(args):
    from .species import entangled_fraction, species_report
    rep = species_report(_preset(args.molecule))
    group = get_group(rep.group)
    vals = []
    for c in _cutoffs(args.cutoffs):
        v = entangled_fraction(group, rep.species, None if c == math.inf else c, rule=args.rule)
        vals.append(("inf" if c == math.inf else str(c), v))
    payload = {"molecule": args.molecule,
               "fractions": {k: (str(v) if isinstance(v, Fraction) else round(v, 6)) for k, v in vals}}
    rows = [(k, str(v) if isinstance(v, Fraction) else f"{v:.3f}", "exact" if isinstance(v, Fraction) else "float")
            for k, v in vals]
    _emit(args, payload, rows, ["cutoff", "fraction", "exactness"])


def cmd_multiplicities(args):
    from .isotypic import multiplicity
    group = _group(args.group)
    if hasattr(group, "irreps"):
        labels = [ir.label for ir in group.irreps]
    else:
        labels = group.irrep_labels(args.lmax)
    if args.irrep:
        labels = [_irrep_label(group, args.irrep)]
    table = {lab: [multiplicity(l, lab, group) for l in range(args.lmax + 1)] for lab in labels}
    rows = [(l, *[table[lab][l] for lab in labels]) for l in range(args.lmax + 1)]
    _emit(args, {"group": group.name, "multiplicities": table}, rows, ["l", *labels])


def cmd_fourier_check(args):
    from .phasespace import fourier_roundtrip
    group = _group(args.group)
    label = _irrep_label(group, args.species)
    try:
        res = fourier_roundtrip(group, label, args.lmax, args.nbeta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(args, {"group": group.name, "species": label, "lmax": args.lmax, "residual": res})


def cmd_position(args):
    from .phasespace import canonicalize, position_vector
    from .rotation import Rotation
    if args.molecule:
        group = get_group(_preset(args.molecule).group)
    elif args.group:
        group = _group(args.group)
    else:
        raise UsageError("position needs --molecule or --group")
    label = _irrep_label(group, args.species)
    angles = _floats(args.euler, "euler")
    if len(angles) != 3:
        raise UsageError("--euler takes three angles a,b,c")
    r = Rotation.from_euler(*angles)
    s = canonicalize(r, group).s
    vec = position_vector(group, label, s, args.mu, args.lmax, args.delta)
    rows = [(l, m, k, c.real, c.imag) for (l, m, k), c in zip(vec.index, vec.coeffs)]
    payload = {"group": group.name, "species": label, "coefficients": [[*i, c] for i, c in zip(vec.index, vec.coeffs)]}
    _emit(args, payload, rows, ["l", "m", "kappa", "re", "im"])


def cmd_connection(args):
    from .holonomy import flatness_scan
    group = _group(args.group)
    if not hasattr(group, "irreps"):
        raise UsageError("connection components need a finite group")
    label = _irrep_label(group, args.irrep)
    axes = args.axes
    if not axes or any(a not in "xyz" for a in axes):
        raise UsageError("--axes must be a subset of xyz")
    try:
        scan = flatness_scan(group, label, axes=axes, deltas=_floats(args.deltas, "deltas"),
                             threshold=args.threshold)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = []
    for (mu, nu, a), vals in scan.values.items():
        for d, v in zip(scan.deltas, vals):
            rows.append((d, mu, nu, a, v.real, v.imag))
    payload = {"group": group.name, "irrep": label, "deltas": scan.deltas, "lmax": scan.lmax,
               "max_abs": scan.magnitudes(), "decays": scan.decays,
               "values": [{"mu": k[0], "nu": k[1], "axis": k[2], "values": v} for k, v in scan.values.items()]}
    _emit(args, payload, rows, ["delta", "mu", "nu", "axis", "re", "im"])


def cmd_monodromy(args):
    from .holonomy import monodromy_group
    group = _group(args.group)
    label = _irrep_label(group, args.irrep)
    _emit(args, monodromy_group(group, label).to_dict())


def cmd_conjecture(args):
    from .holonomy import conjecture_check
    group = _group(args.group)
    if not hasattr(group, "irreps"):
        raise UsageError("the lift check needs a finite group")
    w = conjecture_check(group, _irrep_label(group, args.irrep))
    _emit(args, {"group": group.name, "irrep": args.irrep, **w.to_dict()})


def cmd_toy2d(args):
    from .dynamics import planar_rotate, planar_state
    par = 0 if args.species == "para" else 1
    ls = [l for l in range(-args.lmax, args.lmax + 1) if l % 2 == par]
    st = planar_state({l: 1.0 for l in ls})
    _, phase = planar_rotate(st, args.phi)
    _emit(args, {"species": args.species, "nuclear": st.nuclear, "phi": args.phi,
                 "support": ls, "phase": complex(phase)})


def cmd_strobe(args):
    from .dynamics import rotor_state, stroboscopic_reorient, tilted_schedule
    st = rotor_state(args.lmax, {(0, 0): 1.0}, B=args.B)
    sched = tilted_schedule(args.pulses, args.tilt, st.T_rev)
    tgt = tuple(_floats(args.target, "target"))
    tr = stroboscopic_reorient(st, sched, args.eta, target=tgt, samples=args.samples)
    rows = list(zip(tr.times, tr.values))
    payload = {"times": tr.times, "alignment": tr.values, "period_peaks": tr.period_peaks}
    _emit(args, payload, rows, ["t", "cos2"])


def cmd_fringe(args):
    from .dynamics import equatorial_pi, interferometer_phase, rotor_state
    az = {"x": 0.0, "y": math.pi / 2}.get(args.axis)
    if az is None:
        try:
            az = math.radians(float(args.axis))
        except ValueError as exc:
            raise UsageError("--axis is x, y or an azimuth in degrees") from exc
    ref = rotor_state(args.l, {(args.l, 0): 1.0})
    species = args.species if args.species in ("a1", "a2") else None
    factor, vis = interferometer_phase(species, ref, equatorial_pi(az))
    _emit(args, {"species": args.species, "l": args.l, "factor": complex(factor), "visibility": vis})


# --- regression tables ---------------------------------------------------------------------


def load_fixture(name):
    with resources.files("molphase.fixtures").joinpath(name).open("r", encoding="utf-8") as fh:
        return json.load(fh)


def _regress_species():
    from .species import enumerate_species
    fx = load_fixture("species.json")
    want = {}
    for r in fx["rows"]:
        want.setdefault((r["group"], r["sigma"]), set()).add((r["rot"], r["nuc"], r["d"]))
    cells = []
    for (g, sigma), rows in want.items():
        group = get_group(g)
        labels = [ir.label for ir in group.irreps] if hasattr(group, "irreps") else ["a1", "a2"]
        got, _ = enumerate_species(group, sigma, {lab: 1 for lab in labels})
        have = {(s.rot, s.nuc, s.d) for s in got}
        cells.append({"key": f"{g}/{sigma}", "expected": sorted(rows), "got": sorted(have), "ok": have == rows})
    return cells


def _regress_fractions():
    from .species import entangled_fraction, species_for_molecule
    fx = load_fixture("fractions.json")
    tol = fx["tolerance"]["decimal"]
    cells = []
    for row in fx["rows"]:
        rep = species_for_molecule(row["molecule"])
        group = get_group(rep.group)
        for c, exp in zip(fx["cutoffs"], row["values"]):
            v = entangled_fraction(group, rep.species, None if c == "inf" else int(c))
            if "/" in exp:
                ok = v == Fraction(exp)
            else:
                ok = abs(float(v) - float(exp)) <= tol
            cells.append({"key": f"{row['molecule']}/l<={c}", "expected": exp,
                          "got": str(v) if isinstance(v, Fraction) else round(v, 4), "ok": ok})
    return cells


def _regress_multiplicities():
    from .isotypic import multiplicity
    fx = load_fixture("buckeyball_multiplicities.json")
    G = build_group(fx["group"])
    cells = []
    for lab, vals in fx["rows"].items():
        for l, exp in enumerate(vals):
            got = multiplicity(l, lab, G)
            cells.append({"key": f"{lab}/l={l}", "expected": exp, "got": got, "ok": got == exp})
    return cells


def _regress_weights():
    from .species import species_for_molecule
    fx = load_fixture("buckeyball_weights.json")
    rep = species_for_molecule(fx["molecule"])
    cells = []
    for r in fx["rows"]:
        s = rep.get(r["species"])
        cells.append({"key": r["species"], "expected": r["weight"], "got": s.weight,
                      "ok": s.weight == r["weight"] and s.d == r["d"]})
    return cells


def _regress_monodromy():
    from .holonomy import monodromy_group
    fx = load_fixture("monodromy_groups.json")
    cells = []
    for r in fx["rows"]:
        mg = monodromy_group(get_group(r["group"]), r["irrep"])
        ok = mg.quotient == r["quotient"] and mg.non_abelian == r["non_abelian"]
        cells.append({"key": f"{r['group']}/{r['irrep']}", "expected": [r["quotient"], r["non_abelian"]],
                      "got": [mg.quotient, mg.non_abelian], "ok": ok})
    return cells


REGRESSIONS = {
    "species": _regress_species,
    "fractions": _regress_fractions,
    "buckeyball-multiplicities": _regress_multiplicities,
    "buckeyball-weights": _regress_weights,
    "monodromy-groups": _regress_monodromy,
}


def regression_suite(table):
    """Per-cell comparison against a bundled table; returns {table: cells}."""
    names = list(REGRESSIONS) if table == "all" else [table]
    return {n: REGRESSIONS[n]() for n in names}


def cmd_regress(args):
    res = regression_suite(args.table)
    summary = {n: {"passed": sum(c["ok"] for c in cells), "total": len(cells)} for n, cells in res.items()}
    rows = [(n, c["key"], c["expected"], c["got"], "PASS" if c["ok"] else "FAIL")
            for n, cells in res.items() for c in cells]
    _emit(args, {"summary": summary, "cells": res}, rows, ["table", "cell", "expected", "got", "status"])
    return 0 if all(s["passed"] == s["total"] for s in summary.values()) else 1


# --- parser ---------------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="molphase", description="Rotation-spin species, phase space and holonomy of symmetric molecules.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, fmt="json", help=None):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=func)
        sp.add_argument("--format", choices=["json", "csv", "markdown-table"], default=fmt)
        sp.add_argument("--output", "-o", default=None, help="write to a file instead of stdout")
        sp.add_argument("--seed", type=int, default=0, help="reserved; all computations are deterministic")
        return sp

    sp = add("species", cmd_species, help="species table of a molecule")
    sp.add_argument("--molecule", required=True)
    sp = add("weights", cmd_weights, help="nuclear statistical weights")
    sp.add_argument("--molecule", required=True)
    sp = add("fraction", cmd_fraction, help="entangled-state fraction")
    sp.add_argument("--molecule", required=True)
    sp.add_argument("--cutoffs", default="2,4,8,inf")
    sp.add_argument("--rule", choices=["nuc", "rot"], default="nuc")
    sp = add("multiplicities", cmd_multiplicities, help="irrep multiplicities per l")
    sp.add_argument("--group", required=True)
    sp.add_argument("--irrep")
    sp.add_argument("--lmax", type=int, default=10)
    sp = add("fourier-check", cmd_fourier_check, help="Gram residual of the adapted harmonics")
    sp.add_argument("--group", required=True)
    sp.add_argument("--species", required=True)
    sp.add_argument("--lmax", type=int, default=8)
    sp.add_argument("--nbeta", type=int, default=None)
    sp = add("position", cmd_position, fmt="csv", help="coefficients of a position state")
    sp.add_argument("--molecule")
    sp.add_argument("--group")
    sp.add_argument("--species", required=True)
    sp.add_argument("--euler", required=True, help="a,b,c in radians")
    sp.add_argument("--delta", type=float, default=0.1)
    sp.add_argument("--lmax", type=int, default=20)
    sp.add_argument("--mu", type=int, default=1)
    sp = add("connection", cmd_connection, fmt="csv", help="damped connection components")
    sp.add_argument("--group", required=True)
    sp.add_argument("--irrep", required=True)
    sp.add_argument("--axes", default="xyz")
    sp.add_argument("--deltas", default="0.5,0.2,0.1,0.05")
    sp.add_argument("--threshold", type=float, default=1e-6)
    sp = add("monodromy", cmd_monodromy, help="monodromy group of an irrep")
    sp.add_argument("--group", required=True)
    sp.add_argument("--irrep", required=True)
    sp = add("conjecture", cmd_conjecture, help="binary-cover lift check")
    sp.add_argument("--group", required=True)
    sp.add_argument("--irrep", required=True)
    sp = add("toy2d", cmd_toy2d, help="planar rotor π-rotation phase")
    sp.add_argument("--species", choices=["para", "ortho"], required=True)
    sp.add_argument("--phi", type=float, default=math.pi)
    sp.add_argument("--lmax", type=int, default=6)
    sp = add("strobe", cmd_strobe, fmt="csv", help="stroboscopic kicked-rotor alignment")
    sp.add_argument("--pulses", type=int, default=3)
    sp.add_argument("--tilt", type=float, default=60.0)
    sp.add_argument("--eta", type=float, default=2.0)
    sp.add_argument("--lmax", type=int, default=24)
    sp.add_argument("--B", type=float, default=1.0)
    sp.add_argument("--samples", type=int, default=64)
    sp.add_argument("--target", default="0,0,-1")
    sp = add("fringe", cmd_fringe, help="interferometer fringe factor")
    sp.add_argument("--species", default="a2")
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--axis", default="y")
    sp = add("regress", cmd_regress, help="compare against bundled reference tables")
    sp.add_argument("--table", choices=["all", *REGRESSIONS], default="all")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status = args.func(args)
    except UsageError as exc:
        print(f"molphase: usage error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001  (mapped to the computation-error status)
        print(f"molphase: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
