"""Command-line driver: parse fan descriptions, run the pipeline, render output.

Subcommands: validate, g0, mirror-map, invariants, superpotential,
surface-oracle, check.  Output is plain text by default or a versioned JSON
envelope; invariant tables render as TSV.  Exit status is 0 exactly when every
requested check passed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from importlib import resources

from .fans import (
    Fan,
    FanError,
    curve_lattice,
    fan_polytope_vertices,
    is_semi_fano,
    validate_fan,
    wall_curve_classes,
)
from .series import TruncationBox, render
from .superpotential import (
    analyze,
    assemble_W_HV,
    assemble_W_LF,
    assemble_W_PF,
    check_multiplicative_consistency,
    check_PF_equals_LF,
    cross_validate_surface,
    invariant_table,
    normalize_W_LF,
    render_table,
    structural_report,
    surface_admissible_delta,
)

SCHEMA_VERSION = 1


class InputError(ValueError):
    pass


def parse_input(document):
    """Validate a fan description document; returns (Fan, basis or None, meta)."""
    if not isinstance(document, dict):
        raise InputError("top level must be a mapping")
    for key in ("dimension", "rays", "max_cones"):
        if key not in document:
            raise InputError(f"missing required field '{key}'")
    n = document["dimension"]
    if not isinstance(n, int) or n <= 0:
        raise InputError("field 'dimension' must be a positive integer")
    rays = document["rays"]
    if not isinstance(rays, list) or not rays:
        raise InputError("field 'rays' must be a nonempty list")
    for idx, v in enumerate(rays):
        if (not isinstance(v, list) or len(v) != n
                or not all(isinstance(x, int) for x in v)):
            raise InputError(f"field 'rays'[{idx}] must be an integer {n}-vector")
    cones = document["max_cones"]
    if not isinstance(cones, list) or not cones:
        raise InputError("field 'max_cones' must be a nonempty list")
    zero_based = []
    for idx, c in enumerate(cones):
        if (not isinstance(c, list)
                or not all(isinstance(x, int) and 1 <= x <= len(rays) for x in c)):
            raise InputError(
                f"field 'max_cones'[{idx}] must list 1-based ray indices"
            )
        zero_based.append(tuple(x - 1 for x in c))
    basis = document.get("curve_class_basis")
    if basis is not None:
        if not isinstance(basis, list):
            raise InputError("field 'curve_class_basis' must be a list")
        for idx, b in enumerate(basis):
            if (not isinstance(b, list) or len(b) != len(rays)
                    or not all(isinstance(x, int) for x in b)):
                raise InputError(
                    f"field 'curve_class_basis'[{idx}] must be an integer "
                    f"{len(rays)}-vector"
                )
    meta = {
        "names": document.get("names"),
        "display_monomials": document.get("display_monomials"),
    }
    fan = Fan(n, tuple(tuple(v) for v in rays), tuple(zero_based))
    return fan, basis, meta


def load_document(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: not valid JSON ({exc})") from exc


def fixture_path(name):
    return resources.files("semifano").joinpath("fixtures", name)


def _digest(document):
    blob = json.dumps(document, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _parse_box(text, rank):
    if text is None:
        return TruncationBox((5,) * rank)
    caps = tuple(int(p) for p in text.split(","))
    if len(caps) == 1 and rank != 1:
        caps = caps * rank
    if len(caps) != rank:
        raise InputError(
            f"box has {len(caps)} entries but the curve lattice has rank {rank}"
        )
    return TruncationBox(caps)


def _render_term(term, names, zray_names):
    zmono = "*".join(
        f"{zray_names[j]}" if e == 1 else f"{zray_names[j]}^{e}"
        for j, e in enumerate(term.z_exponent) if e
    ) or "1"
    qmono = "*".join(
        f"{names[a]}" if e == 1 else f"{names[a]}^{e}"
        for a, e in enumerate(term.q_exponent) if e
    )
    unit = render(term.unit, names)
    coeff = qmono if qmono else ""
    if unit != "1":
        coeff = f"{coeff}*({unit})" if coeff else f"({unit})"
    return f"{coeff}*{zmono}" if coeff else zmono


def _emit(args, command, document, lines, results, ok):
    if args.format == "json":
        envelope = {
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "inputs_digest": _digest(document),
            "results": results,
        }
        print(json.dumps(envelope, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)
    return 0 if ok else 1


def _setup(args):
    document = load_document(args.input)
    fan, basis, meta = parse_input(document)
    violations = validate_fan(fan)
    if violations:
        raise FanError("; ".join(violations))
    lattice = curve_lattice(fan, basis)
    box = _parse_box(args.box, lattice.rank)
    return document, fan, lattice, box, meta


def _var_names(lattice, meta):
    return [f"q{a + 1}" for a in range(lattice.rank)]


def cmd_validate(args):
    document = load_document(args.input)
    fan, basis, meta = parse_input(document)
    violations = validate_fan(fan)
    lines = []
    results = {"violations": violations}
    ok = not violations
    if ok:
        semi, witness = is_semi_fano(fan)
        verts = sorted(i + 1 for i in fan_polytope_vertices(fan))
        walls = [list(c) for c in wall_curve_classes(fan)]
        results.update(
            semi_fano=semi,
            witness=list(witness) if witness else None,
            hull_vertices=verts,
            wall_classes=walls,
        )
        lines.append(f"fan: {fan.num_rays} rays, {len(fan.max_cones)} maximal cones, OK")
        lines.append(f"hull vertices: {verts}")
        if semi:
            lines.append("semi-Fano: yes")
            lattice = curve_lattice(fan, basis)
            lines.append(
                f"curve lattice rank {lattice.rank}, "
                f"nef basis {'verified' if lattice.nef_verified else 'NOT verified'}"
            )
            results["nef_verified"] = lattice.nef_verified
            results["basis"] = [list(b) for b in lattice.basis]
        else:
            lines.append(
                f"not semi-Fano, witness c1 pairing {witness.chern_number()} "
                f"on class {list(witness)}"
            )
            ok = False
    else:
        lines.extend(f"invalid fan: {v}" for v in violations)
    return _emit(args, "validate", document, lines, results, ok)


def cmd_g0(args):
    document, fan, lattice, box, meta = _setup(args)
    from .mirror import compute_g0_family

    family = compute_g0_family(lattice, box)
    names = _var_names(lattice, meta)
    lines = []
    results = {}
    for i, s in enumerate(family.series):
        text = render(s, names)
        lines.append(f"g0[{i + 1}] = {text}")
        results[str(i + 1)] = text
    return _emit(args, "g0", document, lines, results, True)


def cmd_mirror_map(args):
    document, fan, lattice, box, meta = _setup(args)
    from .mirror import assemble_mirror_map, compute_g0_family

    mm = assemble_mirror_map(compute_g0_family(lattice, box))
    names = _var_names(lattice, meta)
    lines = []
    results = {"forward": {}, "inverse": {}}
    for a in range(lattice.rank):
        fwd = render(mm.forward.components[a], names)
        inv = render(mm.inverse.components[a], names)
        lines.append(f"forward exponent {a + 1}: {fwd}")
        lines.append(f"inverse exponent {a + 1}: {inv}")
        results["forward"][str(a + 1)] = fwd
        results["inverse"][str(a + 1)] = inv
    return _emit(args, "mirror-map", document, lines, results, True)


def cmd_invariants(args):
    document, fan, lattice, box, meta = _setup(args)
    analysis = analyze(fan, lattice, box)
    rays = (
        [args.ray - 1] if args.ray else list(range(fan.num_rays))
    )
    strict = args.integrality == "strict"
    lines = []
    results = {}
    ok = True
    for i in rays:
        table = invariant_table(analysis.deltas[i], strict=strict)
        if table.non_integer:
            ok = False
        tsv = render_table(table)
        if len(rays) > 1:
            lines.append(f"# ray {i + 1}")
        lines.append(tsv)
        results[str(i + 1)] = tsv
    return _emit(args, "invariants", document, lines, results, ok)


def cmd_superpotential(args):
    document, fan, lattice, box, meta = _setup(args)
    sigma = (args.cone or 1) - 1
    if not 0 <= sigma < len(fan.max_cones):
        raise InputError(f"cone index {sigma + 1} out of range")
    analysis = analyze(fan, lattice, box)
    whv = assemble_W_HV(fan, lattice, sigma, box)
    wpf = assemble_W_PF(whv, analysis.mirror, box)
    wlf = normalize_W_LF(
        assemble_W_LF(whv, analysis.deltas), fan, analysis.deltas
    )
    report = check_PF_equals_LF(wpf, wlf)
    names = _var_names(lattice, meta)
    zn = [f"z{j + 1}" for j in range(fan.dimension)]
    lines = []
    results = {}
    for tag, expr in (("plain", whv), ("PF", wpf), ("LF", wlf)):
        text = " + ".join(_render_term(t, names, zn) for t in expr.terms)
        lines.append(f"W[{tag}] = {text}")
        results[tag] = text
    lines.append("EQUAL" if report.passed else "DIFFER: " + "; ".join(report.details))
    results["equal"] = report.passed
    results["details"] = list(report.details)
    return _emit(args, "superpotential", document, lines, results, report.passed)


def cmd_surface_oracle(args):
    document, fan, lattice, box, meta = _setup(args)
    report = cross_validate_surface(fan, lattice, box)
    names = _var_names(lattice, meta)
    lines = []
    results = {"deltas": {}}
    for i in range(fan.num_rays):
        s = surface_admissible_delta(fan, lattice, i, box)
        text = render(s, names)
        lines.append(f"delta[{i + 1}] (combinatorial) = {text}")
        results["deltas"][str(i + 1)] = text
    lines.append("AGREE" if report.passed else "DISAGREE: " + "; ".join(report.details))
    results["agree"] = report.passed
    return _emit(args, "surface-oracle", document, lines, results, report.passed)


def cmd_check(args):
    document, fan, lattice, box, meta = _setup(args)
    semi, witness = is_semi_fano(fan)
    lines = []
    results = {}
    ok = True
    if not semi:
        lines.append(
            f"not semi-Fano, witness c1 pairing {witness.chern_number()}"
        )
        return _emit(args, "check", document, lines, {"semi_fano": False}, False)
    analysis = analyze(fan, lattice, box)
    reports = [
        check_multiplicative_consistency(
            analysis.deltas, analysis.mirror, lattice
        ),
        structural_report(analysis),
    ]
    sigma = (args.cone or 1) - 1
    whv = assemble_W_HV(fan, lattice, sigma, box)
    wpf = assemble_W_PF(whv, analysis.mirror, box)
    wlf = normalize_W_LF(
        assemble_W_LF(whv, analysis.deltas), fan, analysis.deltas
    )
    reports.append(check_PF_equals_LF(wpf, wlf))
    if fan.dimension == 2:
        reports.append(cross_validate_surface(fan, lattice, box))
    for rep in reports:
        status = "PASS" if rep.passed else "FAIL"
        lines.append(f"{rep.name}: {status}")
        lines.extend(f"  {d}" for d in rep.details)
        results[rep.name] = rep.passed
        ok = ok and rep.passed
    return _emit(args, "check", document, lines, results, ok)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="semifano",
        description="Exact disk-count generating functions for toric manifolds",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("input", help="fan description JSON file")
        p.add_argument("--box", help="per-variable degree caps, comma-separated")
        p.add_argument("--format", choices=["text", "json"], default="text")
        p.add_argument("--cone", type=int, help="1-based maximal cone index")
        p.add_argument("--ray", type=int, help="restrict to one 1-based ray")
        p.add_argument(
            "--integrality", choices=["strict", "warn"], default="strict"
        )

    for name, fn in (
        ("validate", cmd_validate),
        ("g0", cmd_g0),
        ("mirror-map", cmd_mirror_map),
        ("invariants", cmd_invariants),
        ("superpotential", cmd_superpotential),
        ("surface-oracle", cmd_surface_oracle),
        ("check", cmd_check),
    ):
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(fn=fn)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (InputError, FanError, OSError, ValueError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
