"""Command line: validate, hh, cohh, diagnose-signs, adjunction-check, compare-models.

Exit status is 0 when every requested check passes, 1 when a check fails
and 2 for unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

from .ainfty import (coderivation_mode_verdict, involution_compat_check, morphism_check,
                     stasheff_check_coderivation, stasheff_check_literal)
from .bimodule import adjunction_check, bimodule_check
from .document import ParseError, parse_document
from .field import FieldSpec
from .hochschild import CHAR_TWO, MODES, classical_oracle, cochain_model_compare, cohh, hh, oracle_data, small_model_compare
from .linalg import StructuralError


@dataclass
class RunConfig:
    max_weight: int = 6
    max_arity: int = 4
    field: Optional[FieldSpec] = None
    model: str = "bar"
    sign_mode: str = "koszul"
    oracle: bool = False
    fmt: str = "table"

    def __post_init__(self):
        if not self.max_weight >= self.max_arity >= 1:
            raise ValueError(f"need max-weight ≥ max-arity ≥ 1, got {self.max_weight} and {self.max_arity}")


@dataclass
class Report:
    """Ordered checks, tables and notes; rendered as text or canonical JSON."""

    title: str
    checks: list = field(default_factory=list)  # (name, ok, witness)
    tables: list = field(default_factory=list)  # (name, header, rows)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def check(self, name: str, ok: bool, witness=None):
        self.checks.append((name, bool(ok), witness))

    def render(self, fmt: str) -> str:
        if fmt == "machine":
            data = {
                "title": self.title,
                "ok": self.ok,
                "checks": [{"name": n, "ok": ok, "witness": _plain(w)} for n, ok, w in self.checks],
                "tables": [{"name": n, "header": h, "rows": [[_plain(x) for x in r] for r in rows]}
                           for n, h, rows in self.tables],
                "notes": self.notes,
            }
            return json.dumps(data, sort_keys=True, indent=1, ensure_ascii=False) + "\n"
        out = [self.title, "=" * len(self.title)]
        for n, ok, w in self.checks:
            line = f"{'PASS' if ok else 'FAIL'}  {n}"
            if w is not None and not ok:
                line += f"  witness: {_plain(w)}"
            out.append(line)
        for n, header, rows in self.tables:
            out.append("")
            out.append(n)
            cells = [header] + [[str(_plain(x)) for x in r] for r in rows]
            widths = [max(len(str(c[i])) for c in cells) for i in range(len(header))]
            for r in cells:
                out.append("  ".join(str(c).rjust(w) for c, w in zip(r, widths)).rstrip())
        for n in self.notes:
            out.append(f"note: {n}")
        return "\n".join(out) + "\n"


def _plain(x):
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, (tuple, list)):
        return [_plain(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    return str(x)


def _load(path: str, cfg: RunConfig):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    doc = parse_document(text)
    if cfg.field is not None and cfg.field != doc.field:
        text = _refield(text, cfg.field)
        doc = parse_document(text)
    doc.max_arity = max(doc.max_arity, 1)
    return doc


def _refield(text: str, F: FieldSpec) -> str:
    lines = [ln for ln in text.splitlines() if not ln.strip().startswith("field")]
    return f"field {F.label}\n" + "\n".join(lines)


def validate_command(doc, cfg: RunConfig) -> Report:
    a = doc.algebra()
    L = cfg.max_weight
    r = Report(f"validate {a.name} (L={L}, N={cfg.max_arity})")
    res = stasheff_check_coderivation(a, L)
    r.check("b∘b = 0 on the bar coalgebra", res.ok, res.witness and res.witness.word)
    if res.ok:
        inv = involution_compat_check(a, L)
        r.check("bar differential commutes with the word involution", inv.ok, inv.witness and inv.witness.word)
    for blk in doc.bimodules:
        M = doc.bimodule(blk.name, a)
        rep = bimodule_check(M, min(L, 3))
        r.check(f"bimodule {blk.name}", rep.ok, rep.witnesses or None)
    for blk in doc.morphisms:
        f = doc.morphism(blk.name, a)
        mr = morphism_check(f, L, cfg.sign_mode)
        r.check(f"morphism {blk.name}", mr.ok, mr.witness and mr.witness.word)
    return r


def _homology_report(kind: str, doc, cfg: RunConfig, module: Optional[str]) -> Report:
    a = doc.algebra()
    L = cfg.max_weight
    M = doc.bimodule(module, a) if module else None
    fn = hh if kind == "hh" else cohh
    rep = fn(a, M, L, cfg.model)
    r = Report(f"{kind} {a.name} (model={cfg.model}, L={L})")
    r.check("d∘d = 0", True)
    for mode in MODES:
        if rep.findings[mode] == CHAR_TWO:
            r.notes.append(f"{mode}: involutive dimensions are not reported in characteristic 2")
        elif rep.involutive[mode] is None:
            r.notes.append(f"{mode} involution does not commute with the differential; "
                           f"witness {_plain(rep.findings[mode])}")
    header = ["degree", "ordinary"] + list(MODES)
    oracle = None
    if cfg.oracle:
        try:
            b, m, st = oracle_data(a)
            if M is not None:
                raise ValueError("the oracle only covers coefficients in the algebra itself")
            p = a.field.characteristic
            oracle = classical_oracle(b, m, rep.window[1], "homology" if kind == "hh" else "cohomology", p, st)
            header.append("oracle")
        except ValueError as e:
            r.notes.append(f"oracle unavailable: {e}")
    rows = []
    for n in rep.degrees:
        row = [n, rep.ordinary[n]] + [rep.involutive[m][n] if rep.involutive[m] is not None else "-"
                                      for m in MODES]
        if oracle is not None:
            row.append(oracle[n])
            r.check(f"oracle agrees in degree {n}", oracle[n] == rep.ordinary[n], [n, oracle[n], rep.ordinary[n]])
        rows.append(row)
    r.tables.append((f"dimensions (certified degrees {rep.window[0]}..{rep.window[1]})", header, rows))
    if rep.window[1] < rep.window[0]:
        r.notes.append("empty certified window")
    return r


def diagnose_signs_command(doc, cfg: RunConfig) -> Report:
    a = doc.algebra()
    ns = range(1, cfg.max_arity + 2)
    r = Report(f"diagnose-signs {a.name}")
    modes = [cfg.sign_mode] + [m for m in ("koszul", "plain") if m != cfg.sign_mode]
    lit = {m: stasheff_check_literal(a, ns, m) for m in modes}
    cod = coderivation_mode_verdict(a, ns)
    header = ["arity"] + [f"literal/{m}" for m in modes] + ["b∘b"]
    rows = []
    for n in ns:
        rows.append([n] + [lit[m][n][0] for m in modes] + [cod[n][0]])
    r.tables.append(("words with nonzero residual", header, rows))
    r.check("b∘b = 0 (coderivation criterion)", all(cod[n][0] == 0 for n in ns),
            next((cod[n][1] for n in ns if cod[n][0]), None))
    for m in modes:
        bad = [n for n in ns if lit[m][n][0]]
        if bad and all(cod[n][0] == 0 for n in ns):
            r.notes.append(f"literal identity with {m} signs disagrees with b∘b at arity {bad[0]}, "
                           f"first word {_plain(lit[m][bad[0]][1])}")
    return r


def adjunction_command(doc, cfg: RunConfig, names: list) -> Report:
    a = doc.algebra()
    L = min(cfg.max_weight, 2)
    mods = [doc.bimodule(n, a) for n in names]
    rep = adjunction_check(*mods, L)
    r = Report(f"adjunction-check {a.name} (weight ≤ {L})")
    r.check("dimensions agree", rep.dim_left == rep.dim_right, [rep.dim_left, rep.dim_right])
    r.check("τ⁻¹∘τ = Id", rep.round_trip_left)
    r.check("τ∘τ⁻¹ = Id", rep.round_trip_right)
    r.check("τ preserves involutions", rep.preserves_involution)
    r.notes.append(f"with the identity involution on the quotient of M⊗Bar the right side has dimension "
                   f"{rep.literal_right_dim}")
    return r


def compare_models_command(doc, cfg: RunConfig) -> Report:
    a = doc.algebra()
    L = cfg.max_weight
    r = Report(f"compare-models {a.name} (L={L})")
    for label, cmp in (("chains", small_model_compare(a, None, L)), ("cochains", cochain_model_compare(a, None, L))):
        for variant in cmp.bar:
            r.check(f"{label}/{variant}: bar and small models agree", cmp.bar[variant] == cmp.small[variant],
                    [cmp.bar[variant], cmp.small[variant]])
        for mode, w in cmp.skipped.items():
            if CHAR_TWO in w:
                r.notes.append(f"{label}/{mode}: not compared in characteristic 2")
            else:
                r.notes.append(f"{label}/{mode}: involution does not descend; witness {_plain(w)}")
        rows = [[n, cmp.bar["ordinary"][n], cmp.small["ordinary"][n]] for n in sorted(cmp.bar["ordinary"])]
        r.tables.append((f"{label}, ordinary (degrees {cmp.window[0]}..{cmp.window[1]})",
                         ["degree", "bar", "small"], rows))
    return r


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="iainfty", description="Involutive A∞ structures and Hochschild invariants.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("document", help="path to an algebra document")
        sp.add_argument("--max-weight", type=int, default=6, help="bar weight cap L")
        sp.add_argument("--max-arity", type=int, default=4, help="operation arity cap N")
        sp.add_argument("--field", type=str, default=None, help="q or f:p (overrides the document)")
        sp.add_argument("--model", choices=["bar", "small"], default="bar")
        sp.add_argument("--sign-mode", choices=["koszul", "plain"], default="koszul")
        sp.add_argument("--oracle", action="store_true", help="add a classical-oracle column")
        sp.add_argument("--format", choices=["table", "machine"], default="table")

    for name in ("validate", "hh", "cohh", "diagnose-signs", "adjunction-check", "compare-models"):
        sp = sub.add_parser(name)
        common(sp)
        if name in ("hh", "cohh"):
            sp.add_argument("--bimodule", default=None, help="coefficient bimodule (default: diagonal)")
        if name == "adjunction-check":
            sp.add_argument("--modules", default="diagonal,diagonal,diagonal",
                            help="three bimodule names M,N,L")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.max_weight, args.max_arity,
                        FieldSpec.parse(args.field) if args.field else None,
                        args.model, args.sign_mode, args.oracle, args.format)
        doc = _load(args.document, cfg)
        if doc.max_arity > cfg.max_arity and any(len(o[0]) > cfg.max_arity for o in doc.ops):
            raise ValueError(f"document has operations above --max-arity {cfg.max_arity}")
    except (OSError, ValueError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        if args.command == "validate":
            report = validate_command(doc, cfg)
        elif args.command in ("hh", "cohh"):
            report = _homology_report(args.command, doc, cfg, args.bimodule)
        elif args.command == "diagnose-signs":
            report = diagnose_signs_command(doc, cfg)
        elif args.command == "adjunction-check":
            report = adjunction_command(doc, cfg, args.modules.split(","))
        else:
            report = compare_models_command(doc, cfg)
    except (KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except StructuralError as e:
        report = Report(f"{args.command} aborted")
        report.check(str(e), False, e.witness)
    sys.stdout.write(report.render(cfg.fmt))
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
