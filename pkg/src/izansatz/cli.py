"""Command-line front end: compute, transform, verify, curve.

Exit codes: 0 success, 1 verification failure, 2 usage error.
Results of the genus recursions are cached under $IZANSATZ_CACHE_DIR
(default ~/.cache/izansatz), keyed by a hash of the engine sources.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import engine_1d, engine_2d, engine_hmm, forms, spectral, verify
from .algebra import Poly, from_json_obj, to_json_obj
from .coords import TPolicy, ghost_from_t, ghost_in_i, i0_poly, i_from_t, t_from_i

CACHE_ENV = "IZANSATZ_CACHE_DIR"
ENGINE_SOURCES = ("algebra.py", "recursion.py", "engine_1d.py", "engine_hmm.py", "engine_2d.py", "forms.py")


class UsageError(Exception):
    pass


def engine_hash() -> str:
    h = hashlib.sha256()
    here = Path(__file__).parent
    for name in ENGINE_SOURCES:
        h.update(name.encode())
        h.update((here / name).read_bytes())
    return h.hexdigest()[:16]


@dataclass
class Cache:
    root: Path
    version: str

    @classmethod
    def default(cls) -> "Cache":
        root = os.environ.get(CACHE_ENV) or str(Path.home() / ".cache" / "izansatz")
        return cls(Path(root), engine_hash())

    def path(self, model: str, genus: int) -> Path:
        return self.root / self.version / f"{model}-g{genus}.json"

    def get(self, model: str, genus: int) -> Poly | None:
        p = self.path(model, genus)
        try:
            entry = json.loads(p.read_text())
        except (OSError, ValueError):
            return None
        if entry.get("key") != [model, genus, self.version]:
            return None
        return from_json_obj(entry["value"])

    def put(self, model: str, genus: int, value: Poly) -> None:
        p = self.path(model, genus)
        p.parent.mkdir(parents=True, exist_ok=True)
        entry = {"key": [model, genus, self.version], "created": time.time(), "value": to_json_obj(value)}
        # write then rename so concurrent readers never see a partial file
        fd, tmp = tempfile.mkstemp(dir=p.parent, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(entry, fh, sort_keys=True)
        os.replace(tmp, p)


ENGINES = {
    "1d": engine_1d.fg_1d,
    "hmm": engine_hmm.fg_hmm,
    "hmm-fat": engine_hmm.f0k_fat,
    "2d": engine_2d.fg_2d,
}


def free_energy(model: str, genus: int, cache: Cache | None = None) -> Poly:
    """F_g (g >= 2) of a model, through the cache when one is given."""
    if cache is not None:
        hit = cache.get(model, genus)
        if hit is not None:
            return hit
    value = ENGINES[model](genus)
    if cache is not None:
        cache.put(model, genus, value)
    return value


LOG_FORMS = {
    "1d": "1/2*log(1/(1 - I1))",
    "hmm": "1/2*N^2*log(1/(1 - I1))",
    "hmm-fat": "1/2*log(1/(1 - I1))",
    "2d": "1/24*log(1/(1 - I1))",
}


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _tilde_json(table: dict) -> dict:
    terms = []
    for pat in sorted(table, key=forms._pattern_key):
        c = table[pat]
        coeff = to_json_obj(c) if isinstance(c, Poly) else {"terms": [{"coeff": f"{c.numerator}/{c.denominator}", "monomial": {}}]}
        terms.append({"pattern": {str(j): m for j, m in pat}, "coeff": coeff})
    return {"terms": terms}


def _write(out: Path | None, stem: str, payload: dict, latex: str | None) -> list:
    if out is None:
        return []
    out.mkdir(parents=True, exist_ok=True)
    written = [out / f"{stem}.json"]
    written[0].write_text(_dump(payload))
    if latex is not None:
        written.append(out / f"{stem}.tex")
        written[-1].write_text(latex + "\n")
    return written


def cmd_compute(args) -> int:
    model, g = args.model, args.genus
    if g is None:
        if model != "hmm-fat":
            raise UsageError("--genus is required")
        # the fat tower is indexed by its tH order
        g = args.order
    if g < 0:
        raise UsageError("genus must be non-negative")
    if args.eval_N is not None and model != "hmm":
        raise UsageError("--eval-N applies to the hmm model only")
    form = {"jw": "poly", "json": "poly"}.get(args.form, args.form)
    if args.form == "latex":
        form, args.latex = "poly", True
    cache = None if args.no_cache else Cache.default()
    meta = {"model": model, "genus": g, "form": form}

    if g < 2:
        if model == "hmm-fat" and g == 0:
            raise UsageError("the fat tower starts at order 1")
        if form != "poly":
            raise UsageError(f"form {form!r} needs genus >= 2; genus {g} has a closed form")
        if g == 1:
            print(LOG_FORMS[model])
            payload = dict(meta, closed_form=LOG_FORMS[model])
            _write(args.out, f"{model}-g1", payload, None)
            return 0
        if model == "2d":
            p = engine_2d.f0_2d(args.max_var, args.order)
        else:
            p = engine_1d.f0_1d(args.order)
            if model == "hmm":
                p = Poly.var("N") * p
        meta["order"] = args.order
    else:
        p = free_energy(model, g, cache)

    if args.eval_N is not None:
        p = engine_hmm.eval_N(p, Fraction(args.eval_N))
        meta["N"] = str(Fraction(args.eval_N))

    if form == "poly":
        text = p.to_text()
        payload = dict(meta, poly=to_json_obj(p))
        latex = forms.to_latex(p) if args.latex else None
    elif form == "iv":
        if model != "2d":
            raise UsageError("--form iv converts the (w, J) form of the 2d model")
        p = engine_2d.fg_2d_i(g)
        text = p.to_text()
        payload = dict(meta, poly=to_json_obj(p))
        latex = forms.to_latex(p) if args.latex else None
    else:
        conv = {"1d": "1d", "hmm": "factorial", "hmm-fat": "1d", "2d": "2d"}[model]
        table = forms.tilde_form(p, conv)
        if form == "correlators":
            table = forms.correlators(p, conv)
        text = forms.tilde_text(table)
        payload = dict(meta, convention=conv, table=_tilde_json(table))
        latex = forms.tilde_latex(table) if args.latex else None

    print(text)
    if latex is not None:
        print(latex)
    _write(args.out, f"{model}-g{g}-{form}", payload, latex)
    return 0


def cmd_transform(args) -> int:
    if args.max_deg < 1:
        raise UsageError("--max-deg must be at least 1")
    if args.max_var < 0:
        raise UsageError("--max-var must be non-negative")
    tp = TPolicy(args.max_var, args.max_deg)
    what, n = args.what, args.n
    if what == "i0":
        p = i0_poly(tp)
    elif what == "I":
        p = i_from_t(n, tp, args.at_i0_zero).poly
    elif what == "t":
        if args.at_i0_zero:
            p = Poly.var(f"I{n}")
        else:
            p = t_from_i(n, args.max_var, args.max_deg).poly
    elif what == "ghost":
        if n < 1:
            raise UsageError("ghost index must be at least 1")
        p = ghost_in_i(n, args.max_var, args.max_deg) if args.renormalized else ghost_from_t(n, tp).poly
    else:
        raise UsageError(f"unknown series {what!r}")
    print(p.to_text())
    payload = {"what": what, "n": n, "max_var": args.max_var, "max_deg": args.max_deg,
               "at_i0_zero": bool(args.at_i0_zero), "poly": to_json_obj(p)}
    _write(args.out, f"transform-{what}-{n}", payload, forms.to_latex(p) if args.latex else None)
    return 0


def cmd_verify(args) -> int:
    result = verify.run_suite(args.suite, mutate=args.plant_mutation)
    for line in verify.summary_lines(result):
        print(line)
    if args.report:
        Path(args.report).write_text(_dump(result))
    return 0 if result["pass"] else 1


def cmd_curve(args) -> int:
    model = args.model
    lo, hi = args.window
    if args.form == "i":
        if model == "2d":
            c = spectral.curve_2d_i(args.max_var)
        else:
            c = spectral.curve_1d_i(args.max_var, model, args.fat_order)
    else:
        tp = TPolicy(args.max_var, args.max_deg + 1, args.max_var + int(-lo) + 1)
        if model == "2d":
            c = spectral.curve_2d_t(tp, (lo, hi))
        else:
            c = spectral.curve_1d_t(tp, (lo, hi), model, args.fat_order)
        low = TPolicy(args.max_var, args.max_deg)
        c = spectral.CurveSeries(low.low_only(c.poly), False, c.unit)
    unit = "sqrt2" if c.unit == "sqrt2" else "1"
    var = "(z - I0)" if c.centered else "z"
    print(f"# y / {unit} in powers of {var}")
    rows = []
    for e, coeff in sorted(c.window(lo, hi).items()):
        print(f"{e}: {coeff.to_text()}")
        rows.append({"exponent": str(e), "coeff": to_json_obj(coeff)})
    payload = {"model": model, "form": args.form, "unit": c.unit, "centered": c.centered, "coefficients": rows}
    _write(args.out, f"curve-{model}-{args.form}", payload, None)
    return 0


def _orders(text: str) -> tuple:
    try:
        lo, hi = text.split("..")
        return Fraction(lo), Fraction(hi)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a..b, e.g. -6..6") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="izansatz", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="free energy of a model at one genus")
    c.add_argument("--model", choices=sorted(ENGINES), required=True)
    c.add_argument("--genus", type=int, default=None, help="genus (tH order for hmm-fat)")
    c.add_argument("--form", choices=("poly", "jw", "iv", "tilde", "correlators", "latex", "json"),
                   default="poly", help="jw is the raw form; iv rewrites 2d results in (v, I)")
    c.add_argument("--order", type=int, default=4,
                   help="truncation degree for genus zero; tH order for hmm-fat without --genus")
    c.add_argument("--max-var", type=int, default=4, help="largest I index for 2d genus zero")
    c.add_argument("--eval-N", type=Fraction, default=None)
    c.add_argument("--latex", action="store_true")
    c.add_argument("--out", type=Path, default=None, help="directory for JSON/LaTeX artifacts")
    c.add_argument("--no-cache", action="store_true")
    c.set_defaults(func=cmd_compute)

    t = sub.add_parser("transform", help="coordinate changes between t and I")
    t.add_argument("--what", choices=("i0", "I", "t", "ghost"), required=True)
    t.add_argument("--n", type=int, default=0)
    t.add_argument("--max-var", type=int, default=4)
    t.add_argument("--max-deg", type=int, default=3)
    t.add_argument("--at-i0-zero", action="store_true")
    t.add_argument("--renormalized", action="store_true", help="ghost in I-coordinates")
    t.add_argument("--latex", action="store_true")
    t.add_argument("--out", type=Path, default=None)
    t.set_defaults(func=cmd_transform)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", choices=("all",) + verify.SUITES, default="all")
    v.add_argument("--report", default=None, help="write the JSON report here")
    v.add_argument("--plant-mutation", action="store_true", help="plant known errors; the run must fail")
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("curve", help="special deformation of a spectral curve")
    k.add_argument("--model", choices=("1d", "hmm", "hmm-fat", "2d"), required=True)
    k.add_argument("--form", "--coords", dest="form", choices=("i", "t"), default="i")
    k.add_argument("--max-var", type=int, default=3)
    k.add_argument("--max-deg", type=int, default=4)
    k.add_argument("--fat-order", type=int, default=2)
    k.add_argument("--window", type=Fraction, nargs=2, default=(Fraction(-6), Fraction(6)))
    k.add_argument("--orders", type=_orders, dest="window", help="exponent window as a..b")
    k.add_argument("--out", type=Path, default=None)
    k.set_defaults(func=cmd_curve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"izansatz: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
