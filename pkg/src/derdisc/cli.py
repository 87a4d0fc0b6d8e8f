"""Command-line interface: ``derdisc <command> [options]``.

Exit codes: 0 success, 1 a verification or tolerance check failed,
2 usage or parameter-domain error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .entropy import compare_report, iterate_series, reports_json
from .homotopy import (
    HomComplex,
    ProjComplex,
    cohomology_dims,
    hom_dim,
    is_isomorphic,
    module_complex,
    shift,
    support,
)
from .presentation import ParameterError, build_lambda
from .twist import FunctorEngine, WordError, build_X, build_Y, inverse_twist, parse_word, twist, verify_exceptional

OUTPUT_DIR_ENV = "DERDISC_OUTPUT_DIR"

PRESETS = [(2, 1, 1), (3, 1, 2), (4, 1, 3), (3, 0, 2), (4, 2, 1), (2, 2, 2), (1, 0, 1)]
SUITES = ("cycles", "relations", "support", "roundtrip", "faithful")


class UsageError(ValueError):
    pass


@dataclass
class CliConfig:
    p: int = 3
    q: int = 1
    r: int = 2
    word: str = "X^1"
    n_max: int = 64
    t_grid: tuple = (1.0,)
    output: str = "json"
    seed: int = 0
    tol: float = 0.05
    poly_tol: float = 0.2
    jobs: int = 1


def parse_grid(text: str) -> tuple[float, ...]:
    """``"-1:1:0.5"`` (stop inclusive) or a single value ``"0"``."""
    parts = text.split(":")
    try:
        vals = [float(x) for x in parts]
    except ValueError:
        raise UsageError(f"bad t grid {text!r}") from None
    if len(vals) == 1:
        return (vals[0],)
    if len(vals) != 3 or vals[2] <= 0 or vals[1] < vals[0]:
        raise UsageError(f"t grid must be start:stop:step with step > 0, got {text!r}")
    start, stop, step = vals
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(round(start + i * step, 12) for i in range(count))


# ---------------------------------------------------------------------------
# verification suites; each returns a list of (case, ok, detail)


def _cycles(alg):
    p, q, r = alg.signature
    return [build_X(alg)] + ([build_Y(alg)] if r < p else [])


def suite_cycles(alg, seed=0):
    out = []
    for cyc in _cycles(alg):
        rep = verify_exceptional(cyc)
        out.append((f"{cyc.label} exceptional", rep.ok, "; ".join(rep.failures)))
        for i in range(1, len(cyc) + 1):
            # Hom(E_{i-1}, E_i) sits in degree k_{i-1}, so the cone shifts by 1 - k_{i-1}
            m = 1 - cyc.k(i - 1)
            ok = is_isomorphic(twist(cyc, cyc[i]), shift(cyc[i - 1], m), seed=seed)
            out.append((f"T_{cyc.label}({cyc.label}_{i}) = S^{m} {cyc.label}_{(i - 2) % len(cyc) + 1}", ok, ""))
    return out


def suite_relations(alg, seed=0):
    p, q, r = alg.signature
    eng = FunctorEngine(alg)
    lam = ProjComplex.regular(alg)
    if r == p:
        lhs = eng.apply(parse_word(f"X^{p + q}"), lam)
        return [(f"T_X^{p + q}(L) = S^{p}(L)", is_isomorphic(lhs, shift(lam, p), seed=seed), "")]
    lhs = eng.apply(parse_word(f"X^{r + q}"), lam)
    rhs = shift(eng.apply(parse_word(f"Y^{p - r}"), lam), r)
    return [(f"T_X^{r + q}(L) = S^{r} T_Y^{p - r}(L)", is_isomorphic(lhs, rhs, seed=seed), "")]


def support_checks(alg, n_max=24):
    """Support endpoints of T_X^n(L), T_Y^n(L) and the per-degree dimension bound."""
    p, q, r = alg.signature
    bound = 2 * (p + q) ** 2
    out = []
    eng = FunctorEngine(alg)
    gens = ["TX"] + (["TY"] if r < p else [])
    for gen in gens:
        c = ProjComplex.regular(alg)
        for n in range(1, n_max + 1):
            c = eng.step(gen, c)
            h = cohomology_dims(c)
            lo, hi = min(h), max(h)
            if gen == "TY":
                want = (0, r * math.ceil(n / (p - r)))
                ok = (lo, hi) == want
                detail = f"support {(lo, hi)}, expected {want}"
            elif r < p:
                ok = hi == 0 and -r * math.ceil(n / (q + r)) <= lo <= -r * (n // (q + r))
                detail = f"support {(lo, hi)}"
            else:
                # no support lemma in infinite global dimension; only the bound is checked
                ok = None
            big = max(h.values())
            if ok is not None:
                out.append((f"{gen}^{n}(L) support", ok, detail))
            out.append((f"{gen}^{n}(L) dims <= {bound}", big <= bound, f"max dim {big}"))
    return out


def suite_support(alg, seed=0):
    return support_checks(alg)


def probe_set(alg):
    probes = [("L", ProjComplex.regular(alg))]
    probes += [(f"P{v}", ProjComplex.stalk(alg, v)) for v in alg.vertices]
    for cyc in _cycles(alg):
        probes += [(f"{cyc.label}{i}", cyc[i]) for i in range(1, len(cyc) + 1)]
    return probes


def suite_roundtrip(alg, seed=0):
    out = []
    for cyc in _cycles(alg):
        for name, c in probe_set(alg):
            a = inverse_twist(cyc, twist(cyc, c))
            b = twist(cyc, inverse_twist(cyc, c))
            out.append((f"T_{cyc.label}^-1 T_{cyc.label}({name})", is_isomorphic(a, c, seed=seed), ""))
            out.append((f"T_{cyc.label} T_{cyc.label}^-1({name})", is_isomorphic(b, c, seed=seed), ""))
    return out


def suite_faithful(alg, seed=0, samples=12):
    rng = random.Random(seed)
    probes = probe_set(alg)
    out = []
    for cyc in _cycles(alg):
        images = {name: twist(cyc, c) for name, c in probes}
        for _ in range(samples):
            (na, a), (nb, b) = rng.choice(probes), rng.choice(probes)
            window = HomComplex(a, b).range
            n = rng.randint(window.start - 1, window.stop) if len(window) else 0
            d0 = hom_dim(a, b, n)
            d1 = hom_dim(images[na], images[nb], n)
            out.append((f"T_{cyc.label}: Hom({na}, S^{n} {nb})", d0 == d1, f"{d0} vs {d1}"))
    return out


SUITE_FUNCS = {
    "cycles": suite_cycles,
    "relations": suite_relations,
    "support": suite_support,
    "roundtrip": suite_roundtrip,
    "faithful": suite_faithful,
}


def _run_case(args):
    suite, sig, seed = args
    alg = build_lambda(*sig)
    return sig, SUITE_FUNCS[suite](alg, seed)


def run_suite(suite, signatures, seed=0, jobs=1):
    cases = [(suite, tuple(sig), seed) for sig in signatures]
    if jobs > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_case, cases))
    else:
        results = [_run_case(c) for c in cases]
    results.sort(key=lambda x: signatures.index(x[0]))
    return results


# ---------------------------------------------------------------------------
# commands


def _emit(text: str, name: str, ext: str, out_dir: str | None):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, f"{name}.{ext}"), "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def cmd_algebra(cfg: CliConfig, out_dir=None) -> int:
    alg = build_lambda(cfg.p, cfg.q, cfg.r)
    _emit(alg.to_json(), "algebra", "json", out_dir)
    return 0


def cmd_apply(cfg: CliConfig, out_dir=None, start: str = "L") -> int:
    alg = build_lambda(cfg.p, cfg.q, cfg.r)
    word = parse_word(cfg.word, alg)
    c = _start_object(alg, start)
    eng = FunctorEngine(alg)
    for _ in range(cfg.n_max):
        c = eng.apply(word, c)
    h = cohomology_dims(c)
    if cfg.output == "csv":
        lines = ["degree,dim"] + [f"{a},{h[a]}" for a in sorted(h)]
        _emit("\n".join(lines), "apply", "csv", out_dir)
        return 0
    doc = {
        "signature": [cfg.p, cfg.q, cfg.r],
        "word": str(word),
        "n": cfg.n_max,
        "complex": c.to_dict(),
        "cohomology": {str(a): h[a] for a in sorted(h)},
        "support": list(support(c)) if h else None,
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True), "apply", "json", out_dir)
    return 0


def _start_object(alg, spec: str) -> ProjComplex:
    if spec == "L":
        return ProjComplex.regular(alg)
    kind, idx = spec[0].upper(), spec[1:]
    try:
        return module_complex(alg, kind, int(idx))
    except ValueError as exc:
        raise UsageError(f"bad start object {spec!r}: {exc}") from None


def _entropy(cfg: CliConfig, out_dir, poly: bool) -> int:
    alg = build_lambda(cfg.p, cfg.q, cfg.r)
    word = parse_word(cfg.word, alg)
    series = iterate_series(alg, word, cfg.n_max)
    reports = compare_report(alg, word, cfg.t_grid, cfg.n_max, tol=cfg.tol,
                             poly_tol=cfg.poly_tol if poly else None, series=series)
    name = "polyentropy" if poly else "entropy"
    if cfg.output == "csv":
        _emit(series.to_csv(), f"{name}_series", "csv", out_dir)
    else:
        _emit(reports_json(reports), name, "json", out_dir)
    return 0 if all(r.passed for r in reports) else 1


def cmd_entropy(cfg: CliConfig, out_dir=None) -> int:
    return _entropy(cfg, out_dir, poly=False)


def cmd_polyentropy(cfg: CliConfig, out_dir=None) -> int:
    return _entropy(cfg, out_dir, poly=True)


def cmd_verify(cfg: CliConfig, suite: str, signatures, out_dir=None) -> int:
    results = run_suite(suite, signatures, seed=cfg.seed, jobs=cfg.jobs)
    failed = 0
    rows = []
    for sig, cases in results:
        for case, ok, detail in cases:
            failed += not ok
            rows.append({"signature": list(sig), "case": case, "pass": bool(ok), "detail": detail})
    if cfg.output == "csv":
        lines = ["p,q,r,case,pass"] + [
            f"{r['signature'][0]},{r['signature'][1]},{r['signature'][2]},\"{r['case']}\",{int(r['pass'])}" for r in rows
        ]
        _emit("\n".join(lines), f"verify_{suite}", "csv", out_dir)
    else:
        doc = {"suite": suite, "seed": cfg.seed, "cases": rows, "failed": failed, "total": len(rows)}
        _emit(json.dumps(doc, indent=2, sort_keys=True), f"verify_{suite}", "json", out_dir)
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="derdisc", description="Twist functors and entropy on derived discrete algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, word=False, n_default=None, grid=False):
        sp.add_argument("--p", type=int, default=3)
        sp.add_argument("--q", type=int, default=1)
        sp.add_argument("--r", type=int, default=2)
        sp.add_argument("--output", choices=("json", "csv"), default="json")
        sp.add_argument("--output-dir", default=os.environ.get(OUTPUT_DIR_ENV), help=f"also write results here (default ${OUTPUT_DIR_ENV})")
        sp.add_argument("--seed", type=int, default=0)
        if word:
            sp.add_argument("--word", default="X^1")
        if n_default is not None:
            sp.add_argument("--n", type=int, default=n_default)
        if grid:
            sp.add_argument("--t", default="1", help="start:stop:step or a single value")
            sp.add_argument("--tol", type=float, default=0.05)
            sp.add_argument("--poly-tol", type=float, default=0.2)

    common(sub.add_parser("algebra", help="describe Lambda(p,q,r) as JSON"))
    sp = sub.add_parser("apply", help="apply a functor word n times to a start object")
    common(sp, word=True, n_default=1)
    sp.add_argument("--start", default="L", help="L (the algebra), P<v>, S<i> or Q<i>")
    common(sub.add_parser("entropy", help="fitted vs closed-form entropy"), word=True, n_default=64, grid=True)
    common(sub.add_parser("polyentropy", help="fitted vs closed-form polynomial entropy"), word=True, n_default=256, grid=True)
    sp = sub.add_parser("verify", help="run a verification suite")
    common(sp)
    sp.add_argument("--suite", choices=SUITES, required=True)
    sp.add_argument("--presets", action="store_true", help="run over all preset signatures instead of --p/--q/--r")
    sp.add_argument("--jobs", type=int, default=1)
    return parser


def _glue_negative_values(argv):
    """Let ``--t -1:1:0.5`` and ``--word X^-1`` through argparse."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--t", "--word"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = CliConfig(p=args.p, q=args.q, r=args.r, output=args.output, seed=args.seed)
        if hasattr(args, "word"):
            cfg.word = args.word
        if hasattr(args, "n"):
            if args.n < 1:
                raise UsageError("--n must be at least 1")
            cfg.n_max = args.n
        if hasattr(args, "t"):
            cfg.t_grid = parse_grid(args.t)
            cfg.tol, cfg.poly_tol = args.tol, args.poly_tol
        out_dir = args.output_dir
        if args.command == "algebra":
            return cmd_algebra(cfg, out_dir)
        if args.command == "apply":
            return cmd_apply(cfg, out_dir, args.start)
        if args.command == "entropy":
            return cmd_entropy(cfg, out_dir)
        if args.command == "polyentropy":
            return cmd_polyentropy(cfg, out_dir)
        cfg.jobs = max(1, args.jobs)
        sigs = PRESETS if args.presets else [(cfg.p, cfg.q, cfg.r)]
        for sig in sigs:
            build_lambda(*sig)
        return cmd_verify(cfg, args.suite, sigs, out_dir)
    except (ParameterError, WordError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
