"""Apply the constraint operators to the computed free energies and report every residual."""

import argparse
import time

from izansatz import verify


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--model", choices=sorted(verify.RESIDUAL_PLAN), nargs="*",
                    default=sorted(verify.RESIDUAL_PLAN))
    ap.add_argument("--max-var", type=int, default=5)
    ap.add_argument("--max-deg", type=int, default=5)
    ap.add_argument("--mutate", action="store_true", help="perturb F_2 to see the checks fire")
    args = ap.parse_args()

    bad = 0
    for model in args.model:
        start = time.perf_counter()
        reps = verify.virasoro_residual(model, max_index=args.max_var, max_degree=args.max_deg,
                                        mutate=args.mutate, **verify.RESIDUAL_PLAN[model])
        for r in reps:
            s = r.summary()
            print(f"  [{'PASS' if s['pass'] else 'FAIL'}] L_{s['m']} g={s['g']} {s['sample']}")
        bad += sum(not r.passed for r in reps)
        print(f"-- {model}: {len(reps)} residuals in {time.perf_counter() - start:.2f}s")
    print(f"{bad} nonzero")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
