"""Print the spectral curve of each model in I-coordinates and check it against the t-coordinate form."""

import argparse

from izansatz import spectral
from izansatz.verify import curve_checks


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-var", type=int, default=3)
    ap.add_argument("--max-deg", type=int, default=3)
    ap.add_argument("--window", type=int, nargs=2, default=(-4, 4))
    args = ap.parse_args()
    lo, hi = args.window

    for model in ("1d", "hmm", "2d"):
        c = spectral.curve_2d_i(args.max_var) if model == "2d" else spectral.curve_1d_i(args.max_var, model)
        print(f"== {model}, I-form, in powers of {'(z - I0)' if c.centered else 'z'}")
        for e, coeff in sorted(c.window(lo, hi).items()):
            print(f"  {e}: {coeff.to_text()}")
    print()
    for r in curve_checks(args.max_var, args.max_deg, (lo, hi)):
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}")


if __name__ == "__main__":
    main()
