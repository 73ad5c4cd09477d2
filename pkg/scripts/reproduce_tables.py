"""Print the genus 2-4 free energies for every model and diff them against the reference tables."""

import argparse

from izansatz import engine_1d, engine_2d, engine_hmm, forms, tables
from izansatz.verify import compare_table

ROWS = [
    ("1d", lambda g: engine_1d.fg_1d(g)),
    ("hmm", lambda g: engine_hmm.fg_hmm(g)),
    ("fat", lambda g: engine_hmm.f0k_fat(g)),
    ("2d", lambda g: engine_2d.j_to_i_tilde(g)),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--genus", type=int, nargs="*", default=[2, 3, 4])
    ap.add_argument("--literal", action="store_true", help="compare without the errata")
    args = ap.parse_args()

    for name, fn in ROWS:
        for g in args.genus:
            print(f"== {name} g={g}")
            out = fn(g)
            print(forms.tilde_text(out) if name == "2d" else out.to_text())
    print()
    for key in tables.PRINTED:
        r = compare_table(key, use_errata=not args.literal)
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}")
        for d in r.details:
            print(f"    {d['monomial']}: table {d['expected']}, computed {d['got']}")


if __name__ == "__main__":
    main()
