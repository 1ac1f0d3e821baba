"""Small randomized verification run with a readable table.

    python3 scripts/verify_demo.py --dim 4 --trials 5 --seed 1
"""

import argparse

from maslovkit.verify import VerifyConfig, run_verify


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=4)
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    report = run_verify(VerifyConfig(dim=args.dim, trials=args.trials, seed=args.seed))
    width = max((len(p["name"]) for p in report["properties"]), default=10)
    print(f"{'property':<{width}}  trials  max deviation  threshold  ok")
    for p in report["properties"]:
        print(f"{p['name']:<{width}}  {p['trials']:6d}  {p['max_deviation']:13.2e}  {p['threshold']:9.0e}  "
              f"{'yes' if p['passed'] else 'NO'}")
    print("all passed" if report["passed"] else "FAILURES")
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
