"""Write a handful of scenario files and evaluate each one.

    python3 scripts/generate_examples.py [outdir]

The files are the same documents ``maslovkit generate`` produces, so they can be
fed back to ``maslovkit compute``.
"""

import sys
from pathlib import Path

from maslovkit.cli import generate_document, write_atomic
from maslovkit.scenario_io import dumps, evaluate

EXAMPLES = {
    "sphere_n1": dict(kind="sphere", n=1),
    "sphere_n2": dict(kind="sphere", n=2),
    "clutching_k3": dict(kind="clutching", k=[3]),
    "half_turn_line": dict(kind="lagrangian"),
    "circle_action_2_1": dict(kind="group-action", weights=[2, 1]),
    "planar_three_boundaries": dict(kind="planar", k=[1, 1, -1]),
    "random_framed_loop": dict(kind="framed-loop", n=2, coisotropic_dim=3, seed=7, samples=256),
    "regular_framed_loop": dict(kind="framed-loop", n=2, coisotropic_dim=3, seed=7, samples=256, regular=True),
}


def main(outdir="scenarios"):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    for name, params in EXAMPLES.items():
        params = dict(params)
        doc = generate_document(params.pop("kind"), **params)
        write_atomic(out / f"{name}.json", dumps(doc) + "\n")
        rec = evaluate(doc)
        shown = rec.rounded if rec.integer else f"{rec.value:.6f}"
        print(f"{name:<26} {doc['kind']:<16} index {shown}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main(*sys.argv[1:2]))
