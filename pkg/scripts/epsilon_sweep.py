"""Resolution time tau_cri as a function of the threshold epsilon.

Usage: python3 scripts/epsilon_sweep.py [--output tau_cri_vs_epsilon.csv]

Covers both amplitude-damping regimes with both witnesses. A smaller epsilon
(a more precise simulation) pushes tau_cri, and with it the frozen bounds, later.
"""

import argparse
import sys

import numpy as np

from qslmod import bounds, qmat
from qslmod.channels import AmplitudeDamping

EPSILONS = np.logspace(-1, -10, 10)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--output", default=None)
    args = parser.parse_args()
    rows = ["epsilon,gamma0_over_lambda,witness,tau_cri,frozen_av,frozen_op,frozen_quant"]
    for g0 in (0.4, 20.0):
        model = AmplitudeDamping(g0)
        for witness in ("trace-distance", "decoherence"):
            for eps in EPSILONS:
                cfg = bounds.ResolutionConfig(120.0, 0.01, float(eps), witness)
                frozen = [
                    bounds.qsl_series(k, qmat.PLUS, model, cfg, modified=True).frozen_value
                    for k in ("av", "op", "quant")
                ]
                tau = bounds.find_tau_cri(qmat.PLUS, model, cfg)
                rows.append(f"{eps:.1e},{g0:g},{witness},{tau:.12g}," + ",".join(f"{v:.12g}" for v in frozen))
    text = "\n".join(rows) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
