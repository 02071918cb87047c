"""Coincidence rate behind a single beam splitter as a function of |t|^2."""

import argparse
import math

import numpy as np

from vacfield.correlations import coincidence_rate
from vacfield.spdc_model import BeamSplitter, CrystalParams, hom_detector_fields


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=101)
    ap.add_argument("--gain", type=float, default=0.1)
    args = ap.parse_args()

    print("transmittance,rate_per_gain2,closed_form")
    for big_t in np.linspace(0, 1, args.points):
        bs = BeamSplitter.symmetric(big_t)
        rate = coincidence_rate(*hom_detector_fields(CrystalParams(args.gain), bs)).value
        print(f"{big_t:.4f},{rate / args.gain**2:.12f},{(2 * big_t - 1) ** 2:.12f}")


if __name__ == "__main__":
    main()
