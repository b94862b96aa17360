"""Walk through the regression suite with the necessity battery.

Each quadruple is classified exactly, then the three families are fitted.
A rejected quadruple whose violated condition has a witnessing family shows
that family's ratio growing like N^margin.
Run: python3 demos/necessity_battery.py [--probe]
"""

import sys

from xsblab.indices import classify
from xsblab.lab import necessity_battery, regression_suite


def main(probe=False):
    for idx, label in regression_suite():
        verdict = classify(idx)
        rep = necessity_battery(idx, probe=probe and verdict.admissible, probe_options={"draws": 2})
        slopes = " ".join(f"{fam[:6]}={fit.slope:+.3f}" for fam, fit in sorted(rep.fits.items()))
        flag = "" if rep.coherent else "  INCOHERENT"
        print(f"{str(idx):24s} {rep.conclusion:21s} {slopes}  [{label}]{flag}")


if __name__ == "__main__":
    main(probe="--probe" in sys.argv[1:])
