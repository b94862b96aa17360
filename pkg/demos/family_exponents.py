"""Growth exponents of the three extremal families.

For each family the mixed norm and the X^{s,b} norm are evaluated at
N = 4..64 and the log-log slopes are compared with the exponent arithmetic.
Run: python3 demos/family_exponents.py
"""

import numpy as np

from xsblab.families import ModulationShell, UBlock, WavePacket

NS = (4, 8, 16, 32, 64)


def slope(values):
    return float(np.polyfit(np.log2(NS), np.log2(values), 1)[0])


def main():
    print("family           quantity              slope   expected")
    for q, r in [(2, 2), (4, 4), ("inf", "inf")]:
        qq = np.inf if q == "inf" else q
        rr = np.inf if r == "inf" else r
        got = slope([UBlock(N).mixed_norm(q, r) for N in NS])
        print(f"U-block          L^{q} L^{r}".ljust(39) + f"{got:7.3f}   {4 - 3 / qq - 1 / rr:7.3f}")
    print(f"U-block          X^(0,0)".ljust(39) + f"{slope([UBlock(N).xsb_norm(0, 0) for N in NS]):7.3f}   {2:7.3f}")

    for s, b in [(0, 0), (0.4, 0.6)]:
        got = slope([ModulationShell(N).xsb_norm(s, b) for N in NS])
        print(f"ModulationShell  X^({s},{b})".ljust(39) + f"{got:7.3f}   {s + 0.5:7.3f}")
    got = slope([ModulationShell(N).center_value() for N in NS])
    print("ModulationShell  |u(0,0)|".ljust(39) + f"{got:7.3f}   {1:7.3f}")

    for s, b in [(0, 0), (0, 0.25), (0.5, 0.25)]:
        got = slope([WavePacket(N).xsb_norm(s, b) for N in NS])
        print(f"WavePacket       X^({s},{b})".ljust(39) + f"{got:7.3f}   {s - 0.25:7.3f}")
    got = slope([WavePacket(N).mixed_norm(2, 4) for N in NS])
    print("WavePacket       L^2 L^4".ljust(39) + f"{got:7.3f}   {-0.375:7.3f}")


if __name__ == "__main__":
    main()
