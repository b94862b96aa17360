"""Dispersive decay of the Airy wave-packet profile.

max_x |A(t, x)| decays like t^{-1/2} once N^{3/2} t >> 1, while the L^2 norm
is conserved.  The L^r norms follow the envelope <N^{3/2} t>^{-1/2 + 1/r}.
Run: python3 demos/packet_decay.py
"""

import numpy as np

from xsblab.families import airy_packet_profile, packet_envelope, packet_profile_norm, packet_xgrid

N = 16


def main():
    print("      t    max|A|   envelope      L^2      L^4   L^4 / env^(1/2)")
    for t in [0.0, 0.01, 0.03, 0.1, 0.3, 1.0]:
        x = packet_xgrid(0.5, 2 * (60 * t * N**1.5 + 256))
        peak = np.abs(airy_packet_profile(N, t, x)).max()
        env = float(packet_envelope(N, t))
        l2 = packet_profile_norm(N, t, 2)
        l4 = packet_profile_norm(N, t, 4)
        print(f"{t:7.2f} {peak:9.4f} {env:10.4f} {l2:8.4f} {l4:8.4f} {l4 / env**0.5:12.4f}")

    t = np.linspace(N**-1.5, 1.0, 32)
    peaks = [np.abs(airy_packet_profile(N, tj, packet_xgrid(0.5, 2 * (60 * tj * N**1.5 + 256)))).max() for tj in t]
    print(f"log-log decay slope of max|A|: {np.polyfit(np.log(t), np.log(peaks), 1)[0]:.4f}")


if __name__ == "__main__":
    main()
