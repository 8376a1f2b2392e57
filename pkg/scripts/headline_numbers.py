"""Print the quoted numbers next to what the library computes."""

import math

from steering_loophole.efficiency import critical_efficiency, eta_infinity, limit_zero_entanglement
from steering_loophole.lhs import lhs_bound
from steering_loophole.measurements import NAMED_SETS, named_set, platonic_set
from steering_loophole.noise import crossover_epsilon, min_over_theta

QUOTED_C = {
    "square": 1 / math.sqrt(2),
    "octahedron": 1 / math.sqrt(3),
    "custom4": (1 + math.sqrt(13)) / 8,
    "custom5": (1 + 2 * math.sqrt(13)) / 15,
    "icosahedron": (1 + math.sqrt(5)) / 6,
    "dodecahedron": (3 + math.sqrt(5)) / 10,
}
QUOTED_LIMIT = {"square": 0.5, "octahedron": 1 / 3, "custom4": 0.291, "custom5": 0.268, "icosahedron": 0.266}


def main():
    print(f"{'set':<14}{'C_n':>14}{'quoted':>14}{'eta_c(pi/2)':>14}{'theta->0':>12}{'quoted':>9}")
    for label in NAMED_SETS:
        mset = named_set(label)
        c = lhs_bound(mset).c_n
        lim = limit_zero_entanglement(mset)
        q = QUOTED_LIMIT.get(label.value)
        print(f"{label.value:<14}{c:>14.10f}{QUOTED_C[label.value]:>14.10f}{critical_efficiency(math.pi / 2, mset):>14.10f}"
              f"{lim:>12.6f}{'' if q is None else f'{q:.3f}':>9}")
    print(f"cube4 C = {lhs_bound(platonic_set('cube4')).c_n:.12f}")
    print(f"continuum eta(pi/4) = {eta_infinity(math.pi / 4):.12f}")

    ico = named_set("icosahedron")
    theta, eta = min_over_theta(ico, 0.10)
    print(f"icosahedron, colored eps=0.10: min eta = {eta:.6f} at theta = {theta:.4g} (quoted 0.3114)")
    print(f"icosahedron crossover eps = {crossover_epsilon(ico):.5f} (quoted 'up to 0.35')")
    print(f"octahedron crossover eps  = {crossover_epsilon(named_set('octahedron')):.5f}")


if __name__ == "__main__":
    main()
