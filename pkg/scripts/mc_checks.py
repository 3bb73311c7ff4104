"""Monte Carlo spot checks of the exact formulas and of the N_n sampling identities.

Prints one line per check with the z-score against the exact value.
"""
import argparse
import time
from fractions import Fraction

from orthosmith.expectation import expected_N
from orthosmith.ortho import enumerate_O2, enumerate_O3
from orthosmith.probability import prob_orthogonal
from orthosmith.verify import SampleConfig, mc_prob, sample_N


def _line(label, mean, stderr, exact, t0):
    z = (mean - float(exact)) / stderr if stderr else 0.0
    print(f"{label:<28} mean {mean:.6g} +- {stderr:.2g}  exact {exact}  z {z:+.2f}  "
          f"({time.perf_counter() - t0:.1f}s)")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--samples", type=int, default=10 ** 6)
    ap.add_argument("--threads", type=int)
    args = ap.parse_args()

    Q5 = [[Fraction(3, 5), Fraction(4, 5)], [Fraction(4, 5), Fraction(-3, 5)]]
    checks = [("O2(5) over Z", Q5, "Z", 25), ("O2(5) over Z[i]", Q5, "Zi", 25),
              ("O2(13)[3] over Z", enumerate_O2(13)[3], "Z", 169),
              ("O3(3)[10] over Z", enumerate_O3(3)[10], "Z", 9),
              ("O3(5)[40] over Z", enumerate_O3(5)[40], "Z", 25)]
    for label, Q, ring, ell2 in checks:
        t0 = time.perf_counter()
        cfg = SampleConfig(args.seed, args.samples, 1000 * ell2)
        est = mc_prob(Q, cfg, ring=ring, threads=args.threads)
        _line(label, est.mean, est.stderr, prob_orthogonal(Q, ring=ring).value, t0)

    for n, ell, samples in ((2, 5, 10 ** 5), (2, 13, 10 ** 5), (3, 3, 10 ** 4), (3, 5, 10 ** 4)):
        t0 = time.perf_counter()
        cfg = SampleConfig(args.seed, samples, 1000 * ell * ell)
        res = sample_N(n, ell, cfg, threads=args.threads)
        _line(f"N_{n}({ell}), div {res.divisor}: {res.all_divisible}", res.mean, res.stderr,
              expected_N(n, ell), t0)


if __name__ == "__main__":
    main()
