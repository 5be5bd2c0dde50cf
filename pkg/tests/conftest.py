import sys
import numpy as np

from hypcurve.blaschke import BlaschkeProduct
from hypcurve.intersection import BlaschkePair


def disk_points(rng, k, rmax=0.8):
    return tuple(rmax * np.sqrt(rng.uniform(size=k)) * np.exp(2j * np.pi * rng.uniform(size=k)))


def random_pair(rng, degrees=(2, 4), rmax=0.8):
    m, n = (int(d) for d in rng.integers(degrees[0], degrees[1] + 1, 2))
    return BlaschkePair(BlaschkeProduct(disk_points(rng, m, rmax)), BlaschkeProduct(disk_points(rng, n, rmax)))


def random_pairs(count, seed=0, **kw):
    rng = np.random.default_rng(seed)
    return [random_pair(rng, **kw) for _ in range(count)]


def match_points(a, b, tol=1e-7):
    """Greedy one-to-one matching of (lam, mu, mult) triples; True if all pair up."""
    if len(a) != len(b):
        return False
    left = list(b)
    for lam, mu, k in a:
        hits = [i for i, (l2, m2, k2) in enumerate(left)
                if abs(l2 - lam) <= tol * (1 + abs(lam)) and abs(m2 - mu) <= tol * (1 + abs(mu)) and k2 == k]
        if not hits:
            return False
        left.pop(hits[0])
    return True


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
