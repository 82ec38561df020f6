"""Smoke test for the Python extension. Run after building it:

    pip install --no-build-isolation -e crates/py
    python python/smoke_test.py
"""

import math
from pathlib import Path

import leakregion as lr

DATA = Path(__file__).resolve().parent.parent / "data"


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


def main():
    ch = lr.Channel.from_file(str(DATA / "xor_channel.toml"))
    assert ch.cards == (2, 2, 2, 2)
    assert lr.Channel.from_toml(ch.to_toml()).to_toml() == ch.to_toml()

    cond = lr.Conditional.from_toml((DATA / "xor_cond.toml").read_text(), ch)
    inner = lr.inner_bounds(ch, cond)
    outer = lr.outer_bounds(ch, cond)
    b = lr.binning(ch, cond)
    assert b["r01"] <= outer["r01"] + 1e-9 and outer["m1"] <= inner["l1"] + 1e-9
    assert b["feasible"] and close(b["r01"], 1.0) and b["l1"] == 0.0 and len(b["vertices"]) == 2

    front = lr.zero_rate(ch, 16)
    assert front == [(0.0, 0.0, 0.0, 0.0, 0.0)], front

    noisy = lr.Channel.from_file(str(DATA / "noisy_channel.toml"))
    found = lr.search(noisy, (2, 2, 1), seed=1, samples=3, local_iters=4)
    pts = [q for q, _ in found]
    again = [q for q, _ in lr.search(noisy, (2, 2, 1), seed=1, samples=3, local_iters=4)]
    assert pts and pts == again
    assert all(c is not None and len(c.table) == 2 * 2 * 2 * 2 for _, c in found)
    label, weights = lr.check(pts, pts[0])
    assert label == "INSIDE" and close(sum(w for _, w in weights), 1.0, 1e-9)
    label, _ = lr.check(pts, (10.0, 0.0, 0.0, 0.0, 0.0))
    assert label == "OUTSIDE-OF-FOUND"

    r1, r2, e1, e2 = lr.gaussian_region(1, 1, 2, 1, 1, gamma=1.0)
    assert close(r1, 0.5) and r2 == 0.0 and close(e1, 0.5 * math.log2(1.5))
    co = lr.gaussian_coefficients(1, 1, 2, 1, 1, 0.5, 0.5, 0.5)
    assert close(co["alpha10"], 0.2) and close(co["alpha22"], 0.15)
    assert lr.gaussian_sweep(1, 1, 2, 1, 1, gamma_steps=5, rho_steps=5)
    assert lr.verify_gaussian(1, 1, 2, 1, 1, 0.3, 0.4, -0.2)["passed"]
    assert all(r["passed"] for r in lr.verify_batch(seed=3, samples=20))

    try:
        lr.gaussian_region(1, 1, 2, 0, 0, rho1=0.5)
    except ValueError:
        pass
    else:
        raise AssertionError("rho with zero state variance must be rejected")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
