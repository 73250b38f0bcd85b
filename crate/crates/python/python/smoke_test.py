"""Smoke test for the layerpot extension module."""

import math

import layerpot


def main():
    z, w = layerpot.gauss_legendre(16)
    assert len(z) == 16 and abs(sum(w) - 2.0) < 1e-13

    peanut = layerpot.Domain("peanut")
    theta, phi = peanut.inverse_parameterize([-0.0894, 0.4040, 0.0])
    assert abs(theta - math.pi / 2) < 1e-12

    pos, normal, jac = peanut.surface_frame(theta, phi)
    assert abs(sum(c * c for c in normal) - 1.0) < 1e-12 and jac > 0

    u, exact = layerpot.evaluate(peanut, 3, theta, phi, 1e-6)
    assert abs(u - exact) < 1e-12, (u, exact)

    sphere = layerpot.Domain("sphere")
    assert abs(layerpot.gauss_law(sphere, [0.0, 0.0, 0.0], n=16) + 1.0) < 1e-12

    eps = [10.0 ** (-k / 4) for k in range(4, 21)]
    rows = layerpot.epsilon_sweep(peanut, 3, eps, n=128)
    a = [r for r in rows if r["point_id"] == "A"]
    slope = layerpot.fit_slope([r["eps"] for r in a], [r["abs_error"] for r in a])
    assert 1.7 <= slope <= 2.3, slope

    assert layerpot.CSV_HEADER.startswith("domain,approx,n,eps")
    print(f"ok: approx3 slope at peanut A = {slope:.2f}")


if __name__ == "__main__":
    main()
