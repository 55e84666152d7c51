"""Compute reference values with mpmath (independent of wignerlab) and
freeze them to tests/data/oracles.json.

    python3 scripts/freeze_oracles.py
"""

import json
import pathlib

import mpmath as mp

mp.mp.dps = 40
OUT = pathlib.Path(__file__).resolve().parents[1] / "tests" / "data" / "oracles.json"


def rho(x):
    return mp.sqrt(4 - x * x) / (2 * mp.pi) if abs(x) < 2 else mp.mpf(0)


def G(x):
    x = mp.mpf(x)
    if x <= -2:
        return mp.mpf(0)
    return mp.quad(rho, [-2, min(x, 2)])


def _breaks(z):
    # refine around the near-pole at Re z so the quadrature resolves it
    pts = {mp.mpf(-2), mp.mpf(0), mp.mpf(2)}
    for k in range(-6, 7):
        x = mp.re(z) + k * mp.im(z)
        if -2 < x < 2:
            pts.add(x)
    return sorted(pts)


def s(z):
    z = mp.mpc(z)
    return mp.quad(lambda x: rho(x) / (x - z), _breaks(z), maxdegree=12)


def s_prime(z):
    z = mp.mpc(z)
    return mp.quad(lambda x: rho(x) / (x - z) ** 2, _breaks(z), maxdegree=12)


def quantile(p):
    return mp.findroot(lambda x: G(x) - p, (-2, 2), solver="anderson")


def charpoly_roots(A):
    a = [[mp.mpf(x) for x in row] for row in A]
    tr = a[0][0] + a[1][1] + a[2][2]
    m2 = (a[0][0] * a[1][1] - a[0][1] * a[1][0] + a[0][0] * a[2][2] - a[0][2] * a[2][0]
          + a[1][1] * a[2][2] - a[1][2] * a[2][1])
    det = mp.det(mp.matrix(a))
    roots = mp.polyroots([1, -tr, m2, -det], maxsteps=200, extraprec=100)
    return sorted(float(mp.re(r)) for r in roots)


def main():
    xs = [-2.5, -2.0, -1.5, -0.3, 0.0, 0.7, 1.0, 1.99, 2.0, 3.0]
    zs = [(0, 1), (0.5, 0.1), (-1, 0.01), (1.5, 0.05), (-0.3, 2), (1.9, 0.3), (3, 0.5), (100, 1), (0, 1e-3)]
    ps = [1e-6, 0.01, 0.25, 0.5, 0.8, 0.999999]
    shift = mp.mpf("0.05")
    cubic = [[2.0, -1.0, 0.5], [-1.0, 0.0, 3.0], [0.5, 3.0, -1.5]]
    data = {
        "cdf": [[x, float(G(x))] for x in xs],
        "stieltjes": [[u, v, float(mp.re(s(complex(u, v)))), float(mp.im(s(complex(u, v))))] for u, v in zs
                      ],
        "stieltjes_prime": [[u, v, float(mp.re(s_prime(complex(u, v)))), float(mp.im(s_prime(complex(u, v))))]
                            for u, v in [(0, 1), (0.5, 0.5), (-1.5, 0.2), (3, 0.5)]],
        "quantile": [[p, float(quantile(p))] for p in ps],
        "density_mass": float(mp.quad(rho, [-2, 0, 2])),
        "shift_delta": [float(shift), float(2 * G(shift / 2) - 1)],
        "cubic": {"matrix": cubic, "eigenvalues": charpoly_roots(cubic)},
        "envelope_n100_i": float(mp.mpf(1) / 100 + 1 / (mp.mpf(1000) * mp.mpf(5) ** mp.mpf("0.25"))),
        "lower_edge_n1000_u0": float(mp.mpf("0.001") / mp.sqrt(2)),
        "smoothing_a": float(mp.tan(3 * mp.pi / 8)),
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(data, indent=1) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
