"""Pure-Python/numpy versions of the hot loops in ``_ckernels.pyx``."""

import numpy as np

BACKEND = "python"


def power2(g, m, out):
    a, b = complex(g[0, 0]), complex(g[0, 1])
    c, d = complex(g[1, 0]), complex(g[1, 1])
    r00, r01, r10, r11 = 1 + 0j, 0j, 0j, 1 + 0j
    for _ in range(m):
        r00, r01, r10, r11 = (
            a * r00 + b * r10,
            a * r01 + b * r11,
            c * r00 + d * r10,
            c * r01 + d * r11,
        )
    out[0, 0], out[0, 1], out[1, 0], out[1, 1] = r00, r01, r10, r11


def apply_power2_batch(gs, vs, m, out):
    x = vs[:, 0].copy()
    y = vs[:, 1].copy()
    a, b, c, d = gs[:, 0, 0], gs[:, 0, 1], gs[:, 1, 0], gs[:, 1, 1]
    for _ in range(m):
        x, y = a * x + b * y, c * x + d * y
    out[:, 0] = x
    out[:, 1] = y


def fwht(v):
    n = v.shape[0]
    h = 1
    while h < n:
        blocks = v.reshape(-1, 2, h)
        x = blocks[:, 0, :].copy()
        blocks[:, 0, :] += blocks[:, 1, :]
        blocks[:, 1, :] = x - blocks[:, 1, :]
        h *= 2
    v *= 1.0 / np.sqrt(n)


def walsh_search(v, tau, eta, e_phi, e_theta, m):
    for _ in range(m):
        v[tau] *= e_phi
        fwht(v)
        v[eta] *= e_theta
        fwht(v)
        np.negative(v, out=v)
