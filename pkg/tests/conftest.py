"""Independent oracles shared by the test modules.

Nothing here imports the package: entropies come from mpmath, eigenvalues from
numpy.linalg on explicitly built outer products.
"""

import math

import mpmath as mp
import numpy as np
import pytest

mp.mp.dps = 40

# Values frozen from mpmath at 40 digits (see oracle_* helpers below).
H_075 = 0.81127812445913286391
ONE_MINUS_H_075 = 0.18872187554086713609
LN2_ONE_MINUS_H_075 = 0.13081203594113695913
LN2_H_075 = 0.56233514461880835029
DELTA_TH = {0.2: 0.99409886095729477148, 0.5: 0.94224858146889188567,
            0.8: 0.75885489997433188722}
# 1e-6-resolution grid scan of H((1+d)/2) against 1 - H(0.75)
DELTA_TH_GRID_SCAN_COS05 = 0.942249


def oracle_binary_entropy(p):
    p = mp.mpf(p)
    if p in (0, 1):
        return mp.mpf(0)
    return -p * mp.log(p, 2) - (1 - p) * mp.log(1 - p, 2)


def oracle_delta_th(cos_theta):
    target = 1 - oracle_binary_entropy((1 + mp.mpf(cos_theta)) / 2)
    return mp.findroot(lambda d: oracle_binary_entropy((1 + d) / 2) - target,
                       (mp.mpf("0.001"), mp.mpf("0.999999")), solver="bisect")


def grid_scan_delta_th(cos_theta, step=1e-6):
    d = np.arange(0.0, 1.0 + step / 2, step)
    p = (1.0 + d) / 2.0
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -p * np.log2(p) - (1 - p) * np.log2(1 - p)
    h = np.nan_to_num(h)
    pc = (1.0 + cos_theta) / 2.0
    target = 1.0 + pc * math.log2(pc) + (1 - pc) * math.log2(1 - pc)
    return float(d[np.argmin(np.abs(h - target))])


def outer_pair(theta, phi):
    """Projectors built from raw amplitude vectors with numpy."""
    psi1 = np.array([1.0, 0.0], dtype=complex)
    psi2 = np.array([np.exp(1j * phi) * np.cos(theta), np.sin(theta)])
    return np.outer(psi1, psi1.conj()), np.outer(psi2, psi2.conj())


def numpy_entropy_bits(m):
    lam = np.linalg.eigvalsh(m)
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log2(lam)))


@pytest.fixture
def theta_grid():
    return np.linspace(0.0, math.pi / 2, 1000)
