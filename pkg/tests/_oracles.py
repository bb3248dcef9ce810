"""Independent oracles shared by the test modules.

These deliberately avoid the code paths they check: the steady state is
cross-checked by matrix-exponential time evolution, the SNR optimum by a
brute grid plus a scipy polish, quadratures by closed forms.
"""

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

from slowgyro.sensitivity import shape_factor


def evolve_to_steady(gen, n=1.0, horizon_factor=60.0):
    """Propagate rho(0) = n|1><1| under d rho/dt = M rho long enough for
    every decaying mode to die out; returns the 3x3 matrix at the end."""
    eigvals = np.linalg.eigvals(gen.m)
    rates = np.abs(eigvals.real)
    nonzero = rates[rates > 1e-12 * max(rates.max(), 1.0)]
    if nonzero.size == 0:
        raise ValueError("generator has no decaying modes")
    t_final = horizon_factor / nonzero.min()
    rho0 = np.zeros(9, dtype=complex)
    rho0[0] = n
    return (expm(gen.m * t_final) @ rho0).reshape(3, 3)


def brute_optimum(a, n_grid=400):
    """Grid + Nelder-Mead maximum of the SNR shape factor."""
    ls = np.linspace(np.log(1e-4), np.log(1e2), n_grid)
    lx = np.linspace(np.log(a / 1e3), np.log(a * 1e3), n_grid)
    s_grid, x_grid = np.meshgrid(np.exp(ls), np.exp(lx), indexing="ij")
    vals = shape_factor(s_grid, x_grid, a)
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    res = minimize(
        lambda p: -shape_factor(np.exp(p[0]), np.exp(p[1]), a),
        [ls[i], lx[j]], method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 20000})
    s_opt, xi_opt = np.exp(res.x)
    return float(s_opt), float(xi_opt), float(-res.fun)


def random_lambda_params(rng, gamma=1e7):
    """One randomized Lambda-system parameter draw: log-uniform complex Rabi
    frequencies, detunings within +-10 gamma, nonzero dephasing."""
    def log_uniform(lo, hi):
        return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))

    rabi_p = log_uniform(0.1 * gamma, 10 * gamma) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    rabi_c = log_uniform(0.5 * gamma, 20 * gamma) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    return {
        "gamma1": gamma * rng.uniform(0.5, 1.5),
        "gamma3": gamma * rng.uniform(0.5, 1.5),
        "gamma13": log_uniform(1e-4 * gamma, 1e-1 * gamma),
        "rabi_p": rabi_p,
        "rabi_c": rabi_c,
        "delta2": rng.uniform(-10, 10) * gamma,
        "delta3": rng.uniform(-10, 10) * gamma,
        "doppler": rng.uniform(-0.3, 0.3) * gamma,
    }
