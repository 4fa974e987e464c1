"""Shared fixtures-in-plain-functions for the test suite."""

import numpy as np

from qmcool import EngineConfig, HaarSampler, canonical_basis, haar_unitary, rotate_basis

EXPERIMENT_OMEGA2 = (0.02, 0.06, 0.14, 0.18, 0.46, 0.86, 1.10)

# canonical-basis closed form on the experimental grid, frozen from the
# analytic expression dE1 = omega1*delta, dE2 = -omega2*delta,
# delta = (tanh(beta1*omega1/2) - tanh(beta2*omega2/2))/4
EXPECTED_TRIPLES = {
    0.02: (0.04876027696775013, -0.0009560838621127477),
    0.06: (0.04366248614525086, -0.0025683815379559326),
    0.14: (0.0334892899404606, -0.0045965692075142),
    0.18: (0.028421956860624167, -0.0050156394459924996),
    0.46: (-0.006327037859911095, 0.0028533700152540233),
    0.86: (-0.05204674174466307, 0.04388254696118651),
    1.10: (-0.07632246188236, 0.08230853732411374),
}
EXPECTED_CLASSES = ("R", "R", "R", "R", "E", "E", "A")


def reference_config(omega2=0.18):
    return EngineConfig.from_values(1.02, omega2, 0.4, 1.0)


def closed_form_triple(cfg):
    delta = (
        np.tanh(0.5 * cfg.bath1.beta * cfg.qubit1.omega)
        - np.tanh(0.5 * cfg.bath2.beta * cfg.qubit2.omega)
    ) / 4.0
    de1 = cfg.qubit1.omega * delta
    de2 = -cfg.qubit2.omega * delta
    return de1, de2, de1 + de2


def random_density(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / rho.trace()


def random_unit_vector(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_engine_config(rng):
    beta1 = rng.uniform(0.1, 1.0)
    beta2 = beta1 + rng.uniform(0.1, 2.0)
    omega1 = rng.uniform(0.02, 1.28)
    omega2 = rng.uniform(0.02, 1.28)
    return EngineConfig.from_values(omega1, omega2, beta1, beta2)


def random_rotated_basis(seed, counter=0):
    return rotate_basis(haar_unitary(HaarSampler(seed, counter)), canonical_basis())
