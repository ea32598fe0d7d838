import numpy as np
import pytest

from magnonsync.model import SystemParams


@pytest.fixture(scope="session")
def fig_params():
    """Reference parameter set with the larger drive mismatch (Omega2 = 1.1)."""
    return SystemParams(g1=0.1, g2=0.1, K1=1e-10, K2=1e-10,
                        Omega1=1.0, Omega2=1.1, OmegaC=1.0,
                        Delta1=0.001, Delta2=0.001, DeltaC=-0.2,
                        gamma1=0.1, gamma2=0.1, gammaC=0.1, nbar_m=0.0)


def random_params(rng: np.random.Generator, kerr_scale=(0.01, 0.1),
                  nbar=0.0) -> SystemParams:
    """Well-scaled random parameters; every linearization coefficient stays
    resolvable by finite differences at these magnitudes."""
    return SystemParams(
        g1=rng.uniform(0.05, 1.0), g2=rng.uniform(0.05, 1.0),
        K1=rng.uniform(*kerr_scale), K2=rng.uniform(*kerr_scale),
        Omega1=rng.uniform(0.1, 1.5), Omega2=rng.uniform(0.1, 1.5),
        OmegaC=rng.uniform(0.1, 1.5),
        Delta1=rng.uniform(-0.5, 0.5), Delta2=rng.uniform(-0.5, 0.5),
        DeltaC=rng.uniform(-0.5, 0.5),
        gamma1=rng.uniform(0.02, 0.5), gamma2=rng.uniform(0.02, 0.5),
        gammaC=rng.uniform(0.02, 0.5), nbar_m=nbar)


def random_complex(rng: np.random.Generator, rmin=0.2, rmax=1.0) -> complex:
    r = rng.uniform(rmin, rmax)
    th = rng.uniform(-np.pi, np.pi)
    return complex(r * np.cos(th), r * np.sin(th))
