import numpy as np
import pytest

import spinchain as sc

TWO_PI = 2.0 * np.pi


@pytest.fixture(scope="session")
def eq12():
    """The reference parameter set: larmor (100, 200, 400), J=5, J'=0.2,
    Omega=0.1, all in 2*pi x MHz."""
    return sc.ChainParams.from_cycles_mhz((100, 200, 400), 5, 0.2, 0.1)


@pytest.fixture(scope="session")
def protocol(eq12):
    """The two-pulse Bell preparation: pi/2 on |000>->|001>, pi on |001>->|101>."""
    p1 = sc.Pulse(carrier=sc.flip_resonance(eq12, 0, 0), angle=np.pi / 2)
    p2 = sc.Pulse(carrier=sc.flip_resonance(eq12, 1, 2), angle=np.pi)
    return [p1, p2]


@pytest.fixture(scope="session")
def pulse1_traj(eq12, protocol):
    return sc.run_sequence(eq12, 0, protocol[:1], sc.StepPolicy(), sample_every=100)


@pytest.fixture(scope="session")
def full_traj(eq12, protocol):
    return sc.run_sequence(eq12, 0, protocol, sc.StepPolicy(), sample_every=100)
