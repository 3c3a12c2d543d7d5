import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from cosine_sine import catalog, enumerate_involutive_automorphisms, make_field

settings.register_profile("ci", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def sigmas(name):
    S = catalog(name)
    return S, enumerate_involutive_automorphisms(S)


@pytest.fixture(params=["gf:5", "gf:3^2", "gf:7^2", "complex:1e-9"])
def any_field(request):
    return make_field(request.param)
