from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from idealfilt import JetRing, d_saturate, generate, make_field

settings.register_profile(
    "suite", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suite")

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


@pytest.fixture(scope="session")
def worked_ring():
    return JetRing(make_field(2), ["x", "y"], 12)


@pytest.fixture(scope="session")
def worked_filtration(worked_ring):
    h = worked_ring.from_text("x^2 + y^3")
    return d_saturate(generate(worked_ring, [(h, 2)]))
