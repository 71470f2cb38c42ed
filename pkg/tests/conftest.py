import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("hitlab", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("hitlab")

# The degree-35 tier runs by default (under a minute with the prefilter);
# HITLAB_EXTENDED=0 skips it.
EXTENDED = os.environ.get("HITLAB_EXTENDED", "1").strip().lower() not in ("0", "false", "no")


def pytest_collection_modifyitems(config, items):
    if EXTENDED:
        return
    skip = pytest.mark.skip(reason="extended tier disabled by HITLAB_EXTENDED=0")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)
