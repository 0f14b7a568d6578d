import json
import os

import pytest


@pytest.fixture(scope="session")
def oracle():
    """Frozen expected values, generated by tools/derive_fixtures.py with
    independent (mpmath/scipy/prototype) routes before the package existed."""
    path = os.path.join(os.path.dirname(__file__), "fixtures", "oracle.json")
    with open(path) as fh:
        return json.load(fh)
