import csv
import os

import numpy as np
import pytest

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture(scope="session")
def periodic_boundary_curve():
    """Reference (rho, probability) samples for the grid-boundary law at
    intensities 1 and 2, tabulated to four decimals."""
    rows = []
    with open(os.path.join(DATA_DIR, "periodic_boundary_curve.csv")) as fh:
        for rec in csv.DictReader(fh):
            rows.append((float(rec["rho"]), float(rec["value"])))
    return np.array(rows)
