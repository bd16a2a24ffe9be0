"""Test helpers"""

import numpy as np

from horocurv.core.geodesic import seed_frame
from horocurv.models.geometry import Point, TangentVector


def unit_vector(model, x, direction) -> TangentVector:
    """g-normalized TangentVector at chart point x along a chart direction"""
    x = np.asarray(x, dtype=float)
    d = np.asarray(direction, dtype=float)
    g = model.metric_at(Point(x))
    return TangentVector(Point(x), d / np.sqrt(d @ g @ d), unit=True)


def random_triple(model, rng, height_range=(0.5, 2.0)):
    """Random half-space point, unit direction and rotated orthonormal frame"""
    x = np.empty(model.dimension)
    x[:-1] = rng.uniform(-1.0, 1.0, size=model.dimension - 1)
    x[-1] = rng.uniform(*height_range)
    u = model.unit_directions(x, rng, 1)[0]
    v = TangentVector(Point(x), u, unit=True)
    frame = seed_frame(model, v)
    q, _ = np.linalg.qr(rng.standard_normal((model.dimension - 1, model.dimension - 1)))
    return v, q @ frame


def rotated_frame(frame, rng):
    """The same orthonormal frame mixed by a random orthogonal matrix"""
    q, _ = np.linalg.qr(rng.standard_normal((frame.shape[0], frame.shape[0])))
    return q @ frame
