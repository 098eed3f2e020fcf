"""Shared random generators and small oracles for the test suite."""

import numpy as np

from twistor4.catalog import CATALOG
from twistor4.complex_structures import (
    OrientedPlane,
    compose_ocs,
    h1_matrix,
    h2_matrix,
)


def unit(v):
    return v / np.linalg.norm(v)


def random_unit3(rng):
    return unit(rng.normal(size=3))


def random_unit4(rng):
    return unit(rng.normal(size=4))


def random_orthonormal_pair(rng):
    a = random_unit4(rng)
    w = rng.normal(size=4)
    b = unit(w - (w @ a) * a)
    return a, b


def random_plane(rng):
    a, b = random_orthonormal_pair(rng)
    return OrientedPlane(a, b)


def random_ocs(rng, eps):
    return compose_ocs(eps, random_unit3(rng))


def random_so3(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_so4(rng):
    q, r = np.linalg.qr(rng.normal(size=(4, 4)))
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_h1(rng):
    return h1_matrix(random_unit4(rng))


def random_h2(rng):
    return h2_matrix(random_so3(rng))


def random_catalog_point(rng, names=None, margin=0.05):
    """A random interior parameter point of a random catalog surface."""
    if names is None:
        names = list(CATALOG)
    name = names[rng.integers(len(names))]
    surface = CATALOG[name].surface
    u0, u1, v0, v1 = surface.domain
    du, dv = u1 - u0, v1 - v0
    u = rng.uniform(u0 + margin * du, u1 - margin * du)
    v = rng.uniform(v0 + margin * dv, v1 - margin * dv)
    return name, surface, u, v
