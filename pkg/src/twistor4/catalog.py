"""Built-in surface catalog.

Each entry carries the flags the analysis pipeline is expected to reproduce
at default tolerances; the test suite treats the catalog as its smoke-test
corpus.  Domains are chosen so that a single normal-frame seed branch stays
smooth across the whole rectangle (the catenoid avoids its waist v = 0, the
torus avoids the axis angles where coordinate seeds become tangent).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .surface_expr import SurfaceDef, parse_surface

__all__ = ["CatalogEntry", "CATALOG", "get_surface", "catalog_entries"]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    surface: SurfaceDef
    isothermal: bool
    minimal: bool
    isotropic: Optional[bool]    # None when not applicable (not minimal)
    constant_lift: str           # '+', '-', 'both' or 'none'
    note: str

    def flags_dict(self) -> dict:
        return {
            "isothermal": self.isothermal,
            "minimal": self.minimal,
            "isotropic": self.isotropic,
            "constant_lift": self.constant_lift,
        }


def _entry(name, text, domain, isothermal, minimal, isotropic, lift, note):
    return CatalogEntry(name, parse_surface(text, name=name, domain=domain),
                        isothermal, minimal, isotropic, lift, note)


CATALOG = {
    e.name: e for e in (
        _entry("plane", "u, v, 0, 0", (-1, 1, -1, 1),
               True, True, True, "both",
               "flat 2-plane; every residual vanishes identically"),
        _entry("holo_square", "u, v, u^2 - v^2, 2*u*v", (-1, 1, -1, 1),
               True, True, True, "+",
               "graph of w -> w^2; isotropic minimal, plus lift constant"),
        _entry("holo_cube", "u, v, u^3 - 3*u*v^2, 3*u^2*v - v^3", (-1, 1, -1, 1),
               True, True, True, "+",
               "graph of w -> w^3; isotropic minimal, plus lift constant"),
        _entry("clifford_torus",
               "cos(u)/sqrt(2), sin(u)/sqrt(2), cos(v)/sqrt(2), sin(v)/sqrt(2)",
               (0.3, 1.2, 0.3, 1.2),
               True, False, None, "none",
               "product torus in S^3; |H| = 1 everywhere, not minimal"),
        _entry("catenoid_E3", "cosh(v)*cos(u), cosh(v)*sin(u), v, 0",
               (-1, 1, 0.3, 1.3),
               True, True, False, "none",
               "classical catenoid inside E^3; minimal but not isotropic"),
        _entry("round_sphere",
               "2*u/(u^2 + v^2 + 1), 2*v/(u^2 + v^2 + 1), "
               "(u^2 + v^2 - 1)/(u^2 + v^2 + 1), 0",
               (-1, 1, -1, 1),
               True, False, None, "none",
               "unit 2-sphere in E^3 via inverse stereographic parametrization"),
        _entry("nonisothermal_graph", "u, v, u^2, v^2", (-1, 1, -1, 1),
               False, False, None, "none",
               "graph with g11 != g22 away from the diagonal; negative control"),
    )
}


def get_surface(name: str) -> SurfaceDef:
    try:
        return CATALOG[name].surface
    except KeyError:
        raise KeyError(
            f"unknown catalog surface {name!r}; available: "
            f"{', '.join(CATALOG)}") from None


def catalog_entries():
    return list(CATALOG.values())
