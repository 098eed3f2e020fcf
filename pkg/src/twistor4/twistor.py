"""Twistor lifts and Gauss maps of surfaces in E^4.

At an isothermal point, psi = dF/dw packs the whole tangent plane into four
complex numbers; quadratic combinations of psi produce the sphere coordinates
of the two twistor lifts.  Independently, the lifts are wedge expressions
t1 ^ t2 + eps n1 ^ n2 in any positively oriented adapted frame; both routes
must agree, which the tests exploit.  Stereographic charts g+/g- of the lift
spheres are holomorphic (respectively antiholomorphic) exactly when the
surface is minimal, and a minimal surface is isotropic precisely when one of
the lifts is constant; the five equivalent characterizations are evaluated as
residual fields over a grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .complex_structures import (
    OrthogonalComplexStructure,
    classify_ocs,
    compose_ocs,
)
from .errors import (
    GridTooSmall,
    NonUnitCoords,
    NotIsothermal,
    PoleOfChart,
)
from .geometry import FieldGrid, Frame, SurfacePointData, dwbar_field
from .linalg4 import basis_I_stack

__all__ = [
    "ChartValue",
    "LiftPoint",
    "IsotropyReport",
    "psi",
    "big_psi",
    "sphere_coords",
    "lift_isothermal",
    "lift_frame",
    "lift_matrix",
    "gauss_map",
    "chart",
    "inverse_chart",
    "g_plus_closed_form",
    "g_plus_closed_field",
    "holomorphicity_residual",
    "lift_sphere_fields",
    "lift_matrix_fields",
    "lift_agreement_residual",
    "lift_gradient_sups",
    "chart_residuals",
    "isotropy_report",
]


def psi(jets) -> np.ndarray:
    """psi^i = (df^i/du - i df^i/dv) / 2, a complex 4-vector."""
    return np.array([0.5 * (j.du - 1j * j.dv) for j in jets])


def big_psi(ps, eps: int) -> np.ndarray:
    """Quadratic lift components; broadcasts over leading axes of ps[..., 4].

    Psi^1 = psi^1 conj(psi^2) - psi^2 conj(psi^1)
            + eps (psi^3 conj(psi^4) - psi^4 conj(psi^3)),
    and cyclically for Psi^2, Psi^3 following the bivector basis pattern.
    """
    ps = np.asarray(ps)
    p1, p2, p3, p4 = (ps[..., k] for k in range(4))
    q1, q2, q3, q4 = (np.conj(ps[..., k]) for k in range(4))
    out = np.empty(ps.shape[:-1] + (3,), dtype=complex)
    out[..., 0] = p1 * q2 - p2 * q1 + eps * (p3 * q4 - p4 * q3)
    out[..., 1] = p1 * q3 - p3 * q1 + eps * (p4 * q2 - p2 * q4)
    out[..., 2] = p1 * q4 - p4 * q1 + eps * (p2 * q3 - p3 * q2)
    return out


def sphere_coords(ps, e2a, eps: int) -> np.ndarray:
    """Unit sphere coordinates -2i Psi_eps / e2a of a twistor lift.

    The entries are real by construction (each Psi component is a difference
    of conjugates); the imaginary part is dropped.
    """
    bp = big_psi(ps, eps)
    return np.real(-2j * bp / np.asarray(e2a)[..., None])


def lift_isothermal(ps, e2a: float, eps: int,
                    tol: float = 1e-8) -> OrthogonalComplexStructure:
    """Twistor lift from psi at an isothermal point."""
    ps = np.asarray(ps)
    if abs(np.sum(ps * ps)) > tol * e2a:
        raise NotIsothermal(
            "sum (psi^i)^2 does not vanish; the point is not isothermal")
    c = sphere_coords(ps, e2a, eps)
    try:
        return compose_ocs(eps, c, tol=max(tol, 1e-10))
    except NonUnitCoords as exc:
        raise NonUnitCoords(f"lift coordinates are not unit: {exc}") from None


def lift_matrix(t1, t2, n1, n2, eps: int) -> np.ndarray:
    """t1 ^ t2 + eps n1 ^ n2, broadcasting over leading axes."""
    def w(a, b):
        return (np.asarray(b)[..., :, None] * np.asarray(a)[..., None, :]
                - np.asarray(a)[..., :, None] * np.asarray(b)[..., None, :])
    return w(t1, t2) + eps * w(n1, n2)


def lift_frame(frame: Frame, eps: int) -> OrthogonalComplexStructure:
    """Twistor lift from a positively oriented adapted frame."""
    return classify_ocs(lift_matrix(frame.t1, frame.t2, frame.n1, frame.n2, eps))


@dataclass(frozen=True)
class ChartValue:
    """Stereographic chart value of a point on the lift sphere.

    `antipode` False: projection from (0, 0, 1), g = (c1 + i c2) / (1 - c3).
    `antipode` True: the point is within tolerance of (0, 0, 1) (infinite in
    the standard chart), so the value from the antipodal projection
    (c1 + i c2) / (1 + c3) is reported instead.
    """

    value: complex
    antipode: bool = False


def chart(c, tol: float = 1e-8) -> ChartValue:
    """Stereographic chart of a unit vector c on S^2."""
    c = np.asarray(c, float)
    if abs(np.linalg.norm(c) - 1.0) > max(tol, 1e-8):
        raise NonUnitCoords(f"|c| = {np.linalg.norm(c)!r} is not 1")
    g = c[0] + 1j * c[1]
    if 1.0 - c[2] <= tol:
        return ChartValue(complex(g / (1.0 + c[2])), antipode=True)
    return ChartValue(complex(g / (1.0 - c[2])), antipode=False)


def inverse_chart(g) -> np.ndarray:
    """Sphere point of a chart value: for g = a + ib in the standard chart,
    c = (2a, 2b, a^2 + b^2 - 1) / (a^2 + b^2 + 1); antipodal chart flips c3."""
    if isinstance(g, ChartValue):
        value, antipode = g.value, g.antipode
    else:
        value, antipode = complex(g), False
    a, b = value.real, value.imag
    r2 = a * a + b * b
    c = np.array([2 * a, 2 * b, r2 - 1.0]) / (r2 + 1.0)
    if antipode:
        c[2] = -c[2]
    return c


def g_plus_closed_form(ps, tol: float = 1e-8) -> complex:
    """Closed form of the plus chart directly from psi.

    Two algebraically equivalent branches exist,

        g+ = (psi^1 + i psi^4) / (i (psi^2 - i psi^3))
           = i (psi^2 + i psi^3) / (psi^1 - i psi^4);

    the one with the larger denominator modulus is used.  Both denominators
    vanish together exactly at the chart pole c+3 = 1.
    """
    p1, p2, p3, p4 = np.asarray(ps)
    d1 = p2 - 1j * p3
    d2 = p1 - 1j * p4
    scale = float(np.sum(np.abs([p1, p2, p3, p4]) ** 2))
    if abs(d1) ** 2 + abs(d2) ** 2 <= tol * scale:
        raise PoleOfChart("plus lift is at the chart pole (c3 = 1)")
    if abs(d1) >= abs(d2):
        return complex((p1 + 1j * p4) / (1j * d1))
    return complex(1j * (p2 + 1j * p3) / d2)


def g_plus_closed_field(psi_field, tol: float = 1e-8) -> np.ndarray:
    """Vectorized closed form over a grid of psi values; NaN at chart poles."""
    ps = np.asarray(psi_field)
    p1, p2, p3, p4 = (ps[..., k] for k in range(4))
    d1 = p2 - 1j * p3
    d2 = p1 - 1j * p4
    scale = np.sum(np.abs(ps) ** 2, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        branch1 = (p1 + 1j * p4) / (1j * d1)
        branch2 = 1j * (p2 + 1j * p3) / d2
    out = np.where(np.abs(d1) >= np.abs(d2), branch1, branch2)
    pole = np.abs(d1) ** 2 + np.abs(d2) ** 2 <= tol * scale
    return np.where(pole, np.nan + 0j, out)


@dataclass(frozen=True, eq=False)
class LiftPoint:
    """Both twistor lifts at one point plus their chart values."""

    fplus: OrthogonalComplexStructure
    fminus: OrthogonalComplexStructure
    gplus: ChartValue
    gminus: ChartValue

    @property
    def cplus(self) -> np.ndarray:
        return self.fplus.coords

    @property
    def cminus(self) -> np.ndarray:
        return self.fminus.coords


def gauss_map(pd: SurfacePointData) -> LiftPoint:
    """The pair of twistor lifts of the oriented tangent plane at a point."""
    fp = lift_frame(pd.frame, 1)
    fm = lift_frame(pd.frame, -1)
    return LiftPoint(fp, fm, chart(fp.coords), chart(fm.coords))


def holomorphicity_residual(field: np.ndarray, hu: float,
                            hv: Optional[float] = None) -> float:
    """sup over interior grid points of |(d/du + i d/dv) field / 2|."""
    field = np.asarray(field)
    if field.ndim != 2 or min(field.shape) < 3:
        raise GridTooSmall("holomorphicity residual needs at least a 3x3 grid")
    if hv is None:
        hv = hu
    return float(np.abs(dwbar_field(field, hu, hv)).max())


# --- grid-level lift machinery ------------------------------------------------

def lift_sphere_fields(grid: FieldGrid):
    """Sphere coordinates of both lifts over a grid (isothermal required)."""
    grid.require_isothermal()
    cp = sphere_coords(grid.psi, grid.e2a, 1)
    cm = sphere_coords(grid.psi, grid.e2a, -1)
    return cp, cm


def lift_matrix_fields(grid: FieldGrid):
    """Lift matrices over a grid from the frame field (works regardless of
    isothermality and of per-point seed branches)."""
    Mp = lift_matrix(grid.t1, grid.t2, grid.n1, grid.n2, 1)
    Mm = lift_matrix(grid.t1, grid.t2, grid.n1, grid.n2, -1)
    return Mp, Mm


def lift_agreement_residual(grid: FieldGrid) -> float:
    """Sup distance between the psi-based and the frame-based lift, both
    chiralities, over all grid points."""
    cp, cm = lift_sphere_fields(grid)
    Ap = np.einsum("...k,kij->...ij", cp, basis_I_stack(1))
    Am = np.einsum("...k,kij->...ij", cm, basis_I_stack(-1))
    Mp, Mm = lift_matrix_fields(grid)
    return float(max(np.abs(Ap - Mp).max(), np.abs(Am - Mm).max()))


def _chart_fields(c):
    c1 = c[..., 0] + 1j * c[..., 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        north = c1 / (1.0 - c[..., 2])
        south = c1 / (1.0 + c[..., 2])
    return north, south


def chart_residuals(grid: FieldGrid):
    """Holomorphicity residuals (sup |d/dwbar|) of g+ and of conj(g-).

    Each interior point is evaluated in whichever chart covers it: the
    standard one where c3 <= 0, the antipodal one where c3 > 0.  Swapping
    charts replaces the holomorphic function by its reciprocal, so the
    residual keeps testing the same statement on the pole's chart too.
    """
    if grid.n < 3:
        raise GridTooSmall("chart residuals need at least a 3x3 grid")
    cp, cm = lift_sphere_fields(grid)
    hu, hv = grid.hu, grid.hv
    out = []
    for c, conj_north in ((cp, False), (cm, True)):
        north, south = _chart_fields(c)
        if conj_north:
            holo_n, holo_s = np.conj(north), south
        else:
            holo_n, holo_s = north, np.conj(south)
        res_n = np.abs(dwbar_field(holo_n, hu, hv))
        res_s = np.abs(dwbar_field(holo_s, hu, hv))
        use_north = c[1:-1, 1:-1, 2] <= 0.0
        out.append(float(np.where(use_north, res_n, res_s).max()))
    return out[0], out[1]


@dataclass(frozen=True)
class IsotropyReport:
    """Residuals and verdicts for the five equivalent isotropy conditions.

    (a) (beta^1)^2 + (beta^2)^2 vanishes;
    (b)/(c) the two quadratic second-form identities;
    (d) theta-independence of the rotated shape operator's eigenvalues,
        tested through the two theta-dependent Fourier coefficients;
    (e) one twistor lift is constant, tested through the sup of the discrete
        gradient of each lift field, cross-checked against the closed-form
        coefficients of the lift derivatives.
    """

    res_a: float
    res_b: float
    res_c: float
    res_d: float
    res_e: float
    ok_a: bool
    ok_b: bool
    ok_c: bool
    ok_d: bool
    ok_e: bool
    consensus: Optional[bool]
    constant_lift: str          # '+', '-', 'both' or 'none'
    grad_plus: float
    grad_minus: float
    const_plus_residual: float
    const_minus_residual: float
    tol: float
    grad_threshold: float
    n: int

    def conditions(self):
        return (("a", self.res_a, self.ok_a), ("b", self.res_b, self.ok_b),
                ("c", self.res_c, self.ok_c), ("d", self.res_d, self.ok_d),
                ("e", self.res_e, self.ok_e))

    def as_dict(self) -> dict:
        return {
            "residuals": {k: r for k, r, _ in self.conditions()},
            "verdicts": {k: ok for k, _, ok in self.conditions()},
            "consensus": self.consensus,
            "isotropic": self.consensus,
            "constant_lift": self.constant_lift,
            "grad_plus": self.grad_plus,
            "grad_minus": self.grad_minus,
            "const_plus_residual": self.const_plus_residual,
            "const_minus_residual": self.const_minus_residual,
            "tol": self.tol,
            "grad_threshold": self.grad_threshold,
            "n": self.n,
        }


def _sup_gradient(M: np.ndarray, hu: float, hv: float) -> float:
    gu = np.abs(M[2:, 1:-1] - M[:-2, 1:-1]).max() / (2 * hu)
    gv = np.abs(M[1:-1, 2:] - M[1:-1, :-2]).max() / (2 * hv)
    return float(max(gu, gv))


def lift_gradient_sups(grid: FieldGrid):
    """Sup discrete gradient of each lift matrix field over the interior."""
    Mp, Mm = lift_matrix_fields(grid)
    return (_sup_gradient(Mp, grid.hu, grid.hv),
            _sup_gradient(Mm, grid.hu, grid.hv))


def isotropy_report(grid: FieldGrid, tol: float = 1e-6,
                    minimal_tol: float = 1e-8) -> IsotropyReport:
    """Evaluate the five isotropy conditions for a minimal surface in
    isothermal coordinates over a grid."""
    grid.require_isothermal()
    grid.require_minimal(minimal_tol)

    b = grid.b
    b111, b112, b122 = b[..., 0, 0, 0], b[..., 0, 0, 1], b[..., 0, 1, 1]
    b211, b212, b222 = b[..., 1, 0, 0], b[..., 1, 0, 1], b[..., 1, 1, 1]

    res_a = float(np.abs(grid.beta1 ** 2 + grid.beta2 ** 2).max())
    res_b = float(max(
        np.abs(b111 ** 2 - b112 ** 2 + b211 ** 2 - b212 ** 2).max(),
        np.abs(b111 * b112 + b211 * b212).max()))
    cos_coef = b111 ** 2 + b112 ** 2 - b211 ** 2 - b212 ** 2
    sin_coef = b111 * b211 + b112 * b212
    res_c = float(max(np.abs(cos_coef).max(), np.abs(sin_coef).max()))
    res_d = float(max(np.abs(0.5 * cos_coef).max(), np.abs(sin_coef).max()))

    grad_plus, grad_minus = lift_gradient_sups(grid)
    u0, u1, v0, v1 = grid.domain
    diam = math.hypot(u1 - u0, v1 - v0)
    grad_threshold = tol / diam

    const_plus = float(np.maximum.reduce([
        np.abs(b111 - b212), np.abs(b111 + b122),
        np.abs(b222 - b112), np.abs(b222 + b211)]).max())
    const_minus = float(np.maximum.reduce([
        np.abs(b111 + b212), np.abs(b111 + b122),
        np.abs(b222 + b112), np.abs(b222 + b211)]).max())

    ok_a = res_a <= tol
    ok_b = res_b <= tol
    ok_c = res_c <= tol
    ok_d = res_d <= tol
    plus_const = grad_plus <= grad_threshold
    minus_const = grad_minus <= grad_threshold
    ok_e = plus_const or minus_const
    res_e = min(grad_plus, grad_minus)

    if plus_const and minus_const:
        which = "both"
    elif ok_e:
        which = "+" if const_plus <= const_minus else "-"
    else:
        which = "none"

    votes = (ok_a, ok_b, ok_c, ok_d, ok_e)
    consensus = votes[0] if all(v == votes[0] for v in votes) else None

    return IsotropyReport(res_a, res_b, res_c, res_d, res_e,
                          ok_a, ok_b, ok_c, ok_d, ok_e,
                          consensus, which, grad_plus, grad_minus,
                          const_plus, const_minus, tol, grad_threshold, grid.n)
