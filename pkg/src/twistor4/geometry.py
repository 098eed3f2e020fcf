"""Pointwise and grid-level geometry of surfaces in E^4.

Pointwise quantities (first and second fundamental form, Christoffel symbols,
shape operators, mean curvature vector, normal connection, the combined
frame-derivative matrices) are computed from exact second-order jets.  All
third-order information -- the normal connection, structure-equation
residuals, frame derivatives -- comes from central differences of
pointwise-exact fields, so the truncation error is an O(h^2) quantity that
the tests measure directly.

A FieldGrid evaluates the whole pointwise apparatus on a rectangular sample
grid with a single smooth choice of normal frame whenever one exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    DegenerateSeed,
    GridTooSmall,
    NotImmersed,
    NotIsothermal,
    NotMinimal,
    SeedBranchFlip,
)
from .surface_expr import SurfaceDef, eval_surface_jet

__all__ = [
    "FALLBACK_SEEDS",
    "FirstForm",
    "Frame",
    "ShapeOperators",
    "NormalConnection",
    "SurfacePointData",
    "FieldGrid",
    "StructureResiduals",
    "jet_arrays",
    "first_form",
    "is_isothermal",
    "christoffel_tangential",
    "build_frame",
    "build_frame_auto",
    "second_form",
    "shape_operators",
    "mean_curvature",
    "normal_connection",
    "gauss_weingarten_matrices",
    "beta_gamma",
    "surface_point_data",
    "dw_field",
    "dwbar_field",
    "laplacian_field",
    "structure_residuals",
    "convergence_order",
]

_E = np.eye(4)

# Normal-frame seed pairs, tried in order until both projections survive.
FALLBACK_SEEDS = (
    (_E[2], _E[3]),
    (_E[1], _E[3]),
    (_E[1], _E[2]),
    (_E[0], _E[3]),
    (_E[0], _E[2]),
    (_E[0], _E[1]),
)


@dataclass(frozen=True)
class FirstForm:
    g11: float
    g12: float
    g22: float

    @property
    def det(self) -> float:
        return self.g11 * self.g22 - self.g12 ** 2

    def matrix(self) -> np.ndarray:
        return np.array([[self.g11, self.g12], [self.g12, self.g22]])


@dataclass(frozen=True, eq=False)
class Frame:
    """Orthonormal frame (t1, t2, n1, n2) with det [t1 t2 n1 n2] = +1.

    t1, t2 span the tangent plane.  seed_branch records which fallback seed
    pair produced the normals (None for caller-supplied seeds), so stencil
    evaluations can pin the same branch.
    """

    t1: np.ndarray
    t2: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    seed_branch: Optional[int] = None

    def matrix(self) -> np.ndarray:
        return np.column_stack([self.t1, self.t2, self.n1, self.n2])


@dataclass(frozen=True, eq=False)
class ShapeOperators:
    a1: np.ndarray  # 2x2
    a2: np.ndarray  # 2x2


@dataclass(frozen=True)
class NormalConnection:
    gamma1: float
    gamma2: float


@dataclass(eq=False)
class SurfacePointData:
    """Everything pointwise at one parameter value."""

    u: float
    v: float
    jets: tuple
    form: FirstForm
    isothermal: bool
    alpha: Optional[float]
    frame: Frame
    second: np.ndarray        # b[k, i, j]
    shape: ShapeOperators
    christoffel: np.ndarray   # Gamma[k, i, j]
    H: np.ndarray
    connection: Optional[NormalConnection]
    beta1: Optional[complex]
    beta2: Optional[complex]
    gamma: Optional[complex]


def jet_arrays(jets):
    """Stack componentwise jets into six E^4 vectors (F, Fu, Fv, Fuu, Fuv, Fvv)."""
    F = np.array([j.val for j in jets])
    Fu = np.array([j.du for j in jets])
    Fv = np.array([j.dv for j in jets])
    Fuu = np.array([j.duu for j in jets])
    Fuv = np.array([j.duv for j in jets])
    Fvv = np.array([j.dvv for j in jets])
    return F, Fu, Fv, Fuu, Fuv, Fvv


def first_form(jets, tol: float = 1e-12) -> FirstForm:
    """Induced metric coefficients; raises NotImmersed at degenerate points."""
    _, Fu, Fv, *_ = jet_arrays(jets)
    g11 = float(Fu @ Fu)
    g12 = float(Fu @ Fv)
    g22 = float(Fv @ Fv)
    if g11 <= tol or g22 <= tol or g11 * g22 - g12 ** 2 <= tol:
        raise NotImmersed(
            f"tangent vectors are dependent (g11={g11:g}, g22={g22:g}, "
            f"det={g11 * g22 - g12 ** 2:g})")
    return FirstForm(g11, g12, g22)


def is_isothermal(form: FirstForm, tol: float = 1e-8) -> bool:
    scale = 0.5 * (form.g11 + form.g22)
    return (abs(form.g11 - form.g22) <= tol * scale
            and abs(form.g12) <= tol * scale)


def christoffel_tangential(jets, form: FirstForm) -> np.ndarray:
    """Christoffel symbols Gamma[k, i, j] from the tangential projections.

    For each second derivative F_ab the 2x2 Gram system
    <F_ab, F_c> = sum_k Gamma^k_ab g_kc is solved directly.
    """
    _, Fu, Fv, Fuu, Fuv, Fvv = jet_arrays(jets)
    det = form.det
    out = np.empty((2, 2, 2))
    second = ((0, 0, Fuu), (0, 1, Fuv), (1, 1, Fvv))
    for i, j, Fab in second:
        r1 = float(Fab @ Fu)
        r2 = float(Fab @ Fv)
        out[0, i, j] = (form.g22 * r1 - form.g12 * r2) / det
        out[1, i, j] = (form.g11 * r2 - form.g12 * r1) / det
        out[:, j, i] = out[:, i, j]
    return out


def _tangent_unit(Fu, Fv):
    t1 = Fu / np.linalg.norm(Fu)
    w = Fv - (Fv @ t1) * t1
    return t1, w / np.linalg.norm(w)


def build_frame(jets, seeds, tol: float = 1e-6) -> Frame:
    """Orthonormal frame from unit tangents plus Gram-Schmidt on two seed
    vectors; the second normal is flipped if needed to make det = +1.

    Raises DegenerateSeed when a seed's projection off the previously built
    vectors has norm <= tol.
    """
    _, Fu, Fv, *_ = jet_arrays(jets)
    t1, t2 = _tangent_unit(Fu, Fv)
    s1, s2 = seeds
    p1 = s1 - (s1 @ t1) * t1 - (s1 @ t2) * t2
    n1p = np.linalg.norm(p1)
    if n1p <= tol:
        raise DegenerateSeed("first seed vector is tangent within tolerance")
    n1 = p1 / n1p
    p2 = s2 - (s2 @ t1) * t1 - (s2 @ t2) * t2 - (s2 @ n1) * n1
    n2p = np.linalg.norm(p2)
    if n2p <= tol:
        raise DegenerateSeed("second seed vector degenerates within tolerance")
    n2 = p2 / n2p
    if np.linalg.det(np.column_stack([t1, t2, n1, n2])) < 0:
        n2 = -n2
    return Frame(t1, t2, n1, n2)


def build_frame_auto(jets, tol: float = 1e-6, start: int = 0) -> Frame:
    """Try the fallback seed list from index `start`; record the branch used."""
    for k in range(start, len(FALLBACK_SEEDS)):
        try:
            fr = build_frame(jets, FALLBACK_SEEDS[k], tol=tol)
        except DegenerateSeed:
            continue
        return Frame(fr.t1, fr.t2, fr.n1, fr.n2, seed_branch=k)
    raise DegenerateSeed("all fallback seed pairs degenerate")


def second_form(jets, frame: Frame) -> np.ndarray:
    """Second fundamental form components b[k, i, j] = <F_ij, n_k>."""
    _, _, _, Fuu, Fuv, Fvv = jet_arrays(jets)
    b = np.empty((2, 2, 2))
    for k, nk in enumerate((frame.n1, frame.n2)):
        b[k, 0, 0] = Fuu @ nk
        b[k, 0, 1] = b[k, 1, 0] = Fuv @ nk
        b[k, 1, 1] = Fvv @ nk
    return b


def shape_operators(form: FirstForm, second: np.ndarray) -> ShapeOperators:
    """A_k = g^{-1} b_k, self-adjoint with respect to the first form."""
    ginv = np.array([[form.g22, -form.g12], [-form.g12, form.g11]]) / form.det
    return ShapeOperators(ginv @ second[0], ginv @ second[1])


def mean_curvature(form: FirstForm, second: np.ndarray, frame: Frame) -> np.ndarray:
    """Mean curvature vector H = ((tr A_1) n_1 + (tr A_2) n_2) / 2."""
    ops = shape_operators(form, second)
    return 0.5 * (np.trace(ops.a1) * frame.n1 + np.trace(ops.a2) * frame.n2)


def _resolve_seeds(jets, seeds, tol):
    if seeds is None:
        fr = build_frame_auto(jets, tol=tol)
        return FALLBACK_SEEDS[fr.seed_branch], fr
    if isinstance(seeds, int):
        pair = FALLBACK_SEEDS[seeds]
        fr = build_frame(jets, pair, tol=tol)
        return pair, Frame(fr.t1, fr.t2, fr.n1, fr.n2, seed_branch=seeds)
    return seeds, build_frame(jets, seeds, tol=tol)


def normal_connection(surface: SurfaceDef, u: float, v: float,
                      h: Optional[float] = None, seeds=None, *,
                      richardson: bool = False,
                      seed_tol: float = 1e-6) -> NormalConnection:
    """Normal connection coefficients gamma_a = <d n_1 / da, n_2> by central
    differences of the frame field with a pinned seed branch.

    Raises SeedBranchFlip when the stencil frames are discontinuous (a seed
    degenerates on the stencil, or a normal flips relative to the center).
    """
    if h is None:
        h = 1e-4 * surface.domain_diameter()
    jets0 = eval_surface_jet(surface, u, v)
    pair, frame0 = _resolve_seeds(jets0, seeds, seed_tol)

    def frame_at(uu, vv) -> Frame:
        try:
            fr = build_frame(eval_surface_jet(surface, uu, vv), pair, tol=seed_tol)
        except DegenerateSeed as exc:
            raise SeedBranchFlip(f"seed degenerates on the stencil: {exc}") from None
        if fr.n1 @ frame0.n1 < 0.5 or fr.n2 @ frame0.n2 < 0.5:
            raise SeedBranchFlip("frame branch changes across the stencil")
        return fr

    def gammas(step):
        fu_p = frame_at(u + step, v)
        fu_m = frame_at(u - step, v)
        fv_p = frame_at(u, v + step)
        fv_m = frame_at(u, v - step)
        g1 = ((fu_p.n1 - fu_m.n1) / (2 * step)) @ frame0.n2
        g2 = ((fv_p.n1 - fv_m.n1) / (2 * step)) @ frame0.n2
        return g1, g2

    if richardson:
        a1, a2 = gammas(h)
        b1, b2 = gammas(h / 2)
        return NormalConnection((4 * b1 - a1) / 3, (4 * b2 - a2) / 3)
    g1, g2 = gammas(h)
    return NormalConnection(g1, g2)


def gauss_weingarten_matrices(pd: SurfacePointData):
    """Coefficient matrices S1, S2 of the combined frame derivative:
    d/du (F_u, F_v, n1, n2) = (F_u, F_v, n1, n2) S1 and likewise S2 for d/dv.
    """
    if pd.connection is None:
        raise ValueError("point data has no normal connection")
    G = pd.christoffel
    A = (pd.shape.a1, pd.shape.a2)
    b = pd.second
    gam = (pd.connection.gamma1, pd.connection.gamma2)
    out = []
    for j in (0, 1):
        S = np.zeros((4, 4))
        S[0, 0], S[0, 1] = G[0, 0, j], G[0, 1, j]
        S[1, 0], S[1, 1] = G[1, 0, j], G[1, 1, j]
        S[0, 2], S[0, 3] = -A[0][0, j], -A[1][0, j]
        S[1, 2], S[1, 3] = -A[0][1, j], -A[1][1, j]
        S[2, 0], S[2, 1] = b[0, 0, j], b[0, 1, j]
        S[3, 0], S[3, 1] = b[1, 0, j], b[1, 1, j]
        S[2, 3] = -gam[j]
        S[3, 2] = gam[j]
        out.append(S)
    return out[0], out[1]


def beta_gamma(pd: SurfacePointData):
    """Complexified second-form and connection coefficients at an isothermal
    point: beta^k = (b^k_11 - i b^k_12)/2 and gamma = (gamma_1 + i gamma_2)/2."""
    if not pd.isothermal:
        raise NotIsothermal("beta and gamma are defined at isothermal points only")
    if pd.connection is None:
        raise ValueError("point data has no normal connection")
    b = pd.second
    beta1 = 0.5 * (b[0, 0, 0] - 1j * b[0, 0, 1])
    beta2 = 0.5 * (b[1, 0, 0] - 1j * b[1, 0, 1])
    gamma = 0.5 * (pd.connection.gamma1 + 1j * pd.connection.gamma2)
    return beta1, beta2, gamma


def _isothermal_nearby(surface: SurfaceDef, u: float, v: float,
                       tol: float) -> bool:
    """Probe four neighbouring points so that an accidental pointwise
    coincidence g11 = g22 does not count as isothermal coordinates."""
    u0, u1, v0, v1 = surface.domain
    du = 1e-3 * max(u1 - u0, v1 - v0)
    probes = {(min(max(u + s * du, u0), u1), v) for s in (-1.0, 1.0)}
    probes |= {(u, min(max(v + s * du, v0), v1)) for s in (-1.0, 1.0)}
    probes.discard((u, v))
    for up, vp in probes:
        try:
            form = first_form(eval_surface_jet(surface, up, vp))
        except Exception:
            continue
        if not is_isothermal(form, tol):
            return False
    return True


def surface_point_data(surface: SurfaceDef, u: float, v: float, *,
                       h: Optional[float] = None,
                       seed_branch: Optional[int] = None,
                       immersion_tol: float = 1e-12,
                       isothermal_tol: float = 1e-8,
                       seed_tol: float = 1e-6,
                       with_connection: bool = True,
                       neighborhood_isothermal: bool = True) -> SurfacePointData:
    """Assemble all pointwise geometry at (u, v)."""
    jets = eval_surface_jet(surface, u, v)
    form = first_form(jets, tol=immersion_tol)
    iso = is_isothermal(form, isothermal_tol)
    if iso and neighborhood_isothermal:
        iso = _isothermal_nearby(surface, u, v, isothermal_tol)
    frame = build_frame_auto(jets, tol=seed_tol,
                             start=0 if seed_branch is None else seed_branch)
    b = second_form(jets, frame)
    shape = shape_operators(form, b)
    H = mean_curvature(form, b, frame)
    chris = christoffel_tangential(jets, form)
    conn = None
    if with_connection:
        conn = normal_connection(surface, u, v, h=h, seeds=frame.seed_branch,
                                 seed_tol=seed_tol)
    alpha = 0.5 * math.log(form.g11) if iso else None
    beta1 = beta2 = gamma = None
    if iso:
        beta1 = 0.5 * (b[0, 0, 0] - 1j * b[0, 0, 1])
        beta2 = 0.5 * (b[1, 0, 0] - 1j * b[1, 0, 1])
        if conn is not None:
            gamma = 0.5 * (conn.gamma1 + 1j * conn.gamma2)
    return SurfacePointData(u, v, jets, form, iso, alpha, frame, b, shape,
                            chris, H, conn, beta1, beta2, gamma)


# --- grids -------------------------------------------------------------------

def _dot(a, b):
    return np.einsum("...c,...c->...", a, b)


class FieldGrid:
    """Pointwise-exact fields sampled on an n x n rectangular grid.

    The normal frame uses one seed pair for the whole grid whenever some
    fallback pair keeps both projections above `branch_margin` everywhere
    (branch_uniform True); otherwise each point falls back independently and
    frame-derivative quantities are refused.
    """

    def __init__(self, surface: SurfaceDef, n: int, domain=None, *,
                 seed_branch: Optional[int] = None,
                 branch_margin: float = 1e-2,
                 seed_tol: float = 1e-6,
                 immersion_tol: float = 1e-12,
                 isothermal_tol: float = 1e-8):
        if n < 3:
            raise GridTooSmall(f"need at least a 3x3 grid, got n={n}")
        self.surface = surface
        self.n = n
        u0, u1, v0, v1 = domain if domain is not None else surface.domain
        self.domain = (float(u0), float(u1), float(v0), float(v1))
        self.us = np.linspace(u0, u1, n)
        self.vs = np.linspace(v0, v1, n)
        self.hu = float(self.us[1] - self.us[0])
        self.hv = float(self.vs[1] - self.vs[0])

        shape = (n, n, 4)
        F = np.empty(shape)
        Fu = np.empty(shape)
        Fv = np.empty(shape)
        Fuu = np.empty(shape)
        Fuv = np.empty(shape)
        Fvv = np.empty(shape)
        comps = surface.components
        from .surface_expr import _eval  # local alias, hot loop
        for i, uu in enumerate(self.us):
            for j, vv in enumerate(self.vs):
                for k in range(4):
                    jet = _eval(comps[k], uu, vv)
                    F[i, j, k] = jet.val
                    Fu[i, j, k] = jet.du
                    Fv[i, j, k] = jet.dv
                    Fuu[i, j, k] = jet.duu
                    Fuv[i, j, k] = jet.duv
                    Fvv[i, j, k] = jet.dvv
        self.F, self.Fu, self.Fv = F, Fu, Fv
        self.Fuu, self.Fuv, self.Fvv = Fuu, Fuv, Fvv

        self.g11 = _dot(Fu, Fu)
        self.g12 = _dot(Fu, Fv)
        self.g22 = _dot(Fv, Fv)
        self.det = self.g11 * self.g22 - self.g12 ** 2
        if np.min(self.det) <= immersion_tol or np.min(self.g11) <= immersion_tol:
            i, j = np.unravel_index(np.argmin(self.det), self.det.shape)
            raise NotImmersed(
                f"degenerate point at (u, v) = ({self.us[i]:g}, {self.vs[j]:g})")

        scale = 0.5 * (self.g11 + self.g22)
        self.isothermal_mask = (
            (np.abs(self.g11 - self.g22) <= isothermal_tol * scale)
            & (np.abs(self.g12) <= isothermal_tol * scale))
        self.isothermal = bool(self.isothermal_mask.all())
        self.e2a = self.g11
        self.alpha = 0.5 * np.log(self.g11) if self.isothermal else None

        self._build_frames(seed_branch, branch_margin, seed_tol)

        b = np.empty((n, n, 2, 2, 2))
        fab = ((0, 0, Fuu), (0, 1, Fuv), (1, 1, Fvv))
        for k, nk in enumerate((self.n1, self.n2)):
            for i, j, arr in fab:
                b[..., k, i, j] = _dot(arr, nk)
                b[..., k, j, i] = b[..., k, i, j]
        self.b = b
        self.tr_a1 = (self.g22 * b[..., 0, 0, 0] - 2 * self.g12 * b[..., 0, 0, 1]
                      + self.g11 * b[..., 0, 1, 1]) / self.det
        self.tr_a2 = (self.g22 * b[..., 1, 0, 0] - 2 * self.g12 * b[..., 1, 0, 1]
                      + self.g11 * b[..., 1, 1, 1]) / self.det
        self.H = 0.5 * (self.tr_a1[..., None] * self.n1
                        + self.tr_a2[..., None] * self.n2)
        self.H_norm = np.sqrt(_dot(self.H, self.H))

        self.psi = 0.5 * (Fu - 1j * Fv)
        self.beta1 = 0.5 * (b[..., 0, 0, 0] - 1j * b[..., 0, 0, 1])
        self.beta2 = 0.5 * (b[..., 1, 0, 0] - 1j * b[..., 1, 0, 1])

    def _branch_projections(self, pair):
        s1, s2 = pair
        t1, t2 = self.t1, self.t2
        p1 = s1 - _dot(s1, t1)[..., None] * t1 - _dot(s1, t2)[..., None] * t2
        p1n = np.sqrt(_dot(p1, p1))
        with np.errstate(divide="ignore", invalid="ignore"):
            n1 = p1 / p1n[..., None]
        p2 = (s2 - _dot(s2, t1)[..., None] * t1 - _dot(s2, t2)[..., None] * t2
              - _dot(s2, n1)[..., None] * n1)
        p2n = np.sqrt(_dot(p2, p2))
        with np.errstate(divide="ignore", invalid="ignore"):
            n2 = p2 / p2n[..., None]
        return n1, n2, p1n, p2n

    def _build_frames(self, seed_branch, margin, seed_tol):
        nrm = np.sqrt(self.g11)[..., None]
        self.t1 = self.Fu / nrm
        w = self.Fv - _dot(self.Fv, self.t1)[..., None] * self.t1
        self.t2 = w / np.sqrt(_dot(w, w))[..., None]

        if seed_branch is not None:
            n1, n2, p1n, p2n = self._branch_projections(FALLBACK_SEEDS[seed_branch])
            if min(p1n.min(), p2n.min()) <= seed_tol:
                raise DegenerateSeed(
                    f"seed branch {seed_branch} degenerates on the grid")
            self.seed_branch = seed_branch
            self.branch_uniform = True
        else:
            for k, pair in enumerate(FALLBACK_SEEDS):
                n1, n2, p1n, p2n = self._branch_projections(pair)
                if min(p1n.min(), p2n.min()) > margin:
                    self.seed_branch = k
                    self.branch_uniform = True
                    break
            else:
                n1, n2, branch = self._per_point_frames(seed_tol)
                self.seed_branch = branch
                self.branch_uniform = False

        M = np.stack([self.t1, self.t2, n1, n2], axis=-1)
        flip = np.linalg.det(M) < 0
        n2 = np.where(flip[..., None], -n2, n2)
        self.n1, self.n2 = n1, n2

    def _per_point_frames(self, seed_tol):
        n = self.n
        n1 = np.zeros((n, n, 4))
        n2 = np.zeros((n, n, 4))
        branch = np.full((n, n), -1, dtype=int)
        for k, pair in enumerate(FALLBACK_SEEDS):
            c1, c2, p1n, p2n = self._branch_projections(pair)
            ok = (p1n > seed_tol) & (p2n > seed_tol) & (branch < 0)
            n1 = np.where(ok[..., None], c1, n1)
            n2 = np.where(ok[..., None], c2, n2)
            branch = np.where(ok, k, branch)
            if (branch >= 0).all():
                break
        if (branch < 0).any():
            i, j = np.argwhere(branch < 0)[0]
            raise DegenerateSeed(
                f"no seed pair works at (u, v) = ({self.us[i]:g}, {self.vs[j]:g})")
        return n1, n2, branch

    def sup_H(self) -> float:
        return float(self.H_norm.max())

    def require_isothermal(self):
        if not self.isothermal:
            i, j = np.unravel_index(
                np.argmax(np.abs(self.g11 - self.g22) + np.abs(self.g12)),
                self.g11.shape)
            raise NotIsothermal(
                f"coordinates are not isothermal, e.g. at "
                f"(u, v) = ({self.us[i]:g}, {self.vs[j]:g})")

    def require_minimal(self, tol: float = 1e-8):
        if self.sup_H() > tol:
            raise NotMinimal(f"sup |H| = {self.sup_H():g} exceeds {tol:g}")

    def gamma_fields(self):
        """Normal connection coefficients on the interior, from central
        differences of the grid frame field.  Needs one smooth branch."""
        if not self.branch_uniform:
            raise SeedBranchFlip(
                "no single seed branch covers the grid; frame-derivative "
                "fields are not available")
        for arr in (self.n1, self.n2):
            if (_dot(arr[1:], arr[:-1]).min() <= 0.0
                    or _dot(arr[:, 1:], arr[:, :-1]).min() <= 0.0):
                raise SeedBranchFlip("frame field is discontinuous on the grid")
        inner = np.s_[1:-1, 1:-1]
        dn1_u = (self.n1[2:, 1:-1] - self.n1[:-2, 1:-1]) / (2 * self.hu)
        dn1_v = (self.n1[1:-1, 2:] - self.n1[1:-1, :-2]) / (2 * self.hv)
        g1 = _dot(dn1_u, self.n2[inner])
        g2 = _dot(dn1_v, self.n2[inner])
        return g1, g2


# --- finite-difference operators on grid fields ------------------------------

def dw_field(f: np.ndarray, hu: float, hv: float) -> np.ndarray:
    """(d/du - i d/dv)/2 of a field by central differences; interior values."""
    return 0.5 * ((f[2:, 1:-1] - f[:-2, 1:-1]) / (2 * hu)
                  - 1j * (f[1:-1, 2:] - f[1:-1, :-2]) / (2 * hv))


def dwbar_field(f: np.ndarray, hu: float, hv: float) -> np.ndarray:
    """(d/du + i d/dv)/2 of a field by central differences; interior values."""
    return 0.5 * ((f[2:, 1:-1] - f[:-2, 1:-1]) / (2 * hu)
                  + 1j * (f[1:-1, 2:] - f[1:-1, :-2]) / (2 * hv))


def laplacian_field(f: np.ndarray, hu: float, hv: float) -> np.ndarray:
    return ((f[2:, 1:-1] - 2 * f[1:-1, 1:-1] + f[:-2, 1:-1]) / hu ** 2
            + (f[1:-1, 2:] - 2 * f[1:-1, 1:-1] + f[1:-1, :-2]) / hv ** 2)


@dataclass(frozen=True)
class StructureResiduals:
    """Sup-norms of the structure-equation residuals on a grid."""

    gauss: float
    codazzi1: float
    codazzi2: float
    ricci: float
    beta_sq_holo: float  # d/dwbar of (beta^1)^2 + (beta^2)^2
    n: int
    hu: float
    hv: float

    def as_dict(self) -> dict:
        return {
            "gauss": self.gauss,
            "codazzi1": self.codazzi1,
            "codazzi2": self.codazzi2,
            "ricci": self.ricci,
            "beta_sq_holo": self.beta_sq_holo,
        }


def structure_residuals(grid: FieldGrid, minimal_tol: float = 1e-8) -> StructureResiduals:
    """Residual sup-norms of the Gauss, Codazzi and Ricci equations plus the
    holomorphicity of (beta^1)^2 + (beta^2)^2, for a minimal surface in
    isothermal coordinates.

    All derivative operators are central differences of pointwise-exact
    fields, so each residual decays like h^2 under grid refinement.
    """
    if grid.n < 5:
        raise GridTooSmall("structure residuals need at least a 5x5 grid")
    grid.require_isothermal()
    grid.require_minimal(minimal_tol)

    hu, hv = grid.hu, grid.hv
    inner = np.s_[1:-1, 1:-1]
    inner2 = np.s_[2:-2, 2:-2]

    e2a = grid.e2a
    lap_alpha = laplacian_field(grid.alpha, hu, hv)
    rhs = 4.0 / e2a[inner] * (np.abs(grid.beta1[inner]) ** 2
                              + np.abs(grid.beta2[inner]) ** 2)
    gauss = float(np.abs(lap_alpha - rhs).max())

    g1, g2 = grid.gamma_fields()
    gamma = 0.5 * (g1 + 1j * g2)
    cod1 = dwbar_field(grid.beta1, hu, hv) - grid.beta2[inner] * gamma
    cod2 = dwbar_field(grid.beta2, hu, hv) + grid.beta1[inner] * gamma
    codazzi1 = float(np.abs(cod1).max())
    codazzi2 = float(np.abs(cod2).max())

    dgamma = dw_field(gamma, hu, hv)
    ricci_term = (2.0 / e2a[inner2] * grid.beta1[inner2]
                  * np.conj(grid.beta2[inner2]))
    ricci = float(np.abs(np.imag(dgamma + ricci_term)).max())

    beta_sq = grid.beta1 ** 2 + grid.beta2 ** 2
    beta_sq_holo = float(np.abs(dwbar_field(beta_sq, hu, hv)).max())

    return StructureResiduals(gauss, codazzi1, codazzi2, ricci, beta_sq_holo,
                              grid.n, hu, hv)


def convergence_order(coarse: float, fine: float,
                      floor: float = 1e-12) -> Optional[float]:
    """Observed order log2(coarse/fine) for residuals at h and h/2.

    Returns None when both values sit at the roundoff floor (the residual is
    exactly zero in theory, so no order can be measured).
    """
    if max(coarse, fine) <= floor:
        return None
    if fine == 0.0:
        return math.inf
    return math.log2(coarse / fine)
