"""Planar conic geometry kernel.

Conics are real symmetric 3x3 homogeneous forms, stored with unit Frobenius
norm and the sign fixed so the first nonzero entry (row-major) is positive.
All tolerances in this module are quoted against that normalization, with
configuration data living in roughly unit-scale scenes.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

# Default tolerances (see module docstring for the normalization they assume).
EPS_FIT = 1e-9          # residual bound for fitted conics
TOL_INCIDENCE = 1e-8    # default point-on-conic tolerance
TOL_MERGE = 1e-7        # distance below which two points are "the same"
DEG_EPS = 1e-10         # determinant threshold for degeneracy decisions
COND_WARN = 1e12        # design-matrix condition number warning threshold


class GeometryError(ValueError):
    """Raised when a geometric precondition is violated."""


# ---------------------------------------------------------------------------
# Conics
# ---------------------------------------------------------------------------

KINDS = ("ellipse", "parabola", "hyperbola", "pair-of-lines", "double-line",
         "point", "empty")


def _normalize_form(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    M = 0.5 * (M + M.T)
    nrm = np.linalg.norm(M)
    if nrm == 0.0:
        raise GeometryError("zero conic form")
    M = M / nrm
    flat = M.reshape(-1)
    for v in flat:
        if abs(v) > 1e-14:
            if v < 0:
                M = -M
            break
    return M


@dataclass(frozen=True)
class Conic:
    """A conic as a normalized symmetric 3x3 form."""

    form: np.ndarray
    kind: str = field(init=False)

    def __post_init__(self):
        M = _normalize_form(self.form)
        M.setflags(write=False)
        object.__setattr__(self, "form", M)
        object.__setattr__(self, "kind", classify_form(M))

    @classmethod
    def from_coeffs(cls, a, b, c, d, e, f) -> "Conic":
        """Conic from a*x^2 + b*xy + c*y^2 + d*xz + e*yz + f*z^2."""
        return cls(np.array([[a, b / 2, d / 2],
                             [b / 2, c, e / 2],
                             [d / 2, e / 2, f]]))

    def coeffs(self) -> tuple[float, ...]:
        M = self.form
        return (M[0, 0], 2 * M[0, 1], M[1, 1], 2 * M[0, 2], 2 * M[1, 2],
                M[2, 2])

    def residual(self, p) -> float:
        """|p^T A p| for the unit-norm homogenization of the affine point."""
        v = np.array([p[0], p[1], 1.0])
        v /= np.linalg.norm(v)
        return float(abs(v @ self.form @ v))

    def is_degenerate(self) -> bool:
        return self.kind in ("pair-of-lines", "double-line", "point")

    def same_as(self, other: "Conic", tol: float = 1e-9) -> bool:
        """Proportionality test on the normalized forms."""
        return bool(np.linalg.norm(self.form - other.form) < tol
                    or np.linalg.norm(self.form + other.form) < tol)

    def __eq__(self, other):
        return isinstance(other, Conic) and np.array_equal(self.form,
                                                           other.form)

    def __hash__(self):
        return hash(self.form.tobytes())


def conic_from_normalized_coeffs(coeffs) -> Conic:
    """Rebuild a conic from coefficients of an already-normalized form.

    Skips renormalization so that serialized conics round-trip bit-exactly;
    rejects coefficient vectors that are not unit-norm to 1e-9."""
    a, b, c, d, e, f = (float(v) for v in coeffs)
    M = np.array([[a, b / 2, d / 2],
                  [b / 2, c, e / 2],
                  [d / 2, e / 2, f]])
    if abs(np.linalg.norm(M) - 1.0) > 1e-9:
        raise GeometryError("conic coefficients are not normalized")
    M.setflags(write=False)
    conic = object.__new__(Conic)
    object.__setattr__(conic, "form", M)
    object.__setattr__(conic, "kind", classify_form(M))
    return conic


def classify_form(M: np.ndarray) -> str:
    det3 = np.linalg.det(M)
    det2 = M[0, 0] * M[1, 1] - M[0, 1] ** 2
    if abs(det3) < DEG_EPS:
        # Degenerate: rank decides between line pairs and a double line.
        s = np.linalg.svd(M, compute_uv=False)
        if s[1] < 1e-9:
            return "double-line"
        if det2 > DEG_EPS:
            return "point"
        return "pair-of-lines"
    if det2 > DEG_EPS:
        # Real ellipse iff det3 and the 2x2 trace have opposite signs.
        return "ellipse" if det3 * (M[0, 0] + M[1, 1]) < 0 else "empty"
    if det2 < -DEG_EPS:
        return "hyperbola"
    return "parabola"


def classify(conic: Conic) -> str:
    return conic.kind


def point_on_conic(p, conic: Conic, tol: float = TOL_INCIDENCE) -> bool:
    if tol <= 0:
        raise GeometryError("tolerance must be positive")
    return conic.residual(p) <= tol


# ---------------------------------------------------------------------------
# Collinearity and line helpers
# ---------------------------------------------------------------------------

def cross2(u, v) -> float:
    """z-component of the cross product of two planar vectors."""
    return float(u[0] * v[1] - u[1] * v[0])


def _collinear(a, b, c, rel: float = 1e-10) -> bool:
    a, b, c = (np.asarray(v, float) for v in (a, b, c))
    area = abs(cross2(b - a, c - a))
    scale = max(np.linalg.norm(b - a) * np.linalg.norm(c - a), 1e-300)
    return area <= rel * scale


def line_through(p, q) -> np.ndarray:
    """Homogeneous line through two affine points."""
    return np.cross(np.array([p[0], p[1], 1.0]), np.array([q[0], q[1], 1.0]))


def line_conic_intersections(conic: Conic, p0, p1,
                             tol: float = 1e-12) -> list[np.ndarray]:
    """Real intersections of the line through p0, p1 with a conic.

    The line is parametrized as p0 + t*(p1 - p0); a discriminant below
    -1e-12 means no real intersection, values in [-1e-12, 0] are clamped
    (tangency reported once).
    """
    A = conic.form
    h0 = np.array([p0[0], p0[1], 1.0])
    d = np.array([p1[0] - p0[0], p1[1] - p0[1], 0.0])
    a = d @ A @ d
    b = h0 @ A @ d
    c = h0 @ A @ h0
    if abs(a) < 1e-15 * max(abs(b), abs(c), 1.0):
        if abs(b) < 1e-300:
            return []
        ts = [-c / (2 * b)]
    else:
        disc = b * b - a * c
        if disc < -1e-12:
            return []
        disc = max(disc, 0.0)
        r = math.sqrt(disc)
        ts = [(-b + r) / a, (-b - r) / a]
        if r < tol:
            ts = ts[:1]
    return [(h0 + t * d)[:2] for t in ts]


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------

def conic_from_5_points(pts) -> Conic:
    """Unique conic through five points, no three collinear.

    Computed as the least-singular direction of the 5x6 design matrix in
    the monomial basis (x^2, xy, y^2, xz, yz, z^2).
    """
    pts = [np.asarray(p, float) for p in pts]
    if len(pts) != 5:
        raise GeometryError("exactly five points required")
    for i in range(5):
        for j in range(i + 1, 5):
            if np.linalg.norm(pts[i] - pts[j]) < TOL_MERGE:
                raise GeometryError(f"duplicate points at indices {i},{j}")
    for i in range(5):
        for j in range(i + 1, 5):
            for k in range(j + 1, 5):
                if _collinear(pts[i], pts[j], pts[k]):
                    raise GeometryError(
                        f"points {i},{j},{k} are collinear; conic not unique")
    rows = [[x * x, x * y, y * y, x, y, 1.0] for x, y in pts]
    D = np.array(rows)
    _, s, Vt = np.linalg.svd(D)
    if s[4] > 0 and s[0] / s[4] > COND_WARN:
        warnings.warn("ill-conditioned five-point conic fit", RuntimeWarning)
    a, b, c, d, e, f = Vt[-1]
    return Conic.from_coeffs(a, b, c, d, e, f)


def central_conic_from_pairs(center, reps) -> Conic:
    """Conic symmetric about `center` through three representative points.

    Each representative stands for an antipodal pair, so the conic contains
    all six vertices of the centrally symmetric hexagon they define.
    """
    center = np.asarray(center, float)
    reps = [np.asarray(r, float) for r in reps]
    if len(reps) != 3:
        raise GeometryError("exactly three representatives required")
    rows = []
    for r in reps:
        x, y = r - center
        rows.append([x * x, x * y, y * y])
    M = np.array(rows)
    if abs(np.linalg.det(M)) < 1e-14 * max(np.linalg.norm(M), 1.0) ** 3:
        raise GeometryError("degenerate hexagon: singular central system")
    a, b, c = np.linalg.solve(M, np.ones(3))
    # Form centered at the origin, then translated to `center`.
    M0 = np.array([[a, b / 2, 0.0], [b / 2, c, 0.0], [0.0, 0.0, -1.0]])
    cx, cy = center
    Hinv = np.array([[1.0, 0.0, -cx], [0.0, 1.0, -cy], [0.0, 0.0, 1.0]])
    return Conic(Hinv.T @ M0 @ Hinv)


# ---------------------------------------------------------------------------
# Conic-conic intersection via the pencil
# ---------------------------------------------------------------------------

def _split_degenerate(C: np.ndarray) -> list[np.ndarray]:
    """Split a (near-)rank-2 symmetric form into its two lines.

    Works in complex arithmetic; callers filter for real results. Uses the
    adjugate to find the singular point, then reduces to a rank-1 matrix
    whose rows/columns are the lines.
    """
    C = np.asarray(C, dtype=complex)
    # Adjugate of a 3x3 matrix.
    adj = np.array([[np.linalg.det(np.delete(np.delete(C, i, 0), j, 1))
                     * (-1) ** (i + j) for i in range(3)] for j in range(3)])
    i = int(np.argmax(np.abs(np.diag(adj))))
    if abs(adj[i, i]) < 1e-14:
        # Rank <= 1: a double line.
        j = int(np.argmax(np.abs(C).sum(axis=1)))
        return [C[j], C[j]]
    beta = np.sqrt(-adj[i, i] + 0j)
    p = adj[:, i] / beta
    skew = np.array([[0, p[2], -p[1]], [-p[2], 0, p[0]], [p[1], -p[0], 0]])
    M = C + skew
    r, c = np.unravel_index(int(np.argmax(np.abs(M))), M.shape)
    return [M[r, :], M[:, c]]


def _line_conic_complex(line: np.ndarray, A: np.ndarray) -> list[np.ndarray]:
    """Intersections (homogeneous, complex) of a projective line with a conic."""
    basis = []
    for e in np.eye(3):
        v = np.cross(line, e)
        if np.linalg.norm(v) > 1e-12 * (np.linalg.norm(line) + 1):
            basis.append(v)
        if len(basis) == 2:
            break
    if len(basis) < 2:
        return []
    p0, p1 = basis
    a = p1 @ A @ p1
    b = p0 @ A @ p1
    c = p0 @ A @ p0
    out = []
    if abs(a) < 1e-16 * (abs(b) + abs(c) + 1):
        if abs(b) > 1e-300:
            out.append(p0 - c / (2 * b) * p1)
    else:
        r = np.sqrt(b * b - a * c + 0j)
        out.append(p0 + ((-b + r) / a) * p1)
        out.append(p0 + ((-b - r) / a) * p1)
    return out


def _newton_polish(p, A: np.ndarray, B: np.ndarray, iters: int = 30):
    """Refine a common point of two conics with 2D Newton steps."""
    x, y = float(p[0]), float(p[1])
    for _ in range(iters):
        v = np.array([x, y, 1.0])
        fa = v @ A @ v
        fb = v @ B @ v
        if max(abs(fa), abs(fb)) < 1e-16:
            break
        ga = 2 * (A[:2] @ v)
        gb = 2 * (B[:2] @ v)
        J = np.array([ga, gb])
        try:
            delta = np.linalg.solve(J, -np.array([fa, fb]))
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(delta)):
            break
        step = np.linalg.norm(delta)
        if step > 0.1:
            delta *= 0.1 / step
        x += delta[0]
        y += delta[1]
    return np.array([x, y])


def conic_conic_intersections(A: Conic, B: Conic,
                              merge_tol: float = TOL_MERGE) -> list[np.ndarray]:
    """All real affine intersection points of two nondegenerate conics.

    Finds a degenerate member of the pencil A + lambda*B, splits it into
    two lines and intersects those with A; candidates are Newton-polished
    and kept only if they lie on both conics. Tangential intersections are
    reported once. Raises on degenerate or coincident inputs.
    """
    if A.is_degenerate() or B.is_degenerate():
        raise GeometryError("degenerate conic input")
    if A.same_as(B):
        raise GeometryError(
            "coincident conics: five or more common points force equality")
    MA, MB = A.form, B.form
    # det(MA + t*MB) is a cubic in t; recover it from four evaluations.
    ts = np.array([0.0, 1.0, -1.0, 2.0])
    vals = [np.linalg.det(MA + t * MB) for t in ts]
    coeffs = np.linalg.solve(np.vander(ts, 4), vals)
    roots = np.roots(coeffs)
    real_roots = [r.real for r in roots
                  if abs(r.imag) <= 1e-8 * (1 + abs(r.real))]
    candidates = []
    for lam in real_roots:
        C = MA + lam * MB
        for line in _split_degenerate(C):
            for q in _line_conic_complex(line, MA.astype(complex)):
                nrm = np.linalg.norm(q)
                if nrm == 0 or abs(q[2]) < 1e-10 * nrm:
                    continue  # point at infinity
                q = q / q[2]
                if max(abs(q[0].imag), abs(q[1].imag)) > 1e-6 * (
                        1 + abs(q[0].real) + abs(q[1].real)):
                    continue
                candidates.append(np.array([q[0].real, q[1].real]))
    points = []
    for p in candidates:
        p = _newton_polish(p, MA, MB)
        if A.residual(p) > 10 * merge_tol or B.residual(p) > 10 * merge_tol:
            continue
        if any(np.linalg.norm(p - q) < merge_tol for q in points):
            continue
        points.append(p)
    points.sort(key=lambda p: (round(p[0], 9), round(p[1], 9)))
    return points[:4]


# ---------------------------------------------------------------------------
# Signed ratios and Carnot's criterion
# ---------------------------------------------------------------------------

def signed_ratio(X, Z, Y) -> float:
    """Signed ratio XZ/ZY for collinear X, Z, Y: the t with Z-X = t*(Y-Z)."""
    X, Z, Y = (np.asarray(v, float) for v in (X, Z, Y))
    if not _collinear(X, Z, Y, rel=1e-8):
        raise GeometryError("signed_ratio requires collinear points")
    d = Y - Z
    dd = float(d @ d)
    if dd < 1e-24:
        raise GeometryError("signed_ratio undefined: Z = Y")
    return float((Z - X) @ d / dd)


# Slot layout for Carnot data: (A1, A2, B1, B2, C1, C2); side "a" points lie
# on line BC, "b" on CA, "c" on AB.
_CARNOT_SIDES = ("a", "a", "b", "b", "c", "c")


def _carnot_ratio(tri, side: str, p) -> float:
    A, B, C = tri
    if side == "a":     # BA_i / A_iC
        return signed_ratio(B, p, C)
    if side == "b":     # CB_i / B_iA
        return signed_ratio(C, p, A)
    return signed_ratio(A, p, B)  # AC_i / C_iB


def _check_carnot_point(tri, side: str, p, vertex_eps: float = 1e-9):
    A, B, C = (np.asarray(v, float) for v in tri)
    ends = {"a": (B, C), "b": (C, A), "c": (A, B)}[side]
    p = np.asarray(p, float)
    if not _collinear(ends[0], ends[1], p, rel=1e-7):
        raise GeometryError(f"point {p} not on side line '{side}'")
    for v in (A, B, C):
        if np.linalg.norm(p - v) < vertex_eps:
            raise GeometryError("side point coincides with a triangle vertex")


def carnot_product(tri, pts) -> float:
    """Product of the six signed ratios that is 1 iff the points are coconical.

    `pts` is ordered (A1, A2, B1, B2, C1, C2) with the A-points on line BC,
    B-points on CA and C-points on AB.
    """
    tri = [np.asarray(v, float) for v in tri]
    pts = [np.asarray(p, float) for p in pts]
    if len(pts) != 6:
        raise GeometryError("exactly six side points required")
    prod = 1.0
    for p, side in zip(pts, _CARNOT_SIDES):
        _check_carnot_point(tri, side, p)
        prod *= _carnot_ratio(tri, side, p)
    return prod


def carnot_solve_sixth(tri, pts, side: str) -> np.ndarray:
    """Complete five Carnot side points to a coconical six-tuple.

    `pts` is the canonical six-slot order with the second slot of `side`
    omitted; the returned point is the unique one on that side line making
    the six-ratio product equal to 1.
    """
    if side not in ("a", "b", "c"):
        raise GeometryError(f"unknown side {side!r}")
    tri = [np.asarray(v, float) for v in tri]
    pts = [np.asarray(p, float) for p in pts]
    if len(pts) != 5:
        raise GeometryError("exactly five placed points required")
    missing = {"a": 1, "b": 3, "c": 5}[side]
    slots = list(pts)
    slots.insert(missing, None)
    prod = 1.0
    for p, s in zip(slots, _CARNOT_SIDES):
        if p is None:
            continue
        _check_carnot_point(tri, s, p)
        prod *= _carnot_ratio(tri, s, p)
    if abs(prod) < 1e-300 or not math.isfinite(prod):
        raise GeometryError("required ratio is 0 or infinite")
    r = 1.0 / prod
    A, B, C = tri
    U, V = {"a": (B, C), "b": (C, A), "c": (A, B)}[side]
    if abs(1.0 + r) < 1e-9:
        raise GeometryError("solved point lies at infinity")
    p = (U + r * V) / (1.0 + r)
    _check_carnot_point(tri, side, p)
    return p


# ---------------------------------------------------------------------------
# Affine maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineMap2:
    """Invertible planar affine map x -> linear @ x + translation."""

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        L = np.asarray(self.linear, float).reshape(2, 2).copy()
        t = np.asarray(self.translation, float).reshape(2).copy()
        if abs(np.linalg.det(L)) < 1e-12:
            raise GeometryError("affine map is singular")
        L.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "linear", L)
        object.__setattr__(self, "translation", t)

    @classmethod
    def identity(cls) -> "AffineMap2":
        return cls(np.eye(2), np.zeros(2))

    @classmethod
    def translation_by(cls, v) -> "AffineMap2":
        return cls(np.eye(2), np.asarray(v, float))

    def homogeneous(self) -> np.ndarray:
        H = np.eye(3)
        H[:2, :2] = self.linear
        H[:2, 2] = self.translation
        return H


def apply_affine_point(M: AffineMap2, p) -> np.ndarray:
    return M.linear @ np.asarray(p, float) + M.translation


def apply_affine(M: AffineMap2, conic: Conic) -> Conic:
    Hinv = np.linalg.inv(M.homogeneous())
    return Conic(Hinv.T @ conic.form @ Hinv)


def ellipse_parameters(conic: Conic):
    """(center, semi_major, semi_minor, angle) of an ellipse conic.

    `angle` is the direction of the major axis in (-pi/2, pi/2].
    """
    if conic.kind != "ellipse":
        raise GeometryError(f"not an ellipse: {conic.kind}")
    M = conic.form
    Q = M[:2, :2]
    center = np.linalg.solve(Q, -M[:2, 2])
    evals, evecs = np.linalg.eigh(Q)
    k = -np.linalg.det(M) / np.linalg.det(Q)
    axes = np.sqrt(k / evals)
    order = np.argsort(-axes)
    a, b = axes[order]
    v = evecs[:, order[0]]
    angle = math.atan2(v[1], v[0])
    if angle <= -math.pi / 2:
        angle += math.pi
    elif angle > math.pi / 2:
        angle -= math.pi
    return center, float(a), float(b), float(angle)


def dilation_to_circle(conic: Conic) -> AffineMap2:
    """Axis-aligned-in-eigenbasis scaling that maps an ellipse to a circle."""
    if conic.kind != "ellipse":
        raise GeometryError("dilation_to_circle requires an ellipse")
    Q = conic.form[:2, :2].copy()
    if Q[0, 0] + Q[1, 1] < 0:
        Q = -Q
    evals, evecs = np.linalg.eigh(Q)
    S = evecs @ np.diag(np.sqrt(evals)) @ evecs.T
    return AffineMap2(S, np.zeros(2))


# ---------------------------------------------------------------------------
# 4D -> 2D projection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Projection4to2:
    """Rank-2 linear map from E^4 to the plane."""

    map: np.ndarray

    def __post_init__(self):
        P = np.asarray(self.map, float).reshape(2, 4).copy()
        s = np.linalg.svd(P, compute_uv=False)
        if s[1] < 1e-10:
            raise GeometryError("projection is not of rank 2")
        P.setflags(write=False)
        object.__setattr__(self, "map", P)


def project(P: Projection4to2, q) -> np.ndarray:
    return P.map @ np.asarray(q, float)


def project_conic_plane(P: Projection4to2, center, u, v,
                        planar_conic: Conic) -> Conic:
    """Project a conic living in the 2-plane center + span(u, v) of E^4.

    The conic is given in (u, v) coordinates; five sample points are mapped
    through the projection and refitted.
    """
    center = np.asarray(center, float)
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    img = np.column_stack([P.map @ u, P.map @ v])
    s = np.linalg.svd(img, compute_uv=False)
    if s[1] < 1e-10 * max(s[0], 1.0):
        raise GeometryError("plane projects degenerately")
    c2, a, b, ang = ellipse_parameters(planar_conic)
    R = np.array([[math.cos(ang), -math.sin(ang)],
                  [math.sin(ang), math.cos(ang)]])
    samples = []
    for k in range(5):
        t = 2 * math.pi * k / 5
        xy = c2 + R @ np.array([a * math.cos(t), b * math.sin(t)])
        q4 = center + xy[0] * u + xy[1] * v
        samples.append(P.map @ q4)
    return conic_from_5_points(samples)
