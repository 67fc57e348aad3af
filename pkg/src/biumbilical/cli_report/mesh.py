"""Triangulated OBJ export of w-slices of a hypersurface X(x, y, w) in E^4."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import jets
from ..envelope import REGULAR_TOL


class MeshError(ValueError):
    pass


@dataclass(frozen=True)
class Mesh:
    vertices: np.ndarray  # (n_slices * nx * ny, 3)
    faces: np.ndarray  # (n_faces, 3), zero based
    rulings: np.ndarray  # (n_lines, 2), zero based
    nx: int
    ny: int
    n_slices: int
    degenerate: int  # singular vertices; faces touching them are skipped

    def to_obj(self):
        out = [
            "# hypersurface slices projected to E^3",
            f"# slices {self.n_slices} vertices_per_slice {self.nx * self.ny} degenerate {self.degenerate}",
        ]
        out += ["v " + " ".join(format(float(c), ".17g") for c in v) for v in self.vertices]
        out += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in self.faces]
        out += [f"l {a + 1} {b + 1}" for a, b in self.rulings]
        return "\n".join(out) + "\n"


def projection_matrix(proj):
    """3 x 4 matrix for "dropK" (K = 1..4) or orthogonal projection along a Vec4."""
    if isinstance(proj, str):
        if proj not in ("drop1", "drop2", "drop3", "drop4"):
            raise MeshError(f"unknown projection {proj!r}; use drop1..drop4 or a 4-vector")
        k = int(proj[-1]) - 1
        return np.delete(np.eye(4), k, axis=0)
    v = np.asarray(proj, dtype=float)
    if v.shape != (4,) or not np.all(np.isfinite(v)) or np.linalg.norm(v) == 0:
        raise MeshError("projection direction must be a nonzero finite 4-vector")
    Q, _ = np.linalg.qr(np.column_stack([v, np.eye(4)]))
    return Q[:, 1:4].T


def _singular(X_fn, X, Y, W):
    """Vertices where the tangent map of X drops rank."""
    # order 2: the envelope construction consumes one order
    xj, yj, wj = jets.variables(X, Y, W, order=2)
    T = np.stack([X_fn(xj, yj, wj).grad(i) for i in range(3)])  # (3, 4, ...)
    g = np.einsum("ia...,ja...->...ij", T, T)
    with np.errstate(invalid="ignore"):
        det = np.linalg.det(g)
        scale = (np.trace(g, axis1=-2, axis2=-1) / 3.0) ** 3
    return ~(det > REGULAR_TOL * scale)


def build_mesh(X_fn, x_range, y_range, nx, ny, w_values, projection="drop4"):
    """Sample X on an nx x ny grid at each w value; consecutive slices are joined by rulings."""
    if nx < 2 or ny < 2:
        raise MeshError("need at least 2 nodes per direction")
    w_values = [float(w) for w in w_values]
    if not w_values:
        raise MeshError("need at least one w value")
    P = projection_matrix(projection)
    x = np.linspace(x_range[0], x_range[1], nx)
    y = np.linspace(y_range[0], y_range[1], ny)
    Xg, Yg = np.meshgrid(x, y, indexing="ij")
    per = nx * ny
    verts, bad = [], []
    for w in w_values:
        W = np.full_like(Xg, w)
        pts = np.asarray(X_fn(Xg, Yg, W), dtype=float)
        singular = _singular(X_fn, Xg, Yg, W) | ~np.all(np.isfinite(pts), axis=0)
        verts.append(np.einsum("ka,a...->...k", P, np.nan_to_num(pts)).reshape(per, 3))
        bad.append(singular.ravel())
    verts = np.concatenate(verts)
    bad = np.concatenate(bad)

    i, j = np.meshgrid(np.arange(nx - 1), np.arange(ny - 1), indexing="ij")
    i, j = i.ravel(), j.ravel()
    p00, p10, p11, p01 = i * ny + j, (i + 1) * ny + j, (i + 1) * ny + j + 1, i * ny + j + 1
    cell = np.concatenate([np.stack([p00, p10, p11], 1), np.stack([p00, p11, p01], 1)])
    faces = np.concatenate([cell + s * per for s in range(len(w_values))])
    faces = faces[~np.any(bad[faces], axis=1)]
    base = np.arange(per)
    rulings = np.array(
        [(base[k] + s * per, base[k] + (s + 1) * per) for s in range(len(w_values) - 1) for k in range(per)],
        dtype=int,
    ).reshape(-1, 2)
    return Mesh(verts, faces, rulings, nx, ny, len(w_values), int(bad.sum()))


@dataclass(frozen=True)
class ObjSummary:
    vertices: int
    faces: int
    lines: int
    valid: bool
    message: str = ""


def validate_obj(text):
    """Parse OBJ text; valid when every face and line references an existing vertex."""
    nv = nf = nl = 0
    refs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0] == "#":
            continue
        kind = parts[0]
        try:
            if kind == "v":
                if len(parts) != 4 or not all(np.isfinite([float(p) for p in parts[1:]])):
                    return ObjSummary(nv, nf, nl, False, f"line {lineno}: bad vertex")
                nv += 1
            elif kind in ("f", "l"):
                idx = [int(p.split("/")[0]) for p in parts[1:]]
                if (kind == "f" and len(idx) != 3) or (kind == "l" and len(idx) < 2):
                    return ObjSummary(nv, nf, nl, False, f"line {lineno}: wrong arity")
                refs.extend(idx)
                nf += kind == "f"
                nl += kind == "l"
            else:
                return ObjSummary(nv, nf, nl, False, f"line {lineno}: unknown record {kind!r}")
        except ValueError:
            return ObjSummary(nv, nf, nl, False, f"line {lineno}: unparsable record")
    if refs and (min(refs) < 1 or max(refs) > nv):
        return ObjSummary(nv, nf, nl, False, "element references a missing vertex")
    return ObjSummary(nv, nf, nl, True)
