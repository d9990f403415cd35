"""Triangle meshes of truncated fat handles, built as surfaces of revolution.

Only n + m = 3 gives a surface in R^3.  The handle is cut to |u| <= u_max
and |v| <= v_max; its meridian (a closed curve in a half-plane, with both
ends on the rotation axis) is revolved about the axis.
"""

from dataclasses import dataclass

import numpy as np

from .handle import boundary_radii


@dataclass(frozen=True)
class Mesh:
    vertices: np.ndarray  # (V, 3)
    faces: np.ndarray  # (F, 3), zero-based, counter-clockwise seen from outside

    def write_obj(self, path_or_file):
        lines = [f"v {x:.17g} {y:.17g} {z:.17g}" for x, y, z in self.vertices]
        lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in self.faces]
        text = "\n".join(lines) + "\n"
        if hasattr(path_or_file, "write"):
            path_or_file.write(text)
        else:
            with open(path_or_file, "w") as fh:
                fh.write(text)


def read_obj(path):
    verts, faces = [], []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(x) for x in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(x.split("/")[0]) - 1 for x in parts[1:4]])
    return Mesh(np.array(verts), np.array(faces, dtype=int))


def revolve(meridian, segments=64):
    """Revolve a polyline (rho, z) whose first and last points lie on rho = 0."""
    rho, z = np.asarray(meridian, dtype=float).T
    if abs(rho[0]) > 1e-12 or abs(rho[-1]) > 1e-12:
        raise ValueError("meridian must start and end on the axis")
    inner = len(rho) - 2
    theta = np.linspace(0.0, 2 * np.pi, segments, endpoint=False)
    ring = np.stack(
        [rho[1:-1, None] * np.cos(theta), rho[1:-1, None] * np.sin(theta),
         np.broadcast_to(z[1:-1, None], (inner, segments))],
        axis=-1,
    ).reshape(-1, 3)
    south = len(ring)
    north = south + 1
    verts = np.vstack([ring, [[0.0, 0.0, z[0]], [0.0, 0.0, z[-1]]]])

    def vid(i, j):
        return i * segments + (j % segments)

    faces = []
    for j in range(segments):
        faces.append((south, vid(0, j + 1), vid(0, j)))
        faces.append((north, vid(inner - 1, j), vid(inner - 1, j + 1)))
    for i in range(inner - 1):
        for j in range(segments):
            a, b = vid(i, j), vid(i, j + 1)
            c, d = vid(i + 1, j), vid(i + 1, j + 1)
            faces.append((a, b, d))
            faces.append((a, d, c))
    faces = np.array(faces, dtype=int)
    mesh = Mesh(verts, faces)
    # orient outward: signed volume must be positive
    if signed_volume(mesh) < 0:
        mesh = Mesh(verts, faces[:, ::-1].copy())
    return mesh


def signed_volume(mesh):
    a, b, c = (mesh.vertices[mesh.faces[:, k]] for k in range(3))
    return float(np.einsum("ij,ij->i", a, np.cross(b, c)).sum() / 6.0)


def _boundary_arc(ctx, v_max, samples):
    # from the axis point (0, 1) up the boundary to |v| = v_max
    t = np.linspace(-1.0, v_max - 1.0, samples)
    ru, rv = boundary_radii(ctx, t)
    return np.column_stack([ru, rv])


def handle_meridian(ctx, n, m, samples=256, u_max=2.0, v_max=2.5):
    if n + m != 3:
        raise ValueError("surfaces of revolution need n + m = 3")
    if n == 3 or m == 3:
        radius = u_max if n == 3 else 1.0
        ang = np.linspace(-np.pi / 2, np.pi / 2, samples)
        return np.column_stack([radius * np.cos(ang), radius * np.sin(ang)])
    if v_max <= 1.5 or u_max <= 1.0:
        raise ValueError("need v_max > 3/2 and u_max > 1")
    arc = _boundary_arc(ctx, v_max, samples)  # (ru, rv)
    k = max(4, samples // 8)
    top = np.column_stack([np.linspace(arc[-1, 0], u_max, k)[1:], np.full(k - 1, v_max)])
    side = np.column_stack([np.full(2 * k - 1, u_max), np.linspace(v_max, -v_max, 2 * k + 1)[1:-1]])
    quarter = np.vstack([arc, top])  # (0, 1) -> (u_max, v_max)
    # walk (0, -1) -> (u_max, -v_max) -> (u_max, v_max) -> (0, 1)
    walk = np.vstack([quarter * [1.0, -1.0], side[::-1], quarter[::-1]])
    if n == 2:
        # rotate about the v axis: rho = |u|, z = v
        return walk
    # n == 1, m == 2: rotate about the u axis, rho = |v|, z = u; walk
    # (-u_max, 0) -> (-u_max, v_max) -> arc through (0, 1) -> (u_max, 0)
    up = np.column_stack([np.full(k, u_max), np.linspace(0.0, v_max, k + 1)[:-1]])
    right = np.vstack([quarter, up[::-1]])  # (0, 1) -> (u_max, 0) in (u, |v|)
    left = right[::-1] * [-1.0, 1.0]
    uv = np.vstack([left, right[1:]])
    return uv[:, ::-1]


def handle_mesh(ctx, n, m, samples=256, segments=64, u_max=2.0, v_max=2.5):
    return revolve(handle_meridian(ctx, n, m, samples, u_max, v_max), segments)


@dataclass(frozen=True)
class MeshAudit:
    vertices: int
    faces: int
    edges: int
    boundary_edges: int
    nonmanifold_edges: int
    inconsistent_edges: int
    euler: int
    degenerate_faces: int

    @property
    def watertight(self):
        return (
            self.boundary_edges == 0
            and self.nonmanifold_edges == 0
            and self.inconsistent_edges == 0
            and self.euler == 2
            and self.degenerate_faces == 0
        )


def audit_mesh(mesh):
    f = mesh.faces
    directed = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
    undirected = np.sort(directed, axis=1)
    _, counts = np.unique(undirected, axis=0, return_counts=True)
    _, dcounts = np.unique(directed, axis=0, return_counts=True)
    degenerate = int(np.sum((f[:, 0] == f[:, 1]) | (f[:, 1] == f[:, 2]) | (f[:, 0] == f[:, 2])))
    a, b, c = (mesh.vertices[f[:, k]] for k in range(3))
    area = np.linalg.norm(np.cross(b - a, c - a), axis=1)
    degenerate += int(np.sum(area <= 1e-15))
    used = np.unique(f)
    return MeshAudit(
        vertices=len(used),
        faces=len(f),
        edges=len(counts),
        boundary_edges=int(np.sum(counts == 1)),
        nonmanifold_edges=int(np.sum(counts > 2)),
        inconsistent_edges=int(np.sum(dcounts > 1)),
        euler=int(len(used) - len(counts) + len(f)),
        degenerate_faces=degenerate,
    )
