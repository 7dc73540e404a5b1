"""Matplotlib figures rendered alongside report files."""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .polygon import circle_param

_SAVE = dict(dpi=150, bbox_inches="tight", metadata={"Software": None})


def _disk_axis(ax, title):
    t = np.linspace(0, 2 * math.pi, 256)
    ax.plot(np.cos(t), np.sin(t), color="0.6", lw=1.0)
    ax.set_aspect("equal")
    ax.set_axis_off()
    ax.set_title(title, fontsize=9)


def _boundary_xy(x):
    a = circle_param(x)
    return math.cos(a), math.sin(a)


def save_polygons_figure(path, p_left, p_right, plus, minus):
    """The two projected polygons with their shear laminations."""
    fig, axes = plt.subplots(1, 2, figsize=(7.2, 3.6))
    for ax, p, lam, title in ((axes[0], p_left, plus, "left projection"),
                              (axes[1], p_right, minus, "right projection")):
        _disk_axis(ax, title)
        pts = [_boundary_xy(x) for x in p.vertices]
        n = len(pts)
        for k in range(n):
            a, b = pts[k], pts[(k + 1) % n]
            ax.plot([a[0], b[0]], [a[1], b[1]], color="tab:blue", lw=1.4)
        for (i, j), w in lam.items():
            a, b = pts[i - 1], pts[j - 1]
            ax.plot([a[0], b[0]], [a[1], b[1]], color="tab:red",
                    lw=1.0 + 3.0 * min(1.0, abs(w)))
            ax.annotate(f"{w:.3f}", (0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])),
                        fontsize=7, color="tab:red")
        for k, (x, y) in enumerate(pts):
            ax.annotate(str(k + 1), (1.06 * x, 1.06 * y), fontsize=8,
                        ha="center", va="center")
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def save_mesh_figure(path, mesh, title=None):
    """Wireframe of an inscribed mesh over a faint quadric surface."""
    fig = plt.figure(figsize=(5.4, 5.0))
    ax = fig.add_subplot(projection="3d")
    verts = np.asarray(mesh.vertices)
    zspan = max(1.0, 1.2 * float(np.max(np.abs(verts[:, 2]))))
    u = np.linspace(0, 2 * math.pi, 40)
    if mesh.quadric == "sphere":
        vgrid = np.linspace(0, math.pi, 20)
        xs = np.outer(np.cos(u), np.sin(vgrid))
        ys = np.outer(np.sin(u), np.sin(vgrid))
        zs = np.outer(np.ones_like(u), np.cos(vgrid))
    elif mesh.quadric == "cylinder":
        vgrid = np.linspace(-zspan, zspan, 20)
        xs = np.outer(np.cos(u), np.ones_like(vgrid))
        ys = np.outer(np.sin(u), np.ones_like(vgrid))
        zs = np.outer(np.ones_like(u), vgrid)
    else:
        vgrid = np.linspace(-math.asinh(zspan), math.asinh(zspan), 20)
        xs = np.outer(np.cos(u), np.cosh(vgrid))
        ys = np.outer(np.sin(u), np.cosh(vgrid))
        zs = np.outer(np.ones_like(u), np.sinh(vgrid))
    ax.plot_surface(xs, ys, zs, alpha=0.12, color="tab:gray", linewidth=0)
    for f in mesh.faces:
        k = len(f)
        for t in range(k):
            a, b = verts[f[t]], verts[f[(t + 1) % k]]
            ax.plot([a[0], b[0]], [a[1], b[1]], [a[2], b[2]],
                    color="tab:blue", lw=1.5)
    ax.scatter(verts[:, 0], verts[:, 1], verts[:, 2], color="tab:red", s=18)
    ax.set_title(title or f"mesh inscribed in the {mesh.quadric}", fontsize=9)
    ax.set_axis_off()
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def save_survey_figure(path, rows):
    """Grid of catalog verdicts: one row per graph."""
    if not rows:
        return
    labels = ["rivin", "hamiltonian", "ads"]
    data = np.array([[1.0 if r["rivin_feasible"] else 0.0,
                      1.0 if r["n_hamiltonian_cycles"] else 0.0,
                      1.0 if r["ads_feasible"] else 0.0] for r in rows])
    fig, ax = plt.subplots(figsize=(3.6, max(2.0, 0.16 * len(rows))))
    ax.imshow(data, aspect="auto", cmap="RdYlGn", vmin=-0.2, vmax=1.2)
    ax.set_xticks(range(3), labels, fontsize=8)
    ax.set_yticks([])
    ax.set_ylabel(f"{len(rows)} graphs")
    ax.set_title("catalog verdicts", fontsize=9)
    fig.savefig(path, **_SAVE)
    plt.close(fig)
