"""Pseudospectral differentiation matrices on a node set."""

from dataclasses import dataclass

import numpy as np

from .gridgen import NodeSet


@dataclass(frozen=True)
class DiffMatrix:
    nodes: NodeSet
    order: int
    full: np.ndarray

    def __post_init__(self):
        self.full.setflags(write=False)


def barycentric_weights(x):
    """Barycentric weights ``1 / prod_{k != j}(x_j - x_k)``, rescaled to max 1.

    Products are accumulated in log-magnitude so that grids with thousands of
    points neither overflow nor underflow.
    """
    x = np.asarray(x, dtype=float)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    if np.any(diff == 0.0):
        raise ValueError("nodes must be distinct")
    logw = -np.sum(np.log(np.abs(diff)), axis=1)
    sign = np.where(np.sum(diff < 0, axis=1) % 2 == 0, 1.0, -1.0)
    return sign * np.exp(logw - logw.max())


def first_derivative_matrix(x):
    x = np.asarray(x, dtype=float)
    w = barycentric_weights(x)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    D = (w[None, :] / w[:, None]) / diff
    np.fill_diagonal(D, 0.0)
    # negative-sum trick: rows annihilate constants to rounding
    D[np.diag_indices_from(D)] = -D.sum(axis=1)
    return D


def psdm(nodes, k=1):
    """``k``-th order differentiation matrix ``D^(k) = D^k``."""
    if k < 1:
        raise ValueError("derivative order must be >= 1")
    if nodes.N < k + 1 and k > 1:
        raise ValueError(f"need N >= {k + 1} for a derivative of order {k}")
    D = first_derivative_matrix(nodes.nodes)
    Dk = D
    for _ in range(k - 1):
        Dk = D @ Dk
    return DiffMatrix(nodes, k, Dk)


def interior(d):
    """Interior block: rows/cols 1..N-1 (Lobatto) or 1..N (Radau)."""
    idx = d.nodes.interior
    return d.full[np.ix_(idx, idx)].copy()


def dtilde_second(d):
    """``D^(2)`` with its first and last rows replaced by unit rows."""
    if not d.nodes.is_lobatto:
        raise ValueError("dtilde_second needs a Gauss-Lobatto node set")
    if d.order != 2:
        raise ValueError("dtilde_second needs the second-order PSDM")
    M = d.full.copy()
    M[0] = 0.0
    M[-1] = 0.0
    M[0, 0] = 1.0
    M[-1, -1] = 1.0
    return M


def dtilde_first(d):
    """``D`` with its first row replaced by ``e_1`` (Radau grids)."""
    if not d.nodes.is_radau:
        raise ValueError("dtilde_first needs a Gauss-Radau node set")
    if d.order != 1:
        raise ValueError("dtilde_first needs the first-order PSDM")
    M = d.full.copy()
    M[0] = 0.0
    M[0, 0] = 1.0
    return M
