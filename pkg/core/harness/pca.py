"""Two-component PCA coordinates of rows and their representatives."""

from typing import NamedTuple

import numpy as np

from core.linalg import ArgumentError, DenseMatrix, ShapeError, as_matrix
from core.pamm import CompressedActivation, reconstruct

class PcaRow(NamedTuple):
    row: int
    generator: int
    alpha: float
    x: float
    y: float
    rep_x: float
    rep_y: float

def pca_projection(a: DenseMatrix, comp: CompressedActivation) -> list[PcaRow]:
    """
    Project every row of A and its representative onto the top two principal axes of A.

    Axes are the leading eigenvectors of the centred n×n covariance; both point sets are
    centred with the mean of A.
    """
    a = as_matrix(a, dtype=np.float64, name="A")
    if a.shape != (comp.b, comp.n):
        raise ShapeError("A does not match the compressed shape", "pca_projection",
                         (a.shape, (comp.b, comp.n)))
    if a.shape[1] < 2:
        raise ArgumentError("PCA needs at least two columns", "pca_projection")

    mean = a.mean(axis=0)
    centred = a - mean
    covariance = centred.T @ centred / max(1, a.shape[0] - 1)
    _, eigenvectors = np.linalg.eigh(covariance)
    axes = eigenvectors[:, ::-1][:, :2]

    points = centred @ axes
    reps = (reconstruct(comp).astype(np.float64) - mean) @ axes
    return [
        PcaRow(i, int(comp.assignments[i]), float(comp.alpha[i]),
               float(points[i, 0]), float(points[i, 1]), float(reps[i, 0]), float(reps[i, 1]))
        for i in range(a.shape[0])
    ]
