"""
Weak-star pseudo-metric on measures through a fixed observable dictionary:

    d(mu, nu) = sum_j 2^{-j} |<x_j, mu> - <x_j, nu>| / |x_j|_inf,   j = 1..J
"""

from typing import Sequence

import numpy as np
from scipy.spatial.distance import pdist, squareform

from src.averaging.measures import EmpiricalMeasure
from src.systems.observables import Observable


class MeasureDistance:
    """Dictionary-weighted L1 distance between pairing vectors (bounded by 2)."""

    def __init__(self, dictionary: Sequence[Observable]):
        self.dictionary = tuple(dictionary)
        self.scales = np.array(
            [2.0 ** -(j + 1) / (x.sup_norm or 1.0) for j, x in enumerate(self.dictionary)]
        )

    def pairings(self, mu: EmpiricalMeasure) -> np.ndarray:
        return np.array([float(mu.pair(x)) for x in self.dictionary])

    def embed(self, mu: EmpiricalMeasure) -> np.ndarray:
        """Scaled pairings; the distance is the L1 distance of embeddings."""
        return self.pairings(mu) * self.scales

    def __call__(self, mu: EmpiricalMeasure, nu: EmpiricalMeasure) -> float:
        return float(np.abs(self.embed(mu) - self.embed(nu)).sum())

    def matrix(self, measures: Sequence[EmpiricalMeasure]) -> np.ndarray:
        """Square matrix of pairwise distances."""
        if len(measures) < 2:
            return np.zeros((len(measures), len(measures)))
        points = np.vstack([self.embed(mu) for mu in measures])
        return squareform(pdist(points, metric="cityblock"))
