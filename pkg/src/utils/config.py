"""
Configuration management for ergolab.
"""

import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

load_dotenv()


@dataclass
class NumericsConfig:
    """Arithmetic bounds and tolerances."""
    rational_bits: int = int(os.getenv("ERGOLAB_RATIONAL_BITS", "4096"))  # Max denominator bit length
    weight_tolerance: float = 1e-12    # Row sums, measure normalization
    lp_tolerance: float = 1e-9         # Flatness LP feasibility
    validation_dense_limit: int = int(os.getenv("ERGOLAB_VALIDATION_DENSE", "256"))
    symbolic_horizon: int = 4096       # Positions compared for lazily generated sequences


@dataclass
class AveragingConfig:
    """Checkpointing and convergence detection defaults."""
    checkpoint_ratio: float = 1.5
    tol: float = 0.05    # Tail oscillation accepted as converged
    sep: float = 0.4     # Tail oscillation reported as oscillating


@dataclass
class DecompositionConfig:
    """Clustering of limit measures."""
    eps: float = 0.05
    grid_resolution: int = 10
    separation_tolerance: float = 1e-9


@dataclass
class TamenessConfig:
    """Torus decision and flatness check."""
    max_dimension: int = 8         # Larger d requires --allow-large (L(d) explodes)
    brute_force_resolution: int = 50


@dataclass
class Config:
    """Main configuration container."""
    numerics: NumericsConfig
    averaging: AveragingConfig
    decomposition: DecompositionConfig
    tameness: TamenessConfig
    max_workers: Optional[int] = None  # None lets concurrent.futures pick

    @classmethod
    def load(cls) -> "Config":
        """Load configuration from environment."""
        threads = int(os.getenv("ERGOLAB_THREADS", "0"))
        return cls(
            numerics=NumericsConfig(),
            averaging=AveragingConfig(),
            decomposition=DecompositionConfig(),
            tameness=TamenessConfig(),
            max_workers=threads if threads > 0 else os.cpu_count()
        )


# Global config instance
config = Config.load()
