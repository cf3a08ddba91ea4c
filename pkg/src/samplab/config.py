"""Dataclass configs and the handful of tuning constants fixed for the tool."""

from __future__ import annotations

from dataclasses import dataclass, field

# Neighborhood sizes explorable in the projection grid; the lower end is the
# default k used for instance typing until a projection is selected.
K_MIN = 5
K_MAX = 13
DEFAULT_K = 5

# Type bands as integer ratios of same-class neighbors (numerator over 10):
# outlier = 0, rare <= 3/10, borderline <= 7/10, safe above.
RARE_BAND_NUM = 3
SAFE_BAND_NUM = 7
BAND_DEN = 10

# min_dist values evaluated when auto-tuning a projection candidate.
MIN_DIST_SWEEP = (0.0, 0.1, 0.25, 0.5, 0.8, 0.99)

# Shepard-pair sampling: at most this many pairs, drawn with a fixed seed so
# scores are comparable across candidates.
SDC_PAIR_CAP = 100_000
SDC_PAIR_SEED = 2718

# Rank correlation variant used for projection quality scoring.
SDC_CORRELATION = "spearman"

# Per-coordinate uniform jitter added to density-weighted synthetic points,
# expressed in normalized (0-1) feature units.
ADASYN_JITTER = 0.01

# Datasets beyond this size are accepted with a warning only.
DATASET_SOFT_CAP = 5000

# Macro averaging is the imbalance-sensitive choice; kept configurable here.
F1_AVERAGING = "macro"

# Session export schema version.
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ModelConfig:
    """Gradient-boosted-trees training configuration.

    The search ranges are tool defaults, not tuned values; each random-search
    iteration draws one point from every range.
    """

    search_iterations: int = 25
    cv_folds: int = 5
    n_estimators_range: tuple[int, int] = (20, 120)
    max_depth_range: tuple[int, int] = (2, 5)
    learning_rate_range: tuple[float, float] = (0.05, 0.3)
    subsample_range: tuple[float, float] = (0.7, 1.0)
    reg_lambda: float = 1.0
    seed: int = 0

    def validate(self) -> None:
        from .errors import InvalidParameterError

        if self.search_iterations < 1:
            raise InvalidParameterError("search_iterations must be >= 1")
        if self.cv_folds < 2:
            raise InvalidParameterError("cv_folds must be >= 2")
        for name in ("n_estimators_range", "max_depth_range",
                     "learning_rate_range", "subsample_range"):
            lo, hi = getattr(self, name)
            if hi < lo:
                raise InvalidParameterError(f"{name} is empty: {lo}..{hi}")


@dataclass(frozen=True)
class SessionConfig:
    train_fraction: float = 0.75
    split_seed: int = 0
    projection_seed: int = 0
    model: ModelConfig = field(default_factory=ModelConfig)
