"""Loss functions. The classifiers all use sigmoid outputs with a
recall-weighted binary cross-entropy: the positive (false-negative) term
is multiplied by a configurable weight.
"""

from __future__ import annotations

from .autodiff import Tensor
from .errors import ConfigError

PROB_EPS = 1e-12


def weighted_bce(p: Tensor, y: Tensor, pos_weight: float = 1.0) -> Tensor:
    """Mean of -(pos_weight * y * ln p + (1 - y) * ln(1 - p)).

    Probabilities are clamped to [1e-12, 1 - 1e-12] to keep the logs finite.
    """
    if pos_weight <= 0:
        raise ConfigError(f"pos_weight must be positive, got {pos_weight}")
    pc = p.clamp(PROB_EPS, 1.0 - PROB_EPS)
    loss = -(pos_weight * y * pc.log() + (1.0 - y) * (1.0 - pc).log())
    return loss.mean()
