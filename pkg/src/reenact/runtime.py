"""Seeding and deterministic-execution helpers.

All randomness in the package flows from explicit seeds. Setting the
environment variable ``CAIN_DETERMINISTIC=1`` (or calling
``set_deterministic``) additionally forces torch onto deterministic
kernels so repeated runs are bit-identical.
"""

import os
import random

import numpy as np
import torch

_ENV_FLAG = "CAIN_DETERMINISTIC"


def deterministic_requested() -> bool:
    return os.environ.get(_ENV_FLAG, "") == "1"


def set_deterministic(enabled: bool = True) -> None:
    torch.use_deterministic_algorithms(enabled)


def seed_all(seed: int) -> None:
    """Seed torch, numpy's legacy global state and the stdlib RNG."""
    random.seed(seed)
    np.random.seed(seed % (2**32))
    torch.manual_seed(seed)


def configure(seed: int, deterministic: bool = True) -> None:
    if deterministic or deterministic_requested():
        set_deterministic(True)
    seed_all(seed)
