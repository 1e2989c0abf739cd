"""Synthetic two-class spectra built from fractional Brownian motion.

Used by the end-to-end checks and the demo scripts: every sample is one
long fBm path truncated to the requested bin count, so each rolling
window inherits the class's Hurst exponent and the two classes separate
in every window.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError
from .fbm import _fgn, fbm_from_fgn
from .pipeline import SpectraDataset


def two_class_fbm_dataset(n_per_class: int = 50, hurst_control: float = 0.3,
                          hurst_case: float = 0.7, n_bins: int = 15153,
                          seed: int = 0) -> SpectraDataset:
    """Controls are fBm paths at one Hurst exponent, cases at another.

    Paths are generated at the next power of two above ``n_bins`` and
    truncated.  Sample ids are ctrl001.. and case001..; deterministic per
    seed.
    """
    if n_per_class < 1:
        raise ConfigurationError("need at least one sample per class")
    gen_len = 1 << max(3, int(np.ceil(np.log2(n_bins))))
    rows = []
    ids = []
    labels = []
    for label, hurst, prefix in ((0, hurst_control, "ctrl"),
                                 (1, hurst_case, "case")):
        for i in range(n_per_class):
            rng = np.random.default_rng(
                np.random.SeedSequence(seed, spawn_key=(label, i)))
            path = fbm_from_fgn(_fgn(hurst, gen_len, rng))
            rows.append(path[:n_bins])
            ids.append(f"{prefix}{i + 1:03d}")
            labels.append(label)
    return SpectraDataset(
        intensities=np.vstack(rows),
        labels=np.array(labels, dtype=np.int8),
        sample_ids=tuple(ids),
        mz_values=None)
