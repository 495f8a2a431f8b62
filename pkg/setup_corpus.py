"""Seeded synthetic corpora for experiments and tests.

A corpus is described by a distribution name, currently `zero-heavy:<p>`: every 4-bit data word is drawn
independently, 0000 with probability p and each other value with probability (1 - p) / 15. The same seed and
description always give the same blocks."""

import os
from typing import List

import numpy as np
import scipy.stats

import vlcconfig
from corpus import zero_heavy_table
from genericclasses import Block, FormatError, FrequencyTable

DISTRIBUTIONS = ("zero-heavy",)


def parse_distribution(description: str) -> FrequencyTable:
    name, _, argument = description.partition(":")
    if name not in DISTRIBUTIONS or not argument:
        raise FormatError(f"Unknown synthetic distribution {description!r}, expected zero-heavy:<p>")
    try:
        return zero_heavy_table(argument)
    except ValueError as err:
        raise FormatError(f"Bad synthetic distribution {description!r}: {err}")


class SetupCorpus:
    def __init__(self, description: str, seed: int = None, block_bytes: int = None):
        self.evaluation_parameters = vlcconfig.evaluation_parameters
        self.description = description
        self.table = parse_distribution(description)
        self.seed = self.evaluation_parameters["random_seed"] if seed is None else seed
        self.block_bytes = self.evaluation_parameters["block_bytes"] if block_bytes is None else block_bytes

        """set distribution"""
        probabilities = [float(w) for w in self.table.weights]
        self.distribution = scipy.stats.rv_discrete(values=(np.arange(len(probabilities)), probabilities))
        self.random_state = np.random.RandomState(self.seed)

    def random_blocks(self, count: int) -> List[Block]:
        """count blocks of independently drawn data words."""
        if count < 0:
            raise ValueError(f"count must be nonnegative, got {count}")
        if count == 0:
            return []
        nibbles = self.distribution.rvs(size=(count, 2 * self.block_bytes), random_state=self.random_state)
        nibbles = nibbles.astype(np.uint8)
        payloads = (nibbles[:, 0::2] << 4) | nibbles[:, 1::2]
        return [Block(row.tobytes()) for row in payloads]

    def store(self, path: str, count: int, overwrite: bool = False) -> int:
        """Write count fresh blocks to path as a raw binary corpus."""
        if not overwrite and os.path.exists(path):
            raise ValueError(f"File {path} already exists and we are not overwriting.")
        blocks = self.random_blocks(count)
        with open(path, "wb") as wfile:
            for block in blocks:
                wfile.write(block.payload)
        if vlcconfig.verbose:
            print(f"Wrote {count} {self.description} blocks (seed {self.seed}) to {path}")
        return count
