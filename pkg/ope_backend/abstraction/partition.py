"""
Partitions of a finite state space.

A partition is stored as block_of[s] with labels exactly {0, ..., n_blocks - 1}. Equality and
hashing compare the induced set partition, not the labels.
"""
from dataclasses import dataclass
from typing import List

import numpy as np

from mdp.errors import PartitionError


def canonical_labels(labels) -> np.ndarray:
    """Relabel so blocks are numbered by first occurrence of their smallest state index."""
    labels = np.asarray(labels).reshape(-1)
    if labels.size == 0:
        return labels.astype(int)
    _, first_idx, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(first_idx.size, dtype=int)
    rank[np.argsort(first_idx)] = np.arange(first_idx.size)
    return rank[inverse.reshape(-1)]


@dataclass(frozen=True, eq=False)
class Partition:
    block_of: np.ndarray

    def __post_init__(self):
        block_of = np.array(self.block_of, dtype=int, copy=True).reshape(-1)
        if block_of.size == 0:
            raise PartitionError("partition must cover at least one state")
        if block_of.min() < 0:
            raise PartitionError("block labels must be nonnegative")
        used = np.unique(block_of)
        if used.size != block_of.max() + 1:
            raise PartitionError(
                f"block labels must be exactly 0..{used.size - 1}; got labels {used.tolist()}"
            )
        block_of.setflags(write=False)
        object.__setattr__(self, "block_of", block_of)

    @classmethod
    def identity(cls, n_states: int) -> "Partition":
        return cls(np.arange(n_states))

    @classmethod
    def single_block(cls, n_states: int) -> "Partition":
        return cls(np.zeros(n_states, dtype=int))

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Partition induced by arbitrary hashable-by-value labels."""
        return cls(canonical_labels(labels))

    @property
    def n_states(self) -> int:
        return int(self.block_of.size)

    @property
    def n_blocks(self) -> int:
        return int(self.block_of.max()) + 1

    def canonical(self) -> "Partition":
        return Partition(canonical_labels(self.block_of))

    def members(self, block: int) -> np.ndarray:
        return np.flatnonzero(self.block_of == block)

    def blocks(self) -> List[np.ndarray]:
        return [self.members(x) for x in range(self.n_blocks)]

    def representatives(self) -> np.ndarray:
        """Smallest state index of each block."""
        reps = np.full(self.n_blocks, self.n_states, dtype=int)
        np.minimum.at(reps, self.block_of, np.arange(self.n_states))
        return reps

    def indicator(self) -> np.ndarray:
        """One-hot (n_states, n_blocks) membership matrix."""
        out = np.zeros((self.n_states, self.n_blocks))
        out[np.arange(self.n_states), self.block_of] = 1.0
        return out

    def lift(self, table: np.ndarray) -> np.ndarray:
        """Map a table whose last axis runs over blocks to one over states."""
        return np.asarray(table)[..., self.block_of]

    def is_refinement_of(self, other: "Partition") -> bool:
        """True when every block of self lies inside a block of other."""
        if other.n_states != self.n_states:
            return False
        reps = self.representatives()
        return bool(np.all(other.block_of == other.block_of[reps[self.block_of]]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self.n_states == other.n_states and np.array_equal(
            canonical_labels(self.block_of), canonical_labels(other.block_of)
        )

    def __hash__(self) -> int:
        return hash(tuple(canonical_labels(self.block_of).tolist()))

    def __repr__(self) -> str:
        return f"Partition(n_states={self.n_states}, n_blocks={self.n_blocks}, block_of={self.block_of.tolist()})"


def compose(outer: Partition, inner: Partition) -> Partition:
    """
    Partition s -> outer(inner(s)).

    Args:
        outer: Partition of inner's blocks
        inner: Partition of the states

    Returns:
        Composed partition, relabeled canonically

    Raises:
        PartitionError: outer does not cover exactly inner's blocks
    """
    if outer.n_states != inner.n_blocks:
        raise PartitionError(
            f"outer partition covers {outer.n_states} elements but inner has {inner.n_blocks} blocks"
        )
    return Partition.from_labels(outer.block_of[inner.block_of])
