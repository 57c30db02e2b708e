"""
Counter-based random streams.

Each trajectory owns a Philox stream keyed by (seed, trajectory index), so a trajectory's draws do
not depend on batch size, worker count or generation order.
"""
import numpy as np


def trajectory_stream(seed: int, index: int) -> np.random.Generator:
    """Generator for one trajectory."""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(sequence))


def trajectory_draws(seed: int, indices, horizon: int):
    """
    Pre-drawn randomness for a batch of trajectories.

    Per trajectory the stream yields, in order: one uniform for the initial state, a (horizon, 2)
    block of uniforms (action, next state) and horizon standard normals (reward noise).

    Returns:
        (initial (n,), uniforms (n, horizon, 2), normals (n, horizon))
    """
    indices = list(indices)
    initial = np.empty(len(indices))
    uniforms = np.empty((len(indices), horizon, 2))
    normals = np.empty((len(indices), horizon))
    for row, index in enumerate(indices):
        stream = trajectory_stream(seed, index)
        initial[row] = stream.random()
        uniforms[row] = stream.random((horizon, 2))
        normals[row] = stream.standard_normal(horizon)
    return initial, uniforms, normals


def derive_seed(*keys: int) -> int:
    """Deterministic 63-bit seed from integer keys, e.g. (base_seed, cell, replication)."""
    state = np.random.SeedSequence([int(k) for k in keys]).generate_state(2, dtype=np.uint32)
    return int((int(state[0]) << 31) ^ int(state[1])) & ((1 << 63) - 1)
