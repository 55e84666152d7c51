"""Counter-based random numbers keyed by matrix position.

Entries are drawn with Philox4x32-10 (Salmon et al., Random123). The key is
the 64-bit replicate seed and the counter is ``(k, j, stream, 0)`` for entry
``(j, k)``, so every entry is a pure function of ``(seed, j, k)``: the draw
does not depend on the order or the thread in which entries are generated.
"""

import numpy as np

MASK32 = np.uint64(0xFFFFFFFF)
MASK64 = (1 << 64) - 1

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = 0x9E3779B9
_W1 = 0xBB67AE85
_ROUNDS = 10


def philox4x32(ctr, key):
    """Philox4x32-10 block function, vectorized over counters.

    Parameters
    ----------
    ctr : sequence of four integer arrays (or scalars)
        The 32-bit counter words; broadcast against each other.
    key : tuple of two ints
        The 32-bit key words.

    Returns
    -------
    tuple of four uint64 arrays holding 32-bit output words.
    """
    c0, c1, c2, c3 = (np.asarray(c, dtype=np.uint64) & MASK32 for c in ctr)
    c0, c1, c2, c3 = np.broadcast_arrays(c0, c1, c2, c3)
    k0, k1 = int(key[0]) & 0xFFFFFFFF, int(key[1]) & 0xFFFFFFFF
    for r in range(_ROUNDS):
        if r:
            k0 = (k0 + _W0) & 0xFFFFFFFF
            k1 = (k1 + _W1) & 0xFFFFFFFF
        p0 = c0 * _M0
        p1 = c2 * _M1
        c0, c1, c2, c3 = (
            (p1 >> np.uint64(32)) ^ c1 ^ np.uint64(k0),
            p1 & MASK32,
            (p0 >> np.uint64(32)) ^ c3 ^ np.uint64(k1),
            p0 & MASK32,
        )
    return c0, c1, c2, c3


def splitmix64(x):
    """One SplitMix64 finalization step on a Python int."""
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master, *labels):
    """Derive a 64-bit child seed from a master seed and integer labels.

    ``derive_seed(seed, n, r)`` is the seed of replicate ``r`` at dimension
    ``n``; any single replicate can be replayed from it.
    """
    h = splitmix64(int(master) & MASK64)
    for label in labels:
        h = splitmix64(h ^ (int(label) & MASK64))
    return h


def _to_unit(hi, lo):
    # 53-bit double in [0, 1)
    bits = (hi << np.uint64(21)) ^ (lo >> np.uint64(11))
    return bits.astype(np.float64) * (1.0 / 9007199254740992.0)


def entry_uniforms(seed, rows, cols, stream=0):
    """Two independent uniforms in [0, 1) per ``(row, col)`` position."""
    seed = int(seed) & MASK64
    w = philox4x32((cols, rows, stream, 0), (seed & 0xFFFFFFFF, seed >> 32))
    return _to_unit(w[0], w[1]), _to_unit(w[2], w[3])
