"""Seeded randomness.

Every random draw in the package goes through :func:`make_rng`, which returns
a :class:`random.Random` (MT19937) seeded from the string ``"<seed>/<label>..."``.
String seeds are hashed with SHA-512 by the standard library, so streams are
stable across processes and platforms and independent between labels.
"""

import random


def make_rng(seed: int, *labels) -> random.Random:
    return random.Random("/".join(str(part) for part in (seed, *labels)))
