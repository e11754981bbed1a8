import numpy as np


def generator(seed, *counters):
    """Counter-based random state keyed by ``(seed, *counters)``.

    Equal keys give equal streams whatever thread or process draws them.
    """
    entropy = [int(seed)] + [int(c) for c in counters]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))
