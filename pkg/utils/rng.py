import numpy as np


def path_rng(seed: int, index: int, *keys: int) -> np.random.Generator:
    """
    Независимый поток случайных чисел для траектории с номером index.
    Поток зависит только от (seed, keys, index), поэтому результат не зависит
    от порядка и числа потоков выполнения.
    """
    entropy = [int(seed), *(int(k) for k in keys), int(index)]
    return np.random.default_rng(np.random.SeedSequence(entropy))
