import random

from xcomm.words import Word


def random_reduced(rng: random.Random, length: int, m: int, barred: bool = False) -> Word:
    """A uniformly built freely reduced word of exactly the given length."""
    if barred:
        alphabet = [s * c for c in range(1, 2 * m + 1) for s in (1, -1)]
    else:
        alphabet = [s * (2 * i - 1) for i in range(1, m + 1) for s in (1, -1)]
    codes: list[int] = []
    while len(codes) < length:
        c = rng.choice(alphabet)
        if codes and codes[-1] == -c:
            continue
        codes.append(c)
    return Word(codes, m)
