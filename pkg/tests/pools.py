"""Shared pools of generated terms.

Generation is deterministic per seed, so pools are cached and reused
across test modules instead of being rebuilt per test.
"""

from functools import lru_cache

from imell import gen


@lru_cache(maxsize=None)
def typed_pool(count: int, budget: int, salt: int = 0):
    """count (context, term) pairs from the typed generator."""
    base = salt * 1_000_000
    return tuple(gen.gen_typed(base + i, budget) for i in range(count))


@lru_cache(maxsize=None)
def untyped_pool(count: int, budget: int, salt: int = 0):
    """count proper terms from the unconstrained generator."""
    base = salt * 1_000_000
    return tuple(gen.gen_untyped_proper(base + i, budget) for i in range(count))


@lru_cache(maxsize=None)
def mixed_pool(count: int, budget: int, salt: int = 0):
    """Alternating typed and untyped terms, typing contexts dropped."""
    half = count // 2
    typed = [t for _, t in typed_pool(count - half, budget, salt)]
    untyped = list(untyped_pool(half, budget, salt))
    out = []
    while typed or untyped:
        if typed:
            out.append(typed.pop())
        if untyped:
            out.append(untyped.pop())
    return tuple(out)
