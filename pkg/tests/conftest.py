import random

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "engine",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("engine")

# every randomized test draws its inputs from a seeded generator so failures
# shrink to a single integer
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def rng_for(seed: int) -> random.Random:
    return random.Random(seed)
