import pytest

from cavepoly import GeneratorConfig, Polymatroid, random_polymatroid
from cavepoly.genverify import STRATEGIES


@pytest.fixture
def running():
    """The worked example used throughout: {(0,3), (1,2), (2,1)}."""
    return Polymatroid([(0, 3), (1, 2), (2, 1)])


def instance_mix(count, seed=0, ps=(1, 2, 3), max_rank=4, max_cage_entry=3):
    """Deterministic stream of generated instances, cycling dimensions
    fastest and generation strategies next."""
    out = []
    for i in range(count):
        cfg = GeneratorConfig(
            seed=seed + i,
            p=ps[i % len(ps)],
            max_rank=max_rank,
            max_cage_entry=max_cage_entry,
            strategy=STRATEGIES[(i // len(ps)) % len(STRATEGIES)],
        )
        out.append(random_polymatroid(cfg))
    return out
