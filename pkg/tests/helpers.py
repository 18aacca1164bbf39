import random

from hypothesis import strategies as st

from matchmaker.descriptor import DataType, Parameter, ServiceProfile
from matchmaker.flownet import FlowNetwork

IDENTS = st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,8}", fullmatch=True)
DATATYPES = st.sampled_from(list(DataType))


@st.composite
def param_lists(draw, min_size=0, max_size=6):
    names = draw(st.lists(IDENTS, min_size=min_size, max_size=max_size, unique=True))
    return tuple(Parameter(n, draw(DATATYPES)) for n in names)


@st.composite
def profiles(draw, min_params=0, max_params=6):
    name = draw(st.text(min_size=1, max_size=20).filter(lambda s: "\x00" not in s))
    return ServiceProfile(
        name,
        draw(param_lists(min_params, max_params)),
        draw(param_lists(min_params, max_params)),
    )


def random_network(rng: random.Random, max_vertices: int = 10, max_capacity: int = 10,
                   density: float = 0.4) -> FlowNetwork:
    n = rng.randint(2, max_vertices)
    s, t = rng.sample(range(n), 2)
    caps = {}
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < density:
                caps[u, v] = rng.randint(1, max_capacity)
    return FlowNetwork(n, s, t, caps)


def random_params(rng: random.Random, n: int, prefix: str = "p") -> tuple[Parameter, ...]:
    return tuple(Parameter(f"{prefix}{i}", rng.choice(list(DataType))) for i in range(n))
