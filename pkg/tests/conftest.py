import pytest

from lllab.instance import Instance, Variable, predicate_event


def cyclic_hypergraph(k: int, n: int) -> Instance:
    """k-uniform edges {i..i+k-1} mod n, one monochromatic event each."""
    variables = [Variable(i, 2) for i in range(n)]
    events = [predicate_event(i, tuple((i + j) % n for j in range(k)),
                              "monochromatic") for i in range(n)]
    return Instance(variables, events)


@pytest.fixture(scope="session")
def hyper_k5_n20():
    return cyclic_hypergraph(5, 20)


@pytest.fixture(scope="session")
def hyper_k5_n50():
    return cyclic_hypergraph(5, 50)


@pytest.fixture(scope="session")
def hyper_k6_n200():
    return cyclic_hypergraph(6, 200)
