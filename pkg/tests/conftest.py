import pytest

from explaincp.problem import Problem, conference_problem


@pytest.fixture()
def conference() -> Problem:
    return conference_problem()


#: the nine-constraint infeasibility proof quoted for the conference model
PAPER_EXPLANATION = frozenset(
    {"c5", "c6", "c7", "c8", "c9", "c10", "c11", "c12", "c14"}
)


@pytest.fixture()
def paper_explanation() -> frozenset[str]:
    return PAPER_EXPLANATION
