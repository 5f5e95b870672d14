import pytest

from zenosim.acceptance import AcceptanceRuns


@pytest.fixture(scope="session")
def acceptance_runs():
    """Shared ensemble runs for the acceptance criteria (computed lazily)."""
    return AcceptanceRuns()
