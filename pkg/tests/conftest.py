import pytest

from theta_lvalues import catalog, default_context, verify_entry


@pytest.fixture(scope="session")
def ctx():
    return default_context(30)


@pytest.fixture(scope="session")
def reports(ctx):
    """Verification reports for all twenty entries, computed once."""
    return {e.id: verify_entry(e, ctx) for e in catalog()}
