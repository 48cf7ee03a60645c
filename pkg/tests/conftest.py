import os
from pathlib import Path

import pytest
import pytest_asyncio
from httpx import AsyncClient, ASGITransport

# Set environment variables BEFORE importing app modules
TEST_TOKEN = "test-token"
os.environ["MPF_API_TOKEN"] = TEST_TOKEN

from app.config import settings
from app.services import table_service

FIXTURES_DIR = Path(settings.mpf_fixtures_dir)


@pytest_asyncio.fixture(scope="function")
async def client(monkeypatch):
    """Create test client with the API token configured."""
    monkeypatch.setattr(settings, "mpf_api_token", TEST_TOKEN)
    from app.main import app

    transport = ASGITransport(app=app)
    async with AsyncClient(transport=transport, base_url="http://test") as ac:
        yield ac


@pytest.fixture
def auth_headers():
    """Auth headers for requests."""
    return {"Authorization": f"Bearer {TEST_TOKEN}"}


@pytest.fixture(scope="session")
def table1():
    """Bundled base-order-2 formulas keyed like ``base2-min_a1k1-m3``."""
    return table_service.table_formulas(2)


@pytest.fixture(scope="session")
def table2():
    """Bundled base-order-4 formulas."""
    return table_service.table_formulas(4)


@pytest.fixture
def base2_fixture_bytes():
    return (FIXTURES_DIR / "table_base2.json").read_bytes()
