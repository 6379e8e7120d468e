"""Shared fixtures: seeded catalog, user service, API test client."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from dietcheck.api import create_app
from dietcheck.catalog import Catalog, default_seed_path
from dietcheck.config import ServiceConfig
from dietcheck.store import MemoryStore
from dietcheck.users import SessionManager, UserService

FIXTURE_DIR = Path(__file__).parent / "fixtures"

ADMIN_EMAIL = "admin@test.local"
ADMIN_PASSWORD = "admin-secret-1"


@pytest.fixture()
def seed_catalog() -> Catalog:
    return Catalog.from_seed(default_seed_path())


@pytest.fixture()
def user_service(seed_catalog) -> UserService:
    return UserService(MemoryStore(), seed_catalog, SessionManager())


@pytest.fixture()
def api_client() -> TestClient:
    config = ServiceConfig(
        admin_email=ADMIN_EMAIL,
        admin_password=ADMIN_PASSWORD,
        ocr_command="cat",  # tests feed plain-text "images"; cat echoes them back
    )
    app = create_app(config, store=MemoryStore())
    with TestClient(app) as client:
        yield client


def login(client: TestClient, email: str, password: str) -> dict:
    response = client.post("/auth/login", json={"email": email, "password": password})
    assert response.status_code == 200, response.text
    return response.json()


def auth_header(token: str) -> dict:
    return {"Authorization": f"Bearer {token}"}


def register_and_login(client: TestClient, name: str, email: str,
                       password: str = "password-123") -> tuple[str, str]:
    """Returns (uid, token)."""
    response = client.post(
        "/auth/register", json={"name": name, "email": email, "password": password}
    )
    assert response.status_code == 201, response.text
    uid = response.json()["uid"]
    token = login(client, email, password)["token"]
    return uid, token


def load_label_fixtures() -> list[dict]:
    fixtures = []
    for path in sorted((FIXTURE_DIR / "labels").glob("*.json")):
        fixtures.append(json.loads(path.read_text(encoding="utf-8")))
    return fixtures
