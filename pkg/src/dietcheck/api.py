"""HTTP service: registration, sessions, profile management, diet browsing,
label checking, and admin CRUD.

Unauthenticated access is limited to registration, login, and read-only diet
browsing; everything else needs a bearer session token. Every domain error
is rendered as ``{"error": {"code": ..., "message": ...}}`` with a stable
machine-readable code, so clients key off codes, never messages.
"""

from __future__ import annotations

import base64
import binascii
import logging
import time
from dataclasses import dataclass

from fastapi import Depends, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .capture import CaptureRequest, CommandOcrAdapter, OcrAdapter
from .catalog import ROLE_ADMIN, Catalog, Diet
from .config import ServiceConfig
from .engine import MatcherCache, check_label
from .errors import DietCheckError, Unauthenticated, ValidationError
from .store import DocumentStore, JsonDirStore, MemoryStore
from .users import Session, SessionManager, UserProfile, UserService

logger = logging.getLogger("dietcheck.api")


@dataclass
class AppState:
    config: ServiceConfig
    catalog: Catalog
    users: UserService
    matcher_cache: MatcherCache
    adapter: OcrAdapter | None


# --- request bodies ----------------------------------------------------------

class RegisterBody(BaseModel):
    name: str
    email: str
    password: str


class LoginBody(BaseModel):
    email: str
    password: str


class NameBody(BaseModel):
    name: str


class DietChoiceBody(BaseModel):
    name: str


class IngredientBody(BaseModel):
    text: str


class CheckBody(BaseModel):
    """Exactly one of text / fragments / image_b64."""

    text: str | None = None
    fragments: list[str] | None = None
    image_b64: str | None = None


class DietUpsertBody(BaseModel):
    description: str = ""
    forbidden_ingredients: list[str] = []


# --- wiring -------------------------------------------------------------------

def build_state(config: ServiceConfig,
                store: DocumentStore | None = None,
                adapter: OcrAdapter | None = None) -> AppState:
    """Initialize persistence, seed the catalog if empty, bootstrap the admin."""
    if store is None:
        store = JsonDirStore(config.store_path) if config.store_path else MemoryStore()
    catalog = Catalog(store)
    if len(catalog) == 0:
        catalog.load_seed(config.seed_path)
    sessions = SessionManager(ttl_seconds=config.session_ttl_seconds)
    users = UserService(store, catalog, sessions)
    users.ensure_admin(config.admin_email, config.admin_password)
    if adapter is None and config.ocr_command:
        adapter = CommandOcrAdapter(config.ocr_command)
    return AppState(
        config=config,
        catalog=catalog,
        users=users,
        matcher_cache=MatcherCache(),
        adapter=adapter,
    )


def _error_response(exc: DietCheckError) -> JSONResponse:
    return JSONResponse(
        status_code=exc.http_status,
        content={"error": {"code": exc.code, "message": str(exc)}},
    )


def create_app(config: ServiceConfig | None = None,
               store: DocumentStore | None = None,
               adapter: OcrAdapter | None = None) -> FastAPI:
    config = config or ServiceConfig()
    state = build_state(config, store=store, adapter=adapter)
    app = FastAPI(title="dietcheck", version="0.1.0")
    app.state.dietcheck = state
    # Browser clients may be served from a different origin than the API;
    # auth is bearer-token based (no cookies), so a permissive policy is safe.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(DietCheckError)
    async def handle_domain_error(request: Request, exc: DietCheckError) -> JSONResponse:
        return _error_response(exc)

    @app.exception_handler(RequestValidationError)
    async def handle_body_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"error": {"code": "validation_error", "message": str(exc.errors())}},
        )

    @app.middleware("http")
    async def log_requests(request: Request, call_next):
        started = time.perf_counter()
        response = await call_next(request)
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        logger.info(
            '{"event": "request", "method": "%s", "path": "%s", "status": %d, "ms": %.2f}',
            request.method, request.url.path, response.status_code, elapsed_ms,
        )
        return response

    def current_session(request: Request) -> Session:
        header = request.headers.get("authorization", "")
        scheme, _, token = header.partition(" ")
        if scheme.lower() != "bearer" or not token:
            raise Unauthenticated("expected an 'Authorization: Bearer <token>' header")
        return state.users.sessions.validate(token.strip())

    def _profile_dict(profile: UserProfile) -> dict:
        return profile.to_dict()

    # --- open endpoints ---------------------------------------------------

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "catalog_version": state.catalog.version}

    @app.post("/auth/register", status_code=201)
    def register(body: RegisterBody) -> dict:
        profile = state.users.register(body.name, body.email, body.password)
        return _profile_dict(profile)

    @app.post("/auth/login")
    def login(body: LoginBody) -> dict:
        session = state.users.authenticate(body.email, body.password)
        return {
            "token": session.token,
            "uid": session.uid,
            "role": session.role,
            "expires_at": session.expires_at,
        }

    @app.get("/diets")
    def list_diets() -> dict:
        return {
            "catalog_version": state.catalog.version,
            "diets": [
                {"name": name, "description": description}
                for name, description in state.catalog.list_diets()
            ],
        }

    @app.get("/diets/{name}")
    def get_diet(name: str) -> dict:
        return state.catalog.get_diet(name).to_dict()

    # --- member endpoints --------------------------------------------------

    @app.get("/profile")
    def own_profile(session: Session = Depends(current_session)) -> dict:
        return _profile_dict(state.users.get_profile(session.uid, actor=session))

    @app.put("/profile")
    def rename(body: NameBody, session: Session = Depends(current_session)) -> dict:
        return _profile_dict(state.users.set_name(session.uid, body.name, actor=session))

    @app.get("/profile/{uid}")
    def profile_by_uid(uid: str, session: Session = Depends(current_session)) -> dict:
        return _profile_dict(state.users.get_profile(uid, actor=session))

    @app.post("/profile/diets")
    def choose_diet(body: DietChoiceBody, session: Session = Depends(current_session)) -> dict:
        return _profile_dict(state.users.choose_diet(session.uid, body.name, actor=session))

    @app.delete("/profile/diets/{name}")
    def remove_diet(name: str, session: Session = Depends(current_session)) -> dict:
        return _profile_dict(state.users.remove_diet(session.uid, name, actor=session))

    @app.post("/profile/ingredients")
    def add_ingredient(body: IngredientBody, session: Session = Depends(current_session)) -> dict:
        return _profile_dict(
            state.users.add_custom_ingredient(session.uid, body.text, actor=session)
        )

    @app.delete("/profile/ingredients/{text}")
    def remove_ingredient(text: str, session: Session = Depends(current_session)) -> dict:
        return _profile_dict(
            state.users.remove_custom_ingredient(session.uid, text, actor=session)
        )

    @app.post("/check")
    def check(body: CheckBody, session: Session = Depends(current_session)) -> dict:
        provided = [
            value for value in (body.text, body.fragments, body.image_b64)
            if value is not None
        ]
        if len(provided) != 1:
            raise ValidationError("provide exactly one of text, fragments, image_b64")
        if body.text is not None:
            source = CaptureRequest.from_raw_text(body.text)
        elif body.fragments is not None:
            source = CaptureRequest.from_fragments(body.fragments)
        else:
            try:
                data = base64.b64decode(body.image_b64 or "", validate=True)
            except (binascii.Error, ValueError) as exc:
                raise ValidationError("image_b64 is not valid base64") from exc
            source = CaptureRequest.from_image_bytes(data)
        profile = state.users.get_profile(session.uid, actor=session)
        result = check_label(
            source, profile, state.catalog,
            adapter=state.adapter, matcher_cache=state.matcher_cache,
        )
        return result.to_dict()

    # --- admin endpoints (role enforcement lives in the domain layer) -------

    @app.put("/admin/diets/{name}")
    def upsert_diet(name: str, body: DietUpsertBody,
                    session: Session = Depends(current_session)) -> dict:
        diet = Diet(name=name, description=body.description,
                    forbidden_ingredients=list(body.forbidden_ingredients))
        version = state.catalog.upsert_diet(diet, role=session.role)
        return {"catalog_version": version, "diet": state.catalog.get_diet(name).to_dict()}

    @app.delete("/admin/diets/{name}")
    def delete_diet(name: str, session: Session = Depends(current_session)) -> dict:
        version = state.catalog.delete_diet(name, role=session.role)
        return {"catalog_version": version}

    @app.get("/admin/users")
    def list_users(session: Session = Depends(current_session)) -> dict:
        profiles = state.users.list_users(actor=session)
        return {"users": [p.to_dict() for p in sorted(profiles, key=lambda p: p.uid)]}

    @app.delete("/admin/users/{uid}")
    def delete_user(uid: str, session: Session = Depends(current_session)) -> dict:
        state.users.admin_delete_user(uid, actor=session)
        return {"deleted": uid}

    if config.ui_dir is not None and config.ui_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app


def serve(config: ServiceConfig) -> None:
    """Run the service until interrupted."""
    import uvicorn

    logging.basicConfig(level=logging.INFO, format="%(message)s")
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
