"""Registered users: identity, chosen diets, custom unwanted ingredients.

Each user's data lives in one document keyed by an opaque uid, so a profile
read is always a single store request. Passwords are hashed with scrypt
(memory-hard, per-user salt, parameters stored alongside the hash); plaintext
passwords are never persisted or logged. Sessions are in-memory bearer
tokens with an expiry.
"""

from __future__ import annotations

import hashlib
import hmac
import secrets
import threading
import time
from dataclasses import dataclass, field

from .catalog import CUSTOM_DIET, ROLE_ADMIN, ROLE_MEMBER, Catalog
from .errors import (
    AlreadyChosen,
    DietNotFound,
    DuplicateIngredient,
    EmailTaken,
    EmptyIngredient,
    InvalidCredentials,
    NotChosen,
    NotPresent,
    Unauthenticated,
    Unauthorized,
    UserNotFound,
    ValidationError,
    WeakPassword,
)
from .store import DocumentStore, MemoryStore
from .transcript import normalize_term

_USERS = "users"
_CREDENTIALS = "credentials"

MIN_PASSWORD_LENGTH = 8

# Interactive-login scrypt cost parameters.
_SCRYPT_N = 2 ** 14
_SCRYPT_R = 8
_SCRYPT_P = 1
_DKLEN = 32


@dataclass
class UserProfile:
    """One user document: identity plus diet selections and custom needles."""

    uid: str
    name: str
    email: str
    chosen_diets: list[str] = field(default_factory=list)
    custom_unwanted_ingredients: list[str] = field(default_factory=list)
    role: str = ROLE_MEMBER
    revision: int = 0

    def to_dict(self) -> dict:
        return {
            "uid": self.uid,
            "name": self.name,
            "email": self.email,
            "chosen_diets": list(self.chosen_diets),
            "custom_unwanted_ingredients": list(self.custom_unwanted_ingredients),
            "role": self.role,
            "revision": self.revision,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "UserProfile":
        return cls(
            uid=doc["uid"],
            name=doc.get("name", ""),
            email=doc.get("email", ""),
            chosen_diets=list(doc.get("chosen_diets", [])),
            custom_unwanted_ingredients=list(doc.get("custom_unwanted_ingredients", [])),
            role=doc.get("role", ROLE_MEMBER),
            revision=int(doc.get("revision", 0)),
        )


@dataclass(frozen=True)
class Session:
    """Bearer session: opaque token, owning uid, role, absolute expiry."""

    token: str
    uid: str
    role: str
    expires_at: float

    @property
    def is_admin(self) -> bool:
        return self.role == ROLE_ADMIN


def hash_password(password: str, *, salt: bytes | None = None) -> dict:
    """scrypt-hash a password; returns the credential fields to store."""
    salt = salt if salt is not None else secrets.token_bytes(16)
    digest = hashlib.scrypt(
        password.encode("utf-8"), salt=salt,
        n=_SCRYPT_N, r=_SCRYPT_R, p=_SCRYPT_P, dklen=_DKLEN,
    )
    return {
        "algorithm": "scrypt",
        "salt": salt.hex(),
        "hash": digest.hex(),
        "n": _SCRYPT_N,
        "r": _SCRYPT_R,
        "p": _SCRYPT_P,
        "dklen": _DKLEN,
    }


def verify_password(password: str, credential: dict) -> bool:
    """Recompute with the stored parameters and compare in constant time."""
    digest = hashlib.scrypt(
        password.encode("utf-8"),
        salt=bytes.fromhex(credential["salt"]),
        n=int(credential["n"]), r=int(credential["r"]), p=int(credential["p"]),
        dklen=int(credential["dklen"]),
    )
    return hmac.compare_digest(digest.hex(), credential["hash"])


class SessionManager:
    """In-memory token registry; expired tokens are rejected and dropped."""

    def __init__(self, ttl_seconds: float = 24 * 3600.0) -> None:
        self.ttl_seconds = ttl_seconds
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, uid: str, role: str) -> Session:
        session = Session(
            token=secrets.token_urlsafe(32),
            uid=uid,
            role=role,
            expires_at=time.time() + self.ttl_seconds,
        )
        with self._lock:
            self._sessions[session.token] = session
        return session

    def validate(self, token: str | None) -> Session:
        if not token:
            raise Unauthenticated("missing session token")
        with self._lock:
            session = self._sessions.get(token)
            if session is None:
                raise Unauthenticated("unknown session token")
            if session.expires_at <= time.time():
                del self._sessions[token]
                raise Unauthenticated("session expired")
        return session

    def invalidate_user(self, uid: str) -> None:
        with self._lock:
            for token in [t for t, s in self._sessions.items() if s.uid == uid]:
                del self._sessions[token]


def _credential_key(email: str) -> str:
    return email.strip().lower()


class UserService:
    """Profile and credential operations over a document store.

    Per-user mutations are serialized on a per-uid lock; distinct users
    mutate concurrently. Every successful mutation rewrites the whole
    profile document and bumps its revision, so a reader never observes a
    half-applied update.
    """

    def __init__(self, store: DocumentStore | None = None,
                 catalog: Catalog | None = None,
                 sessions: SessionManager | None = None) -> None:
        self.store = store or MemoryStore()
        self.catalog = catalog or Catalog()
        self.sessions = sessions or SessionManager()
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _user_lock(self, uid: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(uid, threading.Lock())

    # --- registration and authentication --------------------------------

    def register(self, name: str, email: str, password: str,
                 *, role: str = ROLE_MEMBER) -> UserProfile:
        """Create a fresh profile with empty diets and empty custom list."""
        email = email.strip()
        if not email:
            raise ValidationError("email must be non-empty")
        if len(password) < MIN_PASSWORD_LENGTH:
            raise WeakPassword(f"password must be at least {MIN_PASSWORD_LENGTH} characters")
        key = _credential_key(email)
        with self._registry_lock:
            if self.store.get(_CREDENTIALS, key) is not None:
                raise EmailTaken(f"email {email!r} is already registered")
            uid = secrets.token_hex(16)
            profile = UserProfile(uid=uid, name=name, email=email, role=role)
            credential = hash_password(password)
            credential["uid"] = uid
            credential["email"] = email
            self.store.put(_CREDENTIALS, key, credential)
            self.store.put(_USERS, uid, profile.to_dict())
        return profile

    def authenticate(self, email: str, password: str) -> Session:
        """Return a session on correct credentials; one error for all failures."""
        credential = self.store.get(_CREDENTIALS, _credential_key(email))
        if credential is None:
            # Burn comparable work so unknown email is not distinguishable by timing.
            verify_password(password, hash_password("invalid"))
            raise InvalidCredentials("unknown email or wrong password")
        if not verify_password(password, credential):
            raise InvalidCredentials("unknown email or wrong password")
        profile = self._load(credential["uid"])
        return self.sessions.create(profile.uid, profile.role)

    def ensure_admin(self, email: str, password: str, *, name: str = "admin") -> UserProfile:
        """Bootstrap the administrator account from configuration.

        Registers the account when absent; when the email already exists the
        stored password is left untouched and the role is raised to admin.
        """
        try:
            return self.register(name, email, password, role=ROLE_ADMIN)
        except EmailTaken:
            credential = self.store.get(_CREDENTIALS, _credential_key(email))
            assert credential is not None
            uid = credential["uid"]
            with self._user_lock(uid):
                profile = self._load(uid)
                if profile.role != ROLE_ADMIN:
                    profile.role = ROLE_ADMIN
                    self._save(profile)
            return profile

    # --- profile reads ---------------------------------------------------

    def _load(self, uid: str) -> UserProfile:
        doc = self.store.get(_USERS, uid)
        if doc is None:
            raise UserNotFound(f"no user with uid {uid!r}")
        return UserProfile.from_dict(doc)

    def _save(self, profile: UserProfile) -> None:
        profile.revision += 1
        self.store.put(_USERS, profile.uid, profile.to_dict())

    def get_profile(self, uid: str, *, actor: Session) -> UserProfile:
        """Complete profile in one call; own profile or any profile for admins."""
        if actor.uid != uid and not actor.is_admin:
            raise Unauthorized("members may only read their own profile")
        return self._load(uid)

    def list_users(self, *, actor: Session) -> list[UserProfile]:
        if not actor.is_admin:
            raise Unauthorized("only administrators may list users")
        return [self._load(uid) for uid in self.store.keys(_USERS)]

    # --- profile mutations ------------------------------------------------

    def set_name(self, uid: str, name: str, *, actor: Session) -> UserProfile:
        if actor.uid != uid and not actor.is_admin:
            raise Unauthorized("members may only update their own profile")
        name = name.strip()
        if not name:
            raise ValidationError("display name must be non-empty")
        with self._user_lock(uid):
            profile = self._load(uid)
            profile.name = name
            self._save(profile)
            return profile

    def choose_diet(self, uid: str, diet_name: str, *, actor: Session) -> UserProfile:
        if actor.uid != uid and not actor.is_admin:
            raise Unauthorized("members may only update their own profile")
        if diet_name not in self.catalog:
            raise DietNotFound(f"no diet named {diet_name!r}")
        with self._user_lock(uid):
            profile = self._load(uid)
            if diet_name in profile.chosen_diets:
                raise AlreadyChosen(f"diet {diet_name!r} is already chosen")
            profile.chosen_diets.append(diet_name)
            self._save(profile)
            return profile

    def remove_diet(self, uid: str, diet_name: str, *, actor: Session) -> UserProfile:
        if actor.uid != uid and not actor.is_admin:
            raise Unauthorized("members may only update their own profile")
        with self._user_lock(uid):
            profile = self._load(uid)
            if diet_name not in profile.chosen_diets:
                raise NotChosen(f"diet {diet_name!r} is not in the chosen list")
            profile.chosen_diets.remove(diet_name)
            self._save(profile)
            return profile

    def add_custom_ingredient(self, uid: str, text: str, *, actor: Session) -> UserProfile:
        if actor.uid != uid and not actor.is_admin:
            raise Unauthorized("members may only update their own profile")
        term = normalize_term(text)
        if not term:
            raise EmptyIngredient("custom ingredient must be non-empty")
        if "," in term:
            raise ValidationError(
                "custom ingredient may not contain a comma; label tokens never do"
            )
        with self._user_lock(uid):
            profile = self._load(uid)
            if term in profile.custom_unwanted_ingredients:
                raise DuplicateIngredient(f"custom ingredient {term!r} already present")
            profile.custom_unwanted_ingredients.append(term)
            self._save(profile)
            return profile

    def remove_custom_ingredient(self, uid: str, text: str, *, actor: Session) -> UserProfile:
        if actor.uid != uid and not actor.is_admin:
            raise Unauthorized("members may only update their own profile")
        term = normalize_term(text)
        with self._user_lock(uid):
            profile = self._load(uid)
            if term not in profile.custom_unwanted_ingredients:
                raise NotPresent(f"custom ingredient {term!r} not present")
            profile.custom_unwanted_ingredients.remove(term)
            self._save(profile)
            return profile

    # --- administration ---------------------------------------------------

    def admin_delete_user(self, uid: str, *, actor: Session) -> None:
        """Remove profile and credential; live sessions for uid die with them."""
        if not actor.is_admin:
            raise Unauthorized("only administrators may delete users")
        with self._user_lock(uid):
            profile = self._load(uid)
            self.store.delete(_USERS, uid)
            self.store.delete(_CREDENTIALS, _credential_key(profile.email))
            self.sessions.invalidate_user(uid)


__all__ = [
    "CUSTOM_DIET",
    "MIN_PASSWORD_LENGTH",
    "ROLE_ADMIN",
    "ROLE_MEMBER",
    "Session",
    "SessionManager",
    "UserProfile",
    "UserService",
    "hash_password",
    "verify_password",
]
