"""Exception hierarchy.

Every error carries a machine-readable ``code`` (stable, used by the API and
CLI) and the HTTP status the API maps it to. Client code should catch
``DietCheckError`` or one of its subclasses, never bare ``Exception``.
"""

from __future__ import annotations


class DietCheckError(Exception):
    """Base class for all domain errors."""

    code = "error"
    http_status = 400


# --- transcript / capture ---------------------------------------------------

class EmptyTranscript(DietCheckError):
    """The transcript produced no usable ingredient tokens."""

    code = "empty_transcript"
    http_status = 422


class NoTextFound(DietCheckError):
    """No non-empty text fragments came out of capture; prompt a retake."""

    code = "no_text_found"
    http_status = 422


class AdapterUnavailable(DietCheckError):
    """No OCR adapter is configured, or the external command failed."""

    code = "adapter_unavailable"
    http_status = 503


# --- catalog ----------------------------------------------------------------

class SeedParseError(DietCheckError):
    """Seed file is missing or not parseable."""

    code = "seed_parse_error"


class SeedValidationError(DietCheckError):
    """Seed file parsed but violates catalog invariants."""

    code = "seed_validation_error"


class ValidationError(DietCheckError):
    """A supplied value violates a domain invariant."""

    code = "validation_error"


class DietNotFound(DietCheckError):
    code = "diet_not_found"
    http_status = 404


# --- users / auth -----------------------------------------------------------

class EmailTaken(DietCheckError):
    code = "email_taken"
    http_status = 409


class WeakPassword(DietCheckError):
    code = "weak_password"


class InvalidCredentials(DietCheckError):
    """Single error for unknown email and wrong password alike."""

    code = "invalid_credentials"
    http_status = 401


class Unauthenticated(DietCheckError):
    """Missing, malformed, or expired session token."""

    code = "unauthenticated"
    http_status = 401


class Unauthorized(DietCheckError):
    """Caller's role does not permit the operation."""

    code = "unauthorized"
    http_status = 403


class UserNotFound(DietCheckError):
    code = "user_not_found"
    http_status = 404


class AlreadyChosen(DietCheckError):
    code = "already_chosen"
    http_status = 409


class NotChosen(DietCheckError):
    code = "not_chosen"
    http_status = 404


class EmptyIngredient(DietCheckError):
    code = "empty_ingredient"


class DuplicateIngredient(DietCheckError):
    code = "duplicate_ingredient"
    http_status = 409


class NotPresent(DietCheckError):
    code = "ingredient_not_present"
    http_status = 404
