"""dietcheck: ingredient-label compliance checking against diet rule sets.

Pipeline: OCR text fragments (or raw label text) are joined and lowercased,
split into comma-delimited ingredient tokens, and matched against the
forbidden-ingredient lists of a user's chosen diets plus their personal
unwanted ingredients. Exposed as a library, a REST service, and a CLI.
"""

from .capture import (
    CaptureOutcome,
    CaptureRequest,
    CommandOcrAdapter,
    FixtureOcrAdapter,
    OcrAdapter,
    extract_fragments,
)
from .catalog import CUSTOM_DIET, ROLE_ADMIN, ROLE_MEMBER, Catalog, Diet, default_seed_path
from .engine import (
    VERDICT_COMPLIANT,
    VERDICT_VIOLATIONS,
    DietRule,
    FilterResult,
    MatcherCache,
    NeedleMatch,
    SubstringMatcher,
    Violation,
    check_label,
    collect_rules,
    filter_tokens,
    filter_tokens_naive,
)
from .errors import (
    AdapterUnavailable,
    AlreadyChosen,
    DietCheckError,
    DietNotFound,
    DuplicateIngredient,
    EmailTaken,
    EmptyIngredient,
    EmptyTranscript,
    InvalidCredentials,
    NoTextFound,
    NotChosen,
    NotPresent,
    SeedParseError,
    SeedValidationError,
    Unauthenticated,
    Unauthorized,
    UserNotFound,
    ValidationError,
    WeakPassword,
)
from .transcript import (
    IngredientToken,
    TextFragment,
    Transcript,
    join_fragments,
    normalize_term,
    occurrence_spans,
    tokenize,
)
from .users import Session, SessionManager, UserProfile, UserService

__version__ = "0.1.0"
