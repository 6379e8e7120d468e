"""Text capture boundary: turn an image reference into text fragments.

Character recognition itself is out of scope — it is delegated to a
pluggable adapter. The default adapter shells out to an external OCR
command (image bytes on stdin, one fragment per line on stdout); a fixture
adapter reads sidecar transcript files so tests run without any OCR engine.
Fragment-list and raw-text requests pass through without touching an
adapter at all, byte-identical.

Captured image bytes are held in memory only and never persisted.
"""

from __future__ import annotations

import shlex
import subprocess
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, Sequence, Union

from .errors import AdapterUnavailable, NoTextFound, ValidationError
from .transcript import TextFragment


@dataclass(frozen=True)
class CaptureRequest:
    """Exactly one source variant is populated."""

    image_bytes: bytes | None = None
    image_path: Path | None = None
    fragments: tuple[str, ...] | None = None
    raw_text: str | None = None

    def __post_init__(self) -> None:
        populated = sum(
            source is not None
            for source in (self.image_bytes, self.image_path, self.fragments, self.raw_text)
        )
        if populated != 1:
            raise ValidationError("capture request must populate exactly one source variant")

    @property
    def is_image(self) -> bool:
        return self.image_bytes is not None or self.image_path is not None

    @classmethod
    def from_image_bytes(cls, data: bytes) -> "CaptureRequest":
        return cls(image_bytes=data)

    @classmethod
    def from_image_path(cls, path: str | Path) -> "CaptureRequest":
        return cls(image_path=Path(path))

    @classmethod
    def from_fragments(cls, fragments: Sequence[Union[str, TextFragment]]) -> "CaptureRequest":
        texts = tuple(f.text if isinstance(f, TextFragment) else f for f in fragments)
        return cls(fragments=texts)

    @classmethod
    def from_raw_text(cls, text: str) -> "CaptureRequest":
        return cls(raw_text=text)


@dataclass(frozen=True)
class CaptureOutcome:
    """Successful capture: at least one fragment with non-empty text."""

    fragments: tuple[TextFragment, ...]


class OcrAdapter(Protocol):
    """Converts the image variants of a request into text fragments."""

    def extract(self, request: CaptureRequest) -> list[str]:
        ...


class CommandOcrAdapter:
    """Runs an external OCR command: image bytes on stdin, fragments on stdout.

    The command is configured as a single shell-style string (split with
    shlex, not run through a shell). One stdout line becomes one fragment;
    blank lines are kept — emptiness is judged downstream.
    """

    def __init__(self, command: str, *, timeout: float = 60.0) -> None:
        if not command.strip():
            raise ValidationError("OCR command must be non-empty")
        self.argv = shlex.split(command)
        self.timeout = timeout

    def extract(self, request: CaptureRequest) -> list[str]:
        data = request.image_bytes
        if data is None:
            assert request.image_path is not None
            try:
                data = request.image_path.read_bytes()
            except FileNotFoundError as exc:
                raise ValidationError(f"image file not found: {request.image_path}") from exc
        try:
            completed = subprocess.run(
                self.argv, input=data, capture_output=True, timeout=self.timeout,
            )
        except FileNotFoundError as exc:
            raise AdapterUnavailable(f"OCR command not found: {self.argv[0]!r}") from exc
        except subprocess.TimeoutExpired as exc:
            raise AdapterUnavailable(f"OCR command timed out after {self.timeout}s") from exc
        if completed.returncode != 0:
            detail = completed.stderr.decode("utf-8", "replace").strip()
            raise AdapterUnavailable(
                f"OCR command exited with status {completed.returncode}: {detail}"
            )
        text = completed.stdout.decode("utf-8", "replace")
        return text.splitlines()


class FixtureOcrAdapter:
    """Resolves an image path to a sidecar transcript: ``<stem>.txt`` lines.

    Sidecars are looked up next to the image, or under ``fixture_dir`` when
    given. Image-bytes requests are not supported by this adapter.
    """

    def __init__(self, fixture_dir: str | Path | None = None) -> None:
        self.fixture_dir = Path(fixture_dir) if fixture_dir is not None else None

    def extract(self, request: CaptureRequest) -> list[str]:
        if request.image_path is None:
            raise AdapterUnavailable("fixture adapter only resolves image paths")
        folder = self.fixture_dir if self.fixture_dir is not None else request.image_path.parent
        sidecar = folder / (request.image_path.stem + ".txt")
        try:
            return sidecar.read_text(encoding="utf-8").splitlines()
        except FileNotFoundError as exc:
            raise AdapterUnavailable(f"no sidecar transcript at {sidecar}") from exc


def as_capture_request(source: "str | Sequence | CaptureRequest") -> CaptureRequest:
    """Coerce the accepted source forms into a request.

    Strings are raw transcripts, sequences are ordered fragment lists, and
    image sources must arrive as an explicit ``CaptureRequest``.
    """
    if isinstance(source, CaptureRequest):
        return source
    if isinstance(source, str):
        return CaptureRequest.from_raw_text(source)
    if isinstance(source, (bytes, bytearray)):
        return CaptureRequest.from_image_bytes(bytes(source))
    if isinstance(source, Sequence):
        return CaptureRequest.from_fragments(source)
    raise ValidationError(f"unsupported label source type: {type(source).__name__}")


def extract_fragments(request: CaptureRequest,
                      adapter: OcrAdapter | None = None) -> CaptureOutcome:
    """Produce text fragments for a capture request.

    Fragment and raw-text variants pass through unchanged (raw text becomes
    a single fragment); image variants are delegated to the adapter.

    Raises:
        NoTextFound: zero non-empty fragments resulted — the retake prompt.
        AdapterUnavailable: image request without a configured adapter, or
            the external command failed.
    """
    if request.fragments is not None:
        texts: Sequence[str] = request.fragments
    elif request.raw_text is not None:
        texts = [request.raw_text]
    else:
        if adapter is None:
            raise AdapterUnavailable("no OCR adapter configured for image input")
        texts = adapter.extract(request)
    if not any(text for text in texts):
        raise NoTextFound("no text recognized; retake the photo")
    return CaptureOutcome(fragments=tuple(TextFragment(text) for text in texts))
