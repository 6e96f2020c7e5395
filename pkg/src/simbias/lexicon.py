"""Bilingual word lists: parsing, deduplication, gender annotation, translation.

The lexicon file is UTF-8 TSV with header
``source<TAB>target<TAB>source_gender<TAB>target_gender``; target and
target_gender may be empty for entries still awaiting translation. Missing
translations are acquired through a pluggable provider; the file-backed cache
provider keeps audits reproducible and fully offline.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import IO, Iterable, Mapping, Protocol, Union

import httpx

from .embeddings import canonicalize
from .errors import LexiconFormatError, TranslationProviderError

TextSource = Union[bytes, str, IO[bytes], IO[str]]

LEXICON_HEADER = "source\ttarget\tsource_gender\ttarget_gender"


class GenderTag(str, Enum):
    NEUTRAL = "neutral"
    MASCULINE = "masculine"
    FEMININE = "feminine"
    UNKNOWN = "unknown"


class Provenance(str, Enum):
    GIVEN = "given"
    TRANSLATED = "translated"


class MultiTokenPolicy(str, Enum):
    """What to do with translations that come back as more than one token."""

    REJECT = "reject"
    HEAD = "head"
    MEAN = "mean"


def _parse_gender(text: str, lineno: int) -> GenderTag:
    try:
        return GenderTag(text.strip().lower())
    except ValueError:
        raise LexiconFormatError(
            f"unknown gender string {text!r} at line {lineno}"
        ) from None


def _canonical_surface(text: str) -> str:
    # Multi-token surfaces keep single internal spaces so token-level
    # policies can split them unambiguously.
    return " ".join(canonicalize(text).split())


@dataclass(frozen=True)
class WordEntry:
    surface: str
    language: str
    gender: GenderTag

    def __post_init__(self) -> None:
        canonical = _canonical_surface(self.surface)
        if not canonical:
            raise LexiconFormatError("word surface must be non-empty")
        object.__setattr__(self, "surface", canonical)


@dataclass(frozen=True)
class LexiconEntry:
    source: WordEntry
    target: WordEntry | None
    provenance: Provenance = Provenance.GIVEN

    def __post_init__(self) -> None:
        if self.target is not None and self.source.language == self.target.language:
            raise LexiconFormatError(
                f"entry {self.source.surface!r}: source and target share a language"
            )


@dataclass(frozen=True)
class BilingualLexicon:
    """Deduplicated entries, sorted by source surface for deterministic output."""

    source_language: str
    target_language: str
    entries: tuple[LexiconEntry, ...]

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.entries, key=lambda e: e.source.surface))
        seen: set[str] = set()
        for entry in ordered:
            if entry.source.surface in seen:
                raise LexiconFormatError(
                    f"duplicate source word {entry.source.surface!r}"
                )
            seen.add(entry.source.surface)
        object.__setattr__(self, "entries", ordered)

    def __len__(self) -> int:
        return len(self.entries)

    def source_surfaces(self) -> tuple[str, ...]:
        return tuple(entry.source.surface for entry in self.entries)


@dataclass(frozen=True)
class LexiconParseResult:
    lexicon: BilingualLexicon
    duplicates_removed: int
    duplicate_surfaces: tuple[str, ...]


def dedupe_and_canonicalize(words: Iterable[str]) -> tuple[list[str], int]:
    """Canonicalize and drop repeats, keeping first-occurrence order.

    Returns the surviving words and the number removed.
    """
    seen: dict[str, None] = {}
    total = 0
    for word in words:
        total += 1
        seen.setdefault(_canonical_surface(word), None)
    kept = [w for w in seen if w]
    return kept, total - len(kept)


def _read_text(data: TextSource) -> str:
    if hasattr(data, "read"):
        data = data.read()  # type: ignore[union-attr]
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise LexiconFormatError(f"input is not valid UTF-8: {exc}") from exc
    return str(data)


def parse_lexicon(
    data: TextSource,
    source_language: str = "en",
    target_language: str = "it",
) -> LexiconParseResult:
    """Parse the lexicon TSV, canonicalizing, deduplicating, and sorting.

    The first occurrence of a source word wins; later repeats are counted and
    reported, never silently merged. Rows whose target column is empty stay
    untranslated (target ``None``). A filled target with an empty or
    ``unknown`` gender is treated as machine-translated and not yet
    human-annotated, which is how a previously translated file round-trips.
    """
    text = _read_text(data)
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].rstrip("\r") != LEXICON_HEADER:
        raise LexiconFormatError(
            f"malformed header: expected {LEXICON_HEADER!r}"
        )

    by_surface: dict[str, LexiconEntry] = {}
    duplicates: list[str] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        fields = raw.rstrip("\r").split("\t")
        if len(fields) != 4:
            raise LexiconFormatError(
                f"expected 4 tab-separated fields at line {lineno}, got {len(fields)}"
            )
        source_text, target_text, source_gender, target_gender = fields
        source_surface = _canonical_surface(source_text)
        if not source_surface:
            raise LexiconFormatError(f"empty source field at line {lineno}")
        source = WordEntry(source_surface, source_language, _parse_gender(source_gender, lineno))

        target_surface = _canonical_surface(target_text)
        gender_text = target_gender.strip().lower()
        if not target_surface:
            if gender_text:
                raise LexiconFormatError(
                    f"target gender given without a target at line {lineno}"
                )
            target = None
            provenance = Provenance.GIVEN
        elif gender_text in ("", GenderTag.UNKNOWN.value):
            target = WordEntry(target_surface, target_language, GenderTag.UNKNOWN)
            provenance = Provenance.TRANSLATED
        else:
            target = WordEntry(target_surface, target_language, _parse_gender(target_gender, lineno))
            provenance = Provenance.GIVEN

        entry = LexiconEntry(source, target, provenance)
        if source_surface in by_surface:
            duplicates.append(source_surface)
        else:
            by_surface[source_surface] = entry

    lexicon = BilingualLexicon(source_language, target_language, tuple(by_surface.values()))
    return LexiconParseResult(lexicon, len(duplicates), tuple(sorted(duplicates)))


def serialize_lexicon(lexicon: BilingualLexicon) -> bytes:
    """Inverse of :func:`parse_lexicon` up to provenance, which the TSV cannot carry."""
    lines = [LEXICON_HEADER]
    for entry in lexicon.entries:
        target = entry.target.surface if entry.target else ""
        target_gender = entry.target.gender.value if entry.target else ""
        lines.append(
            "\t".join((entry.source.surface, target, entry.source.gender.value, target_gender))
        )
    return ("\n".join(lines) + "\n").encode("utf-8")


class TranslationProvider(Protocol):
    def translate(self, word: str, source_lang: str, target_lang: str) -> str | None:
        """Translation for ``word``, or None when unavailable for this word."""
        ...


class CacheTranslationProvider:
    """File-backed word -> translation map; the only provider audits should rely on."""

    def __init__(self, mapping: Mapping[str, str]):
        self._mapping = {
            _canonical_surface(k): _canonical_surface(v) for k, v in mapping.items()
        }

    @classmethod
    def from_file(cls, path) -> "CacheTranslationProvider":
        return cls(load_translation_cache(path))

    def translate(self, word: str, source_lang: str, target_lang: str) -> str | None:
        return self._mapping.get(_canonical_surface(word)) or None


def load_translation_cache(path) -> dict[str, str]:
    """Read a ``source<TAB>target`` TSV cache file."""
    cache: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\r\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise LexiconFormatError(
                    f"expected 2 tab-separated fields at line {lineno} of cache file"
                )
            cache[_canonical_surface(fields[0])] = _canonical_surface(fields[1])
    return cache


def write_translation_cache(path, mapping: Mapping[str, str]) -> None:
    # Single writer, sorted by source word for deterministic bytes.
    lines = [f"{k}\t{v}" for k, v in sorted(mapping.items())]
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write("\n".join(lines) + ("\n" if lines else ""))


@dataclass(frozen=True)
class HttpProviderConfig:
    """Generic JSON-over-HTTP translation endpoint; nothing provider-specific baked in."""

    base_url: str
    auth_header_name: str | None = None
    auth_header_value: str | None = None
    text_field: str = "text"
    source_lang_field: str = "source"
    target_lang_field: str = "target"
    response_path: str = "translation"


class HttpTranslationProvider:
    """Optional live provider; disabled unless explicitly configured."""

    def __init__(self, config: HttpProviderConfig, client: httpx.Client | None = None):
        self._config = config
        self._client = client or httpx.Client(timeout=30.0)

    def translate(self, word: str, source_lang: str, target_lang: str) -> str | None:
        cfg = self._config
        payload = {
            cfg.text_field: word,
            cfg.source_lang_field: source_lang,
            cfg.target_lang_field: target_lang,
        }
        headers = {}
        if cfg.auth_header_name and cfg.auth_header_value:
            headers[cfg.auth_header_name] = cfg.auth_header_value
        try:
            response = self._client.post(cfg.base_url, json=payload, headers=headers)
            response.raise_for_status()
            body = response.json()
        except (httpx.HTTPError, ValueError) as exc:
            raise TranslationProviderError(f"translation request failed: {exc}") from exc
        value = body
        for key in cfg.response_path.split("."):
            if not isinstance(value, dict) or key not in value:
                return None
            value = value[key]
        if not isinstance(value, str) or not value.strip():
            return None
        return value


class CompositeTranslationProvider:
    """Try providers in order; the first non-None answer wins."""

    def __init__(self, providers: Iterable[TranslationProvider]):
        self._providers = tuple(providers)

    def translate(self, word: str, source_lang: str, target_lang: str) -> str | None:
        for provider in self._providers:
            result = provider.translate(word, source_lang, target_lang)
            if result is not None:
                return result
        return None


@dataclass(frozen=True)
class TranslationFillResult:
    lexicon: BilingualLexicon
    filled: tuple[str, ...]
    unavailable: tuple[str, ...]
    policy_violations: tuple[tuple[str, str], ...]


def fill_translations(
    lexicon: BilingualLexicon,
    provider: TranslationProvider,
    policy: MultiTokenPolicy = MultiTokenPolicy.REJECT,
) -> TranslationFillResult:
    """Fill every empty target through ``provider``.

    Filled entries carry provenance ``translated`` and gender ``unknown``
    (gender must be human-supplied before gender-shift analysis). Words the
    provider cannot translate stay empty and are reported. Multi-token
    translations follow ``policy``: rejected by default, reduced to their
    head token, or kept whole for mean-of-token-vector lookup downstream.
    The set of source surfaces is never changed.
    """
    new_entries: list[LexiconEntry] = []
    filled: list[str] = []
    unavailable: list[str] = []
    violations: list[tuple[str, str]] = []
    for entry in lexicon.entries:
        if entry.target is not None:
            new_entries.append(entry)
            continue
        word = entry.source.surface
        translation = provider.translate(
            word, lexicon.source_language, lexicon.target_language
        )
        if translation is None:
            unavailable.append(word)
            new_entries.append(entry)
            continue
        surface = _canonical_surface(translation)
        if not surface:
            unavailable.append(word)
            new_entries.append(entry)
            continue
        if " " in surface:
            if policy is MultiTokenPolicy.REJECT:
                violations.append((word, surface))
                new_entries.append(entry)
                continue
            if policy is MultiTokenPolicy.HEAD:
                surface = surface.split(" ")[0]
            # MultiTokenPolicy.MEAN keeps the whole phrase for the
            # mean-of-token-vectors lookup at audit time.
        target = WordEntry(surface, lexicon.target_language, GenderTag.UNKNOWN)
        new_entries.append(replace(entry, target=target, provenance=Provenance.TRANSLATED))
        filled.append(word)
    new_lexicon = BilingualLexicon(
        lexicon.source_language, lexicon.target_language, tuple(new_entries)
    )
    return TranslationFillResult(
        new_lexicon, tuple(filled), tuple(unavailable), tuple(violations)
    )
