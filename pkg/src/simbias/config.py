"""Run configuration: defaults, key=value config files, flag precedence.

Precedence is command-line flags > config file > built-in defaults, and the
effective configuration is echoed into every report so no number hides the
choices behind it.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError
from .lexicon import MultiTokenPolicy
from .metrics import AuditSettings

DEFAULT_TARGETS = ("she", "he", "lei", "lui")

FORMAT_ALIASES = {
    "json": "json",
    "csv": "csv-bundle",
    "csv-bundle": "csv-bundle",
    "markdown": "markdown",
    "edge-csv": "edge-csv",
    "dot": "dot",
}


@dataclass
class RunConfig:
    """Everything the CLI commands and the service need to drive a run."""

    src_vec: str | None = None
    dst_vec: str | None = None
    lexicon: str | None = None
    cache: str | None = None
    words: str | None = None
    provider_config: str | None = None
    out: str | None = None
    targets: tuple[str, str, str, str] = DEFAULT_TARGETS
    src_lang: str = "en"
    dst_lang: str = "it"
    bin_width: float = 0.1
    threshold: float = 0.3
    sig_threshold: float = 0.1
    multi_token: MultiTokenPolicy = MultiTokenPolicy.REJECT
    # None means "let the command pick its defaults"
    formats: tuple[str, ...] | None = None
    side: str = "src"
    max_internal: float = 0.9

    def settings(self) -> AuditSettings:
        return AuditSettings(
            bin_width=self.bin_width,
            network_threshold=self.threshold,
            significance_threshold=self.sig_threshold,
            multi_token_policy=self.multi_token,
            max_internal_similarity=self.max_internal,
        )

    def validate_common(self) -> None:
        if self.bin_width <= 0:
            raise ConfigError(f"bin width must be positive, got {self.bin_width}")
        if not -1.0 <= self.threshold <= 1.0:
            raise ConfigError(f"threshold out of range [-1, 1]: {self.threshold}")
        if not -1.0 <= self.sig_threshold <= 1.0:
            raise ConfigError(
                f"significance threshold out of range [-1, 1]: {self.sig_threshold}"
            )
        if len(self.targets) != 4 or not all(self.targets):
            raise ConfigError(
                "targets must be 4 comma-separated words: X_src,Y_src,X_dst,Y_dst"
            )

    def require(self, *names: str) -> None:
        for name in names:
            if getattr(self, name) is None:
                flag = "--" + name.replace("_", "-")
                raise ConfigError(f"missing required option {flag}")


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Read a simple ``key=value`` file; '#' starts a comment."""
    values: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"malformed line {lineno} in {path}: expected key=value")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _parse_targets(value: str) -> tuple[str, str, str, str]:
    parts = tuple(p.strip() for p in value.split(","))
    if len(parts) != 4 or not all(parts):
        raise ConfigError(
            f"targets must be 4 comma-separated words, got {value!r}"
        )
    return parts  # type: ignore[return-value]


def _parse_formats(value: str) -> tuple[str, ...]:
    names = [p.strip() for p in value.split(",") if p.strip()]
    out = []
    for name in names:
        if name not in FORMAT_ALIASES:
            raise ConfigError(f"unknown format {name!r}")
        out.append(FORMAT_ALIASES[name])
    if not out:
        raise ConfigError("at least one output format is required")
    return tuple(out)


_COERCERS = {
    "targets": _parse_targets,
    "formats": _parse_formats,
    "bin_width": float,
    "threshold": float,
    "sig_threshold": float,
    "max_internal": float,
    "multi_token": MultiTokenPolicy,
}


def build_config(
    flag_values: dict[str, object], config_path: str | None = None
) -> RunConfig:
    """Merge defaults, config-file values, and explicit flags (in that order)."""
    config = RunConfig()
    known = {f.name for f in fields(RunConfig)}

    if config_path:
        file_values = parse_config_file(config_path)
        for key, raw in file_values.items():
            name = key.replace("-", "_")
            if name == "format":
                name = "formats"
            if name not in known:
                raise ConfigError(f"unknown config key {key!r} in {config_path}")
            _assign(config, name, raw)

    for name, value in flag_values.items():
        if value is None:
            continue
        if name not in known:
            raise ConfigError(f"unknown option {name!r}")
        _assign(config, name, value)

    config.validate_common()
    return config


def _assign(config: RunConfig, name: str, value: object) -> None:
    coercer = _COERCERS.get(name)
    if coercer is not None and isinstance(value, str):
        try:
            value = coercer(value)
        except ConfigError:
            raise
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"invalid value for {name}: {value!r}") from exc
    setattr(config, name, value)
