"""Flat key-value experiment configuration.

One `key = value` per line, `#` comments, dotted keys for grouping.
Values coerce in order bool, int, float, complex; comma-separated
values without a colon become lists; anything else stays a string
(so structured specs like ``poly: 0.5, 1`` pass through verbatim).
"""

from __future__ import annotations

from pathlib import Path


class ConfigError(ValueError):
    pass


def _scalar(text: str):
    low = text.lower()
    if low == "true":
        return True
    if low == "false":
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return complex(text)
    except ValueError:
        pass
    return text


def parse_value(text: str):
    text = text.strip()
    coerced = _scalar(text)
    if isinstance(coerced, str) and "," in text and ":" not in text:
        return [_scalar(part.strip()) for part in text.split(",")]
    return coerced


def parse_config(path) -> dict:
    """Read a config file into a flat {dotted key: value} dict."""
    path = Path(path)
    out: dict = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "#" in line:
            line = line.split("#", 1)[0].rstrip()
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"{path}:{lineno}: empty key")
        if key in out:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        out[key] = parse_value(value)
    return out


def get(params: dict, key: str, default=None, required: bool = False):
    if key in params:
        return params[key]
    if required:
        raise ConfigError(f"missing required config key {key!r}")
    return default


def as_list(value) -> list:
    if value is None:
        return []
    if isinstance(value, list):
        return value
    return [value]
