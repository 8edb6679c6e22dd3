"""Canonical serialization helpers.

Everything that crosses a process boundary (store files, HTTP payloads,
scene documents) goes through `canonical_json`, which keeps insertion
order and compact separators so identical values always serialize to
identical bytes.
"""

from __future__ import annotations

import hashlib
import json
from datetime import date, datetime, timezone


def parse_instant(value: str | datetime) -> datetime:
    """Parse an ISO-8601 instant into a UTC-aware datetime.

    Accepts a trailing ``Z``, an explicit offset, or a naive value
    (interpreted as UTC).
    """
    if isinstance(value, datetime):
        dt = value
    else:
        text = value.strip()
        if text.endswith("Z"):
            text = text[:-1] + "+00:00"
        dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        return dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_instant(dt: datetime) -> str:
    """Canonical ``...Z`` form; microseconds kept only when nonzero."""
    dt = parse_instant(dt)
    if dt.microsecond:
        return dt.isoformat().replace("+00:00", "Z")
    return dt.replace(microsecond=0).isoformat().replace("+00:00", "Z")


def parse_day(value: str | date) -> date:
    if isinstance(value, date):
        return value
    return date.fromisoformat(value.strip())


def canonical_json(obj) -> str:
    """Compact JSON with insertion-ordered keys; rejects NaN/inf."""
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def canonical_bytes(obj) -> bytes:
    return canonical_json(obj).encode("utf-8")


def content_hash(obj) -> str:
    """Stable sha256 of the canonical serialization (hex, 16 chars)."""
    return hashlib.sha256(canonical_bytes(obj)).hexdigest()[:16]


def safe_instant_token(dt: datetime) -> str:
    """Filesystem-safe token for an instant (used in file names)."""
    return format_instant(dt).replace(":", "").replace("-", "").replace(".", "_")
