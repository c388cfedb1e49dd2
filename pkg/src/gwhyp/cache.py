"""Plain-text store of computed invariants.

One entry per line, ``<key>\\t<num>/<den>\\n``, sorted by key bytes on save.
Writing a different value for a key that is already present is an error:
two conforming runs can never disagree, so a conflict means a bug or a
corrupted file.
"""
from __future__ import annotations

import os
import re
import tempfile
import threading
from fractions import Fraction
from pathlib import Path

from .keys import KeyParseError, canonicalize, parse, serialize

__all__ = ["CacheStore", "CacheConflict", "CacheFormatError", "load", "save", "merge"]

_VALUE = re.compile(r"-?(0|[1-9][0-9]*)/[1-9][0-9]*")


class CacheConflict(ValueError):
    def __init__(self, key: str, old: Fraction, new: Fraction):
        self.key = key
        self.old = old
        self.new = new
        super().__init__(f"conflicting values for {key}: {old} != {new}")


class CacheFormatError(ValueError):
    def __init__(self, lineno: int, msg: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}")


class CacheStore:
    """Map from canonical key strings to exact values."""

    def __init__(self, entries=None):
        self._entries: dict[str, Fraction] = {}
        self._lock = threading.Lock()
        if entries:
            for k, v in dict(entries).items():
                self.put(k, v)

    def __len__(self):
        return len(self._entries)

    def __contains__(self, key):
        return self._name(key) in self._entries

    def __iter__(self):
        return iter(sorted(self._entries))

    def items(self):
        return sorted(self._entries.items())

    @staticmethod
    def _name(key) -> str:
        return key if isinstance(key, str) else serialize(key)

    def get(self, key):
        return self._entries.get(self._name(key))

    def put(self, key, value):
        name = self._name(key)
        value = Fraction(value)
        with self._lock:
            old = self._entries.get(name)
            if old is None:
                self._entries[name] = value
            elif old != value:
                raise CacheConflict(name, old, value)

    def dumps(self) -> str:
        return "".join(
            f"{k}\t{v.numerator}/{v.denominator}\n" for k, v in self.items()
        )

    def __eq__(self, other):
        if not isinstance(other, CacheStore):
            return NotImplemented
        return self._entries == other._entries


def _parse_line(line: str, lineno: int) -> tuple[str, Fraction]:
    key, sep, value = line.partition("\t")
    if not sep:
        raise CacheFormatError(lineno, "missing TAB-separated value")
    if not _VALUE.fullmatch(value):
        raise CacheFormatError(lineno, f"bad value {value!r}")
    try:
        parsed = parse(key)
    except KeyParseError as exc:
        raise CacheFormatError(lineno, str(exc)) from None
    if canonicalize(parsed) != parsed:
        raise CacheFormatError(lineno, f"key not in canonical form: {key}")
    num, den = value.split("/")
    return key, Fraction(int(num), int(den))


def loads(text: str) -> CacheStore:
    store = CacheStore()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for lineno, line in enumerate(lines, 1):
        if line.endswith("\r"):
            raise CacheFormatError(lineno, "CR line endings are not allowed")
        key, value = _parse_line(line, lineno)
        store.put(key, value)
    return store


def load(path) -> CacheStore:
    return loads(Path(path).read_text(encoding="utf-8"))


def save(store: CacheStore, path) -> None:
    """Write atomically (temp file + rename) in sorted order."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(store.dumps())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def merge(a: CacheStore, b: CacheStore) -> CacheStore:
    out = CacheStore()
    for k, v in a.items():
        out.put(k, v)
    for k, v in b.items():
        out.put(k, v)
    return out
