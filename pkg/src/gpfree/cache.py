"""Persistent, versioned storage for computed r_k tables.

Layout is deliberately line-oriented and human-readable:

    GPFREE-RK
    version 1
    checksum <sha256 of everything below this line>
    k 3
    ell_max 30
    1 1 0
    2 2 0,1
    ...

Loads verify the checksum, the format version, and every table
invariant before anything is returned — a corrupt file is an explicit
error, never a silently wrong table. Saves go through a temp file and
an atomic rename, and refuse to replace a valid deeper table with a
shallower one.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from pathlib import Path

from .apfree import RkTable, rk_table
from .errors import (
    CacheVersionError,
    CorruptCacheError,
    InvariantError,
    WouldTruncateError,
)

MAGIC = "GPFREE-RK"
FORMAT_VERSION = 1
ENV_CACHE_DIR = "GPFREE_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_CACHE_DIR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "gpfree"


def table_path(cache_dir, k: int) -> Path:
    return Path(cache_dir) / ("rk_k%d.txt" % (k,))


def _payload(table: RkTable) -> str:
    lines = ["k %d" % table.k, "ell_max %d" % table.ell_max]
    for ell in range(1, table.ell_max + 1):
        wit = ",".join(str(e) for e in table.witness(ell))
        lines.append("%d %d %s" % (ell, table.value(ell), wit))
    return "\n".join(lines) + "\n"


def save(table: RkTable, path) -> None:
    """Atomically write `table` to `path` (refusing to truncate)."""
    table.validate()
    path = Path(path)
    if path.exists():
        try:
            old = load(path)
        except (CorruptCacheError, CacheVersionError):
            old = None  # cannot trust the old file; replacing it is an upgrade
        if old is not None and old.k == table.k and old.ell_max > table.ell_max:
            raise WouldTruncateError(
                "cache at %s holds ell_max=%d; refusing to shrink to %d"
                % (path, old.ell_max, table.ell_max)
            )
    payload = _payload(table)
    digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()
    text = "%s\nversion %d\nchecksum %s\n%s" % (MAGIC, FORMAT_VERSION, digest, payload)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load(path) -> RkTable:
    """Read and fully validate a table; errors are loud and specific."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorruptCacheError("cannot read cache at %s: %s" % (path, exc)) from exc
    lines = text.split("\n")
    if len(lines) < 6:
        raise CorruptCacheError("cache at %s is too short to be a table" % (path,))
    if lines[0] != MAGIC:
        raise CorruptCacheError("cache at %s lacks the %s magic line" % (path, MAGIC))
    vparts = lines[1].split()
    if len(vparts) != 2 or vparts[0] != "version":
        raise CorruptCacheError("cache at %s has a malformed version line" % (path,))
    if vparts[1] != str(FORMAT_VERSION):
        raise CacheVersionError(vparts[1], FORMAT_VERSION)
    cparts = lines[2].split()
    if len(cparts) != 2 or cparts[0] != "checksum":
        raise CorruptCacheError("cache at %s has a malformed checksum line" % (path,))
    payload = "\n".join(lines[3:])
    digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()
    if digest != cparts[1]:
        raise CorruptCacheError(
            "cache at %s fails its checksum (stored %s..., computed %s...)"
            % (path, cparts[1][:12], digest[:12])
        )
    try:
        k = _expect_int_line(lines[3], "k")
        ell_max = _expect_int_line(lines[4], "ell_max")
        values = []
        witnesses = []
        for i, line in enumerate(lines[5:5 + ell_max], start=1):
            parts = line.split()
            if len(parts) not in (2, 3) or int(parts[0]) != i:
                raise ValueError("row %d malformed" % (i,))
            values.append(int(parts[1]))
            wit = tuple(int(t) for t in parts[2].split(",")) if len(parts) == 3 else ()
            witnesses.append(wit)
        if len(values) != ell_max:
            raise ValueError("expected %d rows" % (ell_max,))
    except (ValueError, IndexError) as exc:
        raise CorruptCacheError("cache at %s fails to parse: %s" % (path, exc)) from exc
    table = RkTable(k, tuple(values), tuple(witnesses))
    try:
        table.validate()
    except InvariantError as exc:
        raise CorruptCacheError(
            "cache at %s parses but violates table invariants: %s" % (path, exc)
        ) from exc
    return table


def _expect_int_line(line: str, key: str) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != key:
        raise ValueError("expected '%s <int>' line, got %r" % (key, line))
    return int(parts[1])


def ensure_table(k: int, ell_max: int, cache_dir=None, *,
                 node_budget: int | None = None) -> RkTable:
    """Load the cached table for k, extend it to ell_max if needed, save
    the extension, and return it. Missing cache files are created;
    corrupt ones raise (delete the file to rebuild)."""
    cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    path = table_path(cache_dir, k)
    base = load(path) if path.exists() else None
    if base is not None and base.ell_max >= ell_max:
        return base.prefix(ell_max)
    try:
        table = rk_table(k, ell_max, node_budget=node_budget, base=base)
    except Exception as exc:
        prefix = getattr(exc, "prefix", None)
        if prefix is not None and (base is None or prefix.ell_max > base.ell_max):
            save(prefix, path)  # keep the verified rows; the error still surfaces
        raise
    save(table, path)
    return table
