"""Forensic case model: extraction images and their file inventories.

An extraction image is an immutable manifest of relative paths plus a
way to read each file's bytes.  Proprietary acquisition containers are
not parsed; the tool consumes unpacked trees or plain zip archives.
"""

from __future__ import annotations

import hashlib
import json
import os
import zipfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path, PurePosixPath
from typing import Callable, Iterator

from .timestamps import format_utc, parse_utc


class IngestError(Exception):
    """Extraction source missing, unreadable, or structurally invalid."""


class ExtractionKind(str, Enum):
    PHYSICAL = "Physical"
    FILE_SYSTEM = "FileSystem"
    ADVANCED_LOGICAL = "AdvancedLogical"
    CLOUD_EXPORT = "CloudExport"


@dataclass(frozen=True)
class FileEntry:
    path: str
    size_bytes: int
    mtime: datetime | None = None

    def __post_init__(self) -> None:
        if self.path.startswith("/"):
            raise ValueError(f"entry path must be relative: {self.path!r}")
        if ".." in PurePosixPath(self.path).parts:
            raise ValueError(f"entry path must not contain '..': {self.path!r}")
        if self.size_bytes < 0:
            raise ValueError("size_bytes must be non-negative")


def _normalize_member(name: str) -> str | None:
    """Normalized relative path for an archive member, or None if the
    name escapes the extraction root."""
    name = name.replace("\\", "/")
    while name.startswith("./"):
        name = name[2:]
    if name.startswith("/") or not name:
        return None
    parts = PurePosixPath(name).parts
    if ".." in parts or any(part == "." for part in parts):
        return None
    return str(PurePosixPath(*parts))


def _derive_image_id(kind: ExtractionKind, root_label: str, entries: list[FileEntry]) -> str:
    digest = hashlib.sha256()
    digest.update(f"{kind.value}\n{root_label}\n".encode())
    for entry in entries:
        digest.update(f"{entry.path}\x00{entry.size_bytes}\n".encode())
    return f"img-{digest.hexdigest()[:16]}"


@dataclass(frozen=True)
class ExtractionImage:
    id: str
    kind: ExtractionKind
    root_label: str
    entries: tuple[FileEntry, ...]
    warnings: tuple[str, ...] = ()
    source_type: str = "directory"
    source_path: str | None = None
    _reader: Callable[[str], bytes] | None = field(
        default=None, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        paths = [entry.path for entry in self.entries]
        if len(paths) != len(set(paths)):
            raise ValueError("duplicate entry paths in image")

    def __len__(self) -> int:
        return len(self.entries)

    def paths(self) -> Iterator[str]:
        return (entry.path for entry in self.entries)

    def entry(self, path: str) -> FileEntry | None:
        return self._by_path().get(path)

    def __contains__(self, path: str) -> bool:
        return path in self._by_path()

    def _by_path(self) -> dict[str, FileEntry]:
        cached = self.__dict__.get("_index")
        if cached is None:
            cached = {entry.path: entry for entry in self.entries}
            self.__dict__["_index"] = cached
        return cached

    def read_bytes(self, path: str, limit: int | None = None) -> bytes:
        if path not in self:
            raise IngestError(f"{path!r} is not in image {self.id}")
        if self._reader is None:
            raise IngestError(
                f"image {self.id} has no content source attached "
                f"(loaded from a manifest whose files are unavailable?)"
            )
        data = self._reader(path)
        return data if limit is None else data[:limit]

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "root_label": self.root_label,
            "source_type": self.source_type,
            "source_path": self.source_path,
            "warnings": list(self.warnings),
            "entries": [
                {
                    "path": entry.path,
                    "size_bytes": entry.size_bytes,
                    "mtime": format_utc(entry.mtime) if entry.mtime else None,
                }
                for entry in self.entries
            ],
        }


def _directory_reader(root: Path) -> Callable[[str], bytes]:
    def read(path: str) -> bytes:
        return (root / path).read_bytes()

    return read


def _archive_reader(archive: Path) -> Callable[[str], bytes]:
    def read(path: str) -> bytes:
        with zipfile.ZipFile(archive) as handle:
            for info in handle.infolist():
                if _normalize_member(info.filename) == path and not info.is_dir():
                    return handle.read(info)
        raise IngestError(f"{path!r} vanished from archive {archive}")

    return read


def ingest_directory(
    root: str | Path,
    kind: ExtractionKind,
    root_label: str | None = None,
) -> ExtractionImage:
    """Inventory every regular file under ``root``; symlinks skipped."""
    root = Path(root)
    if not root.is_dir():
        raise IngestError(f"extraction root {root} is not a readable directory")
    entries: list[FileEntry] = []
    warnings: list[str] = []
    for dirpath, dirnames, filenames in os.walk(root, followlinks=False):
        dirnames.sort()
        for name in sorted(filenames):
            full = Path(dirpath) / name
            rel = str(PurePosixPath(full.relative_to(root).as_posix()))
            try:
                if full.is_symlink():
                    continue
                stat = full.stat()
            except OSError as exc:
                warnings.append(f"unreadable file skipped: {rel} ({exc.strerror})")
                continue
            mtime = datetime.fromtimestamp(int(stat.st_mtime), tz=timezone.utc)
            entries.append(FileEntry(rel, stat.st_size, mtime))
    entries.sort(key=lambda entry: entry.path)
    label = root_label if root_label is not None else root.name
    return ExtractionImage(
        id=_derive_image_id(kind, label, entries),
        kind=kind,
        root_label=label,
        entries=tuple(entries),
        warnings=tuple(warnings),
        source_type="directory",
        source_path=str(root),
        _reader=_directory_reader(root),
    )


def ingest_archive(
    archive: str | Path,
    kind: ExtractionKind,
    root_label: str | None = None,
) -> ExtractionImage:
    """Inventory file members of a zip archive."""
    archive = Path(archive)
    try:
        handle = zipfile.ZipFile(archive)
    except (OSError, zipfile.BadZipFile) as exc:
        raise IngestError(f"cannot open archive {archive}: {exc}") from exc
    entries: list[FileEntry] = []
    warnings: list[str] = []
    with handle:
        seen: set[str] = set()
        for info in handle.infolist():
            if info.is_dir():
                continue
            path = _normalize_member(info.filename)
            if path is None:
                warnings.append(f"rejected archive member name: {info.filename!r}")
                continue
            if path in seen:
                warnings.append(f"duplicate archive member skipped: {path}")
                continue
            seen.add(path)
            try:
                mtime = datetime(*info.date_time, tzinfo=timezone.utc)
            except ValueError:
                mtime = None
            entries.append(FileEntry(path, info.file_size, mtime))
    entries.sort(key=lambda entry: entry.path)
    label = root_label if root_label is not None else archive.name
    return ExtractionImage(
        id=_derive_image_id(kind, label, entries),
        kind=kind,
        root_label=label,
        entries=tuple(entries),
        warnings=tuple(warnings),
        source_type="zip",
        source_path=str(archive),
        _reader=_archive_reader(archive),
    )


@dataclass
class Case:
    case_id: str
    images: list[ExtractionImage] = field(default_factory=list)
    created_at: datetime = field(
        default_factory=lambda: datetime.now(tz=timezone.utc)
    )
    notes: str = ""

    def add_image(self, image: ExtractionImage) -> None:
        if any(existing.id == image.id for existing in self.images):
            raise ValueError(f"duplicate image id {image.id} in case {self.case_id}")
        self.images.append(image)

    def image(self, image_id: str) -> ExtractionImage | None:
        for candidate in self.images:
            if candidate.id == image_id:
                return candidate
        return None

    def to_doc(self) -> dict:
        return {
            "case_id": self.case_id,
            "created_at": format_utc(self.created_at),
            "notes": self.notes,
            "images": [image.to_doc() for image in self.images],
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_doc(), indent=2) + "\n", "utf-8")

    @classmethod
    def from_doc(cls, doc: dict) -> "Case":
        case = cls(
            case_id=doc["case_id"],
            created_at=parse_utc(doc["created_at"]),
            notes=doc.get("notes", ""),
        )
        for image_doc in doc.get("images", []):
            source_path = image_doc.get("source_path")
            source_type = image_doc.get("source_type", "directory")
            reader = None
            if source_path and source_type == "directory" and Path(source_path).is_dir():
                reader = _directory_reader(Path(source_path))
            elif source_path and source_type == "zip" and Path(source_path).is_file():
                reader = _archive_reader(Path(source_path))
            case.add_image(
                ExtractionImage(
                    id=image_doc["id"],
                    kind=ExtractionKind(image_doc["kind"]),
                    root_label=image_doc["root_label"],
                    entries=tuple(
                        FileEntry(
                            path=entry["path"],
                            size_bytes=entry["size_bytes"],
                            mtime=parse_utc(entry["mtime"]) if entry.get("mtime") else None,
                        )
                        for entry in image_doc.get("entries", [])
                    ),
                    warnings=tuple(image_doc.get("warnings", [])),
                    source_type=source_type,
                    source_path=source_path,
                    _reader=reader,
                )
            )
        return case

    @classmethod
    def load(cls, path: str | Path) -> "Case":
        try:
            doc = json.loads(Path(path).read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise IngestError(f"cannot load case file {path}: {exc}") from exc
        return cls.from_doc(doc)
