"""Mnemonic seed phrase detection.

Scans raw bytes for runs of consecutive dictionary words.  A run of
length 12 or more yields hits; overlapping candidate windows collapse
greedily to the longest standard phrase size, so 24 words report one
24-word hit rather than two 12-word ones.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from .hits import MnemonicHit

_WORD_RE = re.compile(rb"[A-Za-z]+")

# Longest first: the greedy window rule depends on this order.
WINDOW_SIZES = (24, 21, 18, 15, 12)


@dataclass(frozen=True)
class Wordlist:
    wordlist_id: str
    words: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.words)) < 1024:
            raise ValueError(
                f"wordlist {self.wordlist_id} has under 1024 distinct words"
            )
        if any(word != word.lower() for word in self.words):
            raise ValueError(f"wordlist {self.wordlist_id} must be lowercase")

    @property
    def supports_checksum(self) -> bool:
        # Checksummed phrase layouts are defined for 2048-word lists.
        return len(self.words) == 2048

    def index(self, word: str) -> int:
        cached = self.__dict__.get("_index")
        if cached is None:
            cached = {word: position for position, word in enumerate(self.words)}
            self.__dict__["_index"] = cached
        return cached[word]

    def __contains__(self, word: str) -> bool:
        cached = self.__dict__.get("_members")
        if cached is None:
            cached = frozenset(self.words)
            self.__dict__["_members"] = cached
        return word in cached

    @classmethod
    def from_file(cls, path: str | Path, wordlist_id: str | None = None) -> "Wordlist":
        path = Path(path)
        words = tuple(path.read_text("utf-8").split())
        return cls(wordlist_id=wordlist_id or path.stem, words=words)


def bundled_wordlists() -> tuple[Wordlist, ...]:
    root = resources.files("walletsift.data").joinpath("wordlists")
    lists = []
    for entry in sorted(root.iterdir(), key=lambda item: item.name):
        if entry.name.endswith(".txt"):
            words = tuple(entry.read_text("utf-8").split())
            lists.append(Wordlist(wordlist_id=entry.name[:-4], words=words))
    return tuple(lists)


def checksum_valid(words: list[str], wordlist: Wordlist) -> bool:
    """Verify the embedded checksum of a standard-layout phrase."""
    bits = "".join(f"{wordlist.index(word):011b}" for word in words)
    entropy_bits = len(bits) * 32 // 33
    entropy = int(bits[:entropy_bits], 2).to_bytes(entropy_bits // 8, "big")
    digest = hashlib.sha256(entropy).digest()
    check_len = len(bits) - entropy_bits
    expected = f"{digest[0]:08b}"[:check_len]
    return bits[entropy_bits:] == expected


def _runs(data: bytes, wordlist: Wordlist) -> Iterable[list[tuple[int, str]]]:
    """Maximal runs of consecutive (offset, word) tokens in the list."""
    current: list[tuple[int, str]] = []
    for match in _WORD_RE.finditer(data):
        word = match.group().decode("ascii").lower()
        if word in wordlist:
            current.append((match.start(), word))
        else:
            if current:
                yield current
            current = []
    if current:
        yield current


def scan_mnemonic_bytes(
    data: bytes,
    wordlists: Iterable[Wordlist],
    validate_checksum: bool = False,
) -> list[MnemonicHit]:
    hits: list[MnemonicHit] = []
    for wordlist in wordlists:
        for run in _runs(data, wordlist):
            position = 0
            while len(run) - position >= WINDOW_SIZES[-1]:
                size = next(s for s in WINDOW_SIZES if s <= len(run) - position)
                window = run[position : position + size]
                words = tuple(word for _, word in window)
                valid: bool | None = None
                if validate_checksum and wordlist.supports_checksum:
                    valid = checksum_valid(list(words), wordlist)
                hits.append(
                    MnemonicHit(
                        words=words,
                        wordlist_id=wordlist.wordlist_id,
                        window_start_offset=window[0][0],
                        checksum_valid=valid,
                    )
                )
                position += size
    return hits
