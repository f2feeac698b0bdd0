"""End-to-end scan over a planted extraction tree."""

import pytest

from walletsift.case import Case, ExtractionKind, ingest_directory
from walletsift.coins import Coin
from walletsift.scanner import ArtifactKind, load_signatures, scan, scan_case

from . import plantgen
from .scantools import memory_image

SIGNATURES = load_signatures()


@pytest.fixture(scope="module")
def planted_image(tmp_path_factory):
    root = tmp_path_factory.mktemp("plant")
    plantgen.build_plant_tree(root, noise_files=400)
    return ingest_directory(root, ExtractionKind.ADVANCED_LOGICAL, "device")


@pytest.fixture(scope="module")
def planted_result(planted_image):
    return scan(planted_image, SIGNATURES)


def test_planted_artifacts_recovered_exactly(planted_result):
    counts = {
        kind.value: len(planted_result.by_kind(kind)) for kind in ArtifactKind
    }
    counts = {key: value for key, value in counts.items() if value}
    assert counts == plantgen.EXPECTED_HITS


def test_no_warnings_on_clean_tree(planted_result):
    assert planted_result.warnings == ()


def test_cache_hits_carry_coin_and_txid(planted_result):
    hits = planted_result.by_kind(ArtifactKind.CACHE_TXID)
    assert {(h.coin, h.value) for h in hits} == {
        (Coin.BTC, plantgen.BTC_CACHE_TXID),
        (Coin.DOGE, plantgen.DOGE_CACHE_TXID),
    }


def test_email_hits_match_planted_subjects(planted_result):
    hits = planted_result.by_kind(ArtifactKind.EMAIL_SUBJECT)
    assert {h.value for h in hits} == set(plantgen.PLANTED_SUBJECTS)


def test_cookie_hits_come_from_both_stores(planted_result):
    hits = planted_result.by_kind(ArtifactKind.COOKIE)
    by_store = {}
    for hit in hits:
        by_store.setdefault(hit.source_path, []).append(hit)
    assert {path.rsplit("/", 3)[0] for path in by_store} == {
        "_data/data/io.atomicwallet",
        "_data/data/com.coinbase.android",
    }
    names = {hit.details.name for hit in hits}
    assert {"_cflb", "__cf_bm"} <= names


def test_credential_split_matches_manifest(planted_result):
    hits = planted_result.by_kind(ArtifactKind.CREDENTIAL_FILE)
    by_manager = {}
    for hit in hits:
        by_manager[hit.details.manager] = by_manager.get(hit.details.manager, 0) + 1
    assert by_manager == plantgen.CREDENTIALS_BY_MANAGER


def test_no_mnemonic_hits_in_plant(planted_result):
    assert planted_result.by_kind(ArtifactKind.MNEMONIC) == []


def test_scan_is_deterministic(planted_image):
    first = scan(planted_image, SIGNATURES)
    second = scan(planted_image, SIGNATURES)
    assert first.to_doc() == second.to_doc()


def test_hits_sorted_by_path_then_kind(planted_result):
    keys = [(hit.source_path, hit.kind.value) for hit in planted_result.hits]
    assert keys == sorted(keys)


def test_empty_signature_list_rejected(planted_image):
    with pytest.raises(ValueError):
        scan(planted_image, [])


def test_corrupt_cookie_store_warns_without_hits():
    image = memory_image(
        {"data/io.atomicwallet/app_webview/Default/Cookies": b"\x01not sqlite"}
    )
    result = scan(image, SIGNATURES)
    assert result.hits == ()
    assert len(result.warnings) == 1
    assert "cookie store" in result.warnings[0]


def test_oversized_files_skipped_by_content_detectors():
    payload = b"Subject: You just received 0.00254817 BTC\n" + b"x" * 400
    image = memory_image({"data/mail/big.eml": payload})
    capped = scan(image, SIGNATURES, max_content_bytes=100)
    assert capped.by_kind(ArtifactKind.EMAIL_SUBJECT) == []
    full = scan(image, SIGNATURES)
    assert len(full.by_kind(ArtifactKind.EMAIL_SUBJECT)) == 1


def test_mnemonic_found_through_orchestrator():
    phrase = ("abandon " * 23 + "art").encode()
    image = memory_image({"data/com.example.notes/files/note.txt": phrase})
    result = scan(image, SIGNATURES, validate_checksum=True)
    hits = result.by_kind(ArtifactKind.MNEMONIC)
    assert len(hits) == 1
    assert hits[0].details.checksum_valid is True
    assert hits[0].value.endswith("art")


def test_scan_case_returns_one_result_per_image(tmp_path):
    first = tmp_path / "one"
    second = tmp_path / "two"
    plantgen.build_plant_tree(first, noise_files=3)
    second.mkdir()
    (second / "empty.txt").write_bytes(b"nothing here")
    case = Case(case_id="case-1")
    case.add_image(ingest_directory(first, ExtractionKind.PHYSICAL, "one"))
    case.add_image(ingest_directory(second, ExtractionKind.FILE_SYSTEM, "two"))
    results = scan_case(case, SIGNATURES)
    assert [result.image_id for result in results] == [img.id for img in case.images]
    assert sum(len(result.hits) for result in results) == sum(
        plantgen.EXPECTED_HITS.values()
    )


def test_binary_files_not_searched_for_subjects():
    payload = b"\x00" + b"Subject: You just received 0.00254817 BTC\n"
    image = memory_image({"data/blob.bin": payload})
    result = scan(image, SIGNATURES)
    assert result.by_kind(ArtifactKind.EMAIL_SUBJECT) == []
