#!/usr/bin/env python3
"""Regenerate the bundled demo fixture chain.

Produces one normalized JSON document per transaction under
src/walletsift/data/fixtures/<coin>/, plus an example label file.  All
content is derived from fixed seed strings, so re-running the script is
a no-op unless the derivation rules change.

The chain models a device study: two hardware-wallet funding legs (BTC
and DOGE) flowing through exchange and mobile wallets and back.  Txids
and several addresses carry fixed four-character prefixes/suffixes so
that reports and docs can refer to them in redacted form.
"""

from __future__ import annotations

import hashlib
import json
import pathlib
import sys
from decimal import Decimal

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from walletsift.coins import format_amount  # noqa: E402
from walletsift.codec.base58 import encode_check  # noqa: E402
from walletsift.codec.bech32 import encode as bech32_encode  # noqa: E402

DATA = pathlib.Path(__file__).resolve().parents[1] / "src" / "walletsift" / "data"


def _h(seed: str) -> bytes:
    return hashlib.sha256(seed.encode()).digest()


def derive_txid(prefix: str, suffix: str) -> str:
    middle = _h(f"walletsift:txid:{prefix}:{suffix}").hex()
    return prefix + middle[: 64 - len(prefix) - len(suffix)] + suffix


def derive_base58(version: int, fragment: str) -> str:
    """Smallest counter whose payload encodes to an address starting
    with ``fragment``.  The leading character is fixed by the version
    byte, so roughly 58^(len-1) candidates are tried."""
    counter = 0
    while True:
        payload = _h(f"walletsift:addr:{fragment}:{counter}")[:20]
        address = encode_check(version, payload)
        if address.startswith(fragment):
            return address
        counter += 1


def derive_bech32(name: str) -> str:
    return bech32_encode("bc", 0, _h(f"walletsift:addr:{name}")[:20])


def build() -> dict:
    txids = {
        "btc_ledger_to_coinbase": derive_txid("1bfa", "e012a"),
        "btc_coinbase_to_coinomi": derive_txid("4af2", "8643"),
        "btc_coinomi_to_atomic": derive_txid("2eeb", "fe73"),
        "btc_atomic_to_ledger": derive_txid("d232", "f48e"),
        "doge_ledger_to_atomic": derive_txid("738a", "1f47"),
        "doge_atomic_to_coinomi": derive_txid("e531", "801a"),
        "doge_coinomi_to_atomic": derive_txid("9aa8", "5269"),
        "doge_atomic_to_ledger": derive_txid("bf48", "b80a"),
    }
    addr = {
        "ledger_btc_1": derive_bech32("ledger-btc-1"),
        "ledger_btc_2": derive_bech32("ledger-btc-2"),
        "ledger_btc_change": derive_bech32("ledger-btc-change"),
        "ledger_btc_recv": derive_bech32("ledger-btc-recv"),
        "coinbase_deposit": derive_base58(0x05, "3DQb"),
        "coinbase_hot": derive_base58(0x05, "32ti"),
        "coinbase_change": derive_base58(0x05, "3Npq"),
        "coinomi_btc_recv": derive_bech32("coinomi-btc-recv"),
        "atomic_btc_recv": derive_base58(0x00, "1EQ6"),
        "ledger_doge": derive_base58(0x1E, "DPbi"),
        "atomic_doge_recv": derive_base58(0x1E, "DMfq"),
        "coinomi_doge_recv": derive_base58(0x1E, "DH3T"),
        "atomic_doge_recv2": derive_base58(0x1E, "DLou"),
        "atomic_doge_out": derive_base58(0x1E, "DDUo"),
        "ledger_doge_recv": derive_base58(0x1E, "D7JZ"),
    }
    # 31 additional hot-wallet inputs swept alongside the deposit.
    coinbase_sweep = [
        encode_check(0x05, _h(f"walletsift:addr:cb-hot:{i}")[:20]) for i in range(2, 33)
    ]

    def amount(v: str) -> str:
        return format_amount(Decimal(v))

    def tx(txid, coin, timestamp, inputs, outputs, fee):
        return {
            "txid": txid,
            "coin": coin,
            "timestamp": timestamp,
            "inputs": [
                {"address": a, "value": amount(v), "funding_txid": f} for a, v, f in inputs
            ],
            "outputs": [
                {"index": i, "address": a, "value": amount(v), "spent_by_txid": s}
                for i, (a, v, s) in enumerate(outputs)
            ],
            "fee": amount(fee),
        }

    t = txids
    a = addr
    transactions = [
        tx(t["btc_ledger_to_coinbase"], "BTC", "2021-06-14T01:57:00Z",
           [(a["ledger_btc_1"], "0.002", None), (a["ledger_btc_2"], "0.001", None)],
           [(a["coinbase_deposit"], "0.00254817", t["btc_coinbase_to_coinomi"]),
            (a["ledger_btc_change"], "0.0004", None)],
           "0.00005183"),
        tx(t["btc_coinbase_to_coinomi"], "BTC", "2021-06-14T03:14:00Z",
           [(a["coinbase_hot"], "0.005", None),
            (a["coinbase_deposit"], "0.00254817", t["btc_ledger_to_coinbase"])]
           + [(s, "0.01", None) for s in coinbase_sweep],
           [(a["coinomi_btc_recv"], "0.002548", t["btc_coinomi_to_atomic"]),
            (a["coinbase_change"], "0.31480017", None)],
           "0.0002"),
        tx(t["btc_coinomi_to_atomic"], "BTC", "2021-06-14T03:29:25Z",
           [(a["coinomi_btc_recv"], "0.002548", t["btc_coinbase_to_coinomi"])],
           [(a["atomic_btc_recv"], "0.00254", t["btc_atomic_to_ledger"])],
           "0.000008"),
        tx(t["btc_atomic_to_ledger"], "BTC", "2021-06-14T21:49:44Z",
           [(a["atomic_btc_recv"], "0.00254", t["btc_coinomi_to_atomic"])],
           [(a["ledger_btc_recv"], "0.00253", None)],
           "0.00001"),
        tx(t["doge_ledger_to_atomic"], "DOGE", "2021-06-14T03:39:03Z",
           [(a["ledger_doge"], "213.577", None)],
           [(a["atomic_doge_recv"], "212.577", t["doge_atomic_to_coinomi"])],
           "1"),
        tx(t["doge_atomic_to_coinomi"], "DOGE", "2021-06-14T03:46:00Z",
           [(a["atomic_doge_recv"], "212.577", t["doge_ledger_to_atomic"])],
           [(a["coinomi_doge_recv"], "212.577", t["doge_coinomi_to_atomic"])],
           "0"),
        tx(t["doge_coinomi_to_atomic"], "DOGE", "2021-06-14T03:53:00Z",
           [(a["coinomi_doge_recv"], "212.577", t["doge_atomic_to_coinomi"])],
           [(a["atomic_doge_recv2"], "210.577", None)],
           "2"),
        tx(t["doge_atomic_to_ledger"], "DOGE", "2021-06-14T21:40:57Z",
           [(a["atomic_doge_out"], "211.577", None)],
           [(a["ledger_doge_recv"], "210.577", None)],
           "1"),
    ]
    labels = {
        a["coinbase_hot"]: {"entity": "Coinbase", "source": "exchange attribution"},
        a["coinbase_deposit"]: {"entity": "Coinbase", "source": "exchange attribution"},
    }
    return {"txids": txids, "addresses": addr, "transactions": transactions, "labels": labels}


def main() -> None:
    built = build()
    for doc in built["transactions"]:
        coin_dir = DATA / "fixtures" / doc["coin"].lower()
        coin_dir.mkdir(parents=True, exist_ok=True)
        path = coin_dir / f"{doc['txid']}.json"
        path.write_text(json.dumps(doc, indent=2) + "\n")
        print("wrote", path.relative_to(DATA.parents[2]))
    examples = DATA / "examples"
    examples.mkdir(exist_ok=True)
    (examples / "labels.json").write_text(json.dumps(built["labels"], indent=2) + "\n")
    print("wrote", (examples / "labels.json").relative_to(DATA.parents[2]))
    for name, value in {**built["txids"], **built["addresses"]}.items():
        print(f"{name:26s} {value}")


if __name__ == "__main__":
    main()
