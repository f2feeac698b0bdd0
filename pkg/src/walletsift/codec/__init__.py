"""Detection, decoding, and validation of on-chain identifiers."""

from .addresses import (
    Address,
    AddressKind,
    CoinParams,
    Encoding,
    TxId,
    UnknownVersion,
    decode_address,
    encode_address,
)
from .base58 import decode_check as decode_base58check
from .base58 import encode_check as encode_base58check
from .bech32 import decode as decode_bech32
from .bech32 import encode as encode_bech32
from .detect import Detection, detect_identifiers
from .errors import AlphabetError, BadWitnessProgram, ChecksumMismatch, CodecError, MixedCase

__all__ = [
    "Address",
    "AddressKind",
    "AlphabetError",
    "BadWitnessProgram",
    "ChecksumMismatch",
    "CodecError",
    "CoinParams",
    "Detection",
    "Encoding",
    "MixedCase",
    "TxId",
    "UnknownVersion",
    "decode_address",
    "decode_base58check",
    "decode_bech32",
    "detect_identifiers",
    "encode_address",
    "encode_base58check",
    "encode_bech32",
]
