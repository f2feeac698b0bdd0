"""Toolkit for recovering cryptocurrency artefacts from Android extractions.

Scans Cellebrite-style filesystem dumps for wallet-app traces (cache
transaction IDs, notification email subjects, cookie stores, credential
files, mnemonic phrases), validates on-chain identifiers, and traces
transaction flows through a UTXO graph to labeled entities.
"""

__version__ = "0.1.0"
