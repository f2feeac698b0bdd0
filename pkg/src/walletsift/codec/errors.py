"""Error taxonomy shared by the identifier codecs."""


class CodecError(ValueError):
    """Base class for identifier decode failures."""


class AlphabetError(CodecError):
    """Input contains characters outside the codec alphabet."""


class ChecksumMismatch(CodecError):
    """Checksum embedded in the identifier does not verify."""


class MixedCase(CodecError):
    """Bech32 string mixes upper and lower case."""


class BadWitnessProgram(CodecError):
    """Witness version/program fails the segwit size rules."""
