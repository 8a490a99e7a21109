"""Exception types shared across the package."""


class CorpexError(Exception):
    """Base class for all corpex errors."""


class CorpusFormatError(CorpexError):
    """A corpus file line could not be parsed (carries the line number)."""


class DuplicateDocumentError(CorpexError):
    """A document id appeared more than once."""


class IndexFormatError(CorpexError):
    """An index or vector-store file is malformed (bad magic, version, truncation)."""


class MissingDocumentsError(CorpexError):
    """An operation needs raw documents that are not attached to the index."""


class MissingVectorError(CorpexError):
    """A document id has no vector in the store."""


class ConfigError(CorpexError):
    """Inputs required by the selected method or subcommand are missing."""
