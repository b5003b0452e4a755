class QexpandError(Exception):
    """Base class for errors raised by this package."""


class DataError(QexpandError):
    """Malformed or inconsistent input data (files, ids, configuration)."""


class UnknownDocumentError(DataError, KeyError):
    def __init__(self, doc_id):
        super().__init__(f"unknown document: {doc_id!r}")
        self.doc_id = doc_id

    def __str__(self):
        return self.args[0]
