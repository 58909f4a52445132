"""Exception types shared across the pipeline."""


class DataError(Exception):
    """Malformed or inconsistent input data (files, rows, feature values)."""


class UnknownRelationError(DataError, KeyError):
    """A relation name with no schema in the knowledge base."""

    def __init__(self, relation):
        super().__init__(relation)
        self.relation = relation

    def __str__(self):
        return f"unknown relation: {self.relation!r}"


class FetchError(Exception):
    """A snippet backend failed for one question."""

    def __init__(self, question, detail):
        super().__init__(f"fetch failed for {question!r}: {detail}")
        self.question = question
        self.detail = detail
