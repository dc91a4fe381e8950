import enum


class Decision(enum.Enum):
    """Outcome of a bounded search.

    ``YES`` and ``NO`` are proofs.  ``INCONCLUSIVE`` means the search ran out
    of room without settling the question.
    """

    YES = "true"
    NO = "false"
    INCONCLUSIVE = "inconclusive"

    @property
    def decided(self):
        return self is not Decision.INCONCLUSIVE

    @classmethod
    def of(cls, flag):
        return cls.YES if flag else cls.NO

    def to_json(self):
        return self.value
