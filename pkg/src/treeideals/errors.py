"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside an operation's domain (non-member node, bad kind, ...)."""


class BudgetExhausted(RuntimeError):
    """A bounded search ran out of budget before reaching an answer."""


class ConstructionError(RuntimeError):
    """A fusion construction could not witness a required choice."""

    def __init__(self, message, word=None, stage=None):
        super().__init__(message)
        self.word = word
        self.stage = stage


class InvariantViolation(AssertionError):
    """A recorded object fails one of its structural invariants."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node
