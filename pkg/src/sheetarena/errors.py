"""Exception types shared across the package."""

from __future__ import annotations


class SheetArenaError(Exception):
    """Base class for all package-specific errors."""


class MalformedJson(SheetArenaError):
    """Input bytes are not parseable JSON."""


class SchemaViolation(SheetArenaError):
    """Document parses as JSON but violates the SheetSpec@2 schema.

    ``path`` is a JSON-pointer-style location of the offending value,
    e.g. ``/sheets/0/cells/3/ref``.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class FormulaSyntaxError(SheetArenaError):
    """Formula source fails to parse; ``offset`` is the byte position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class InsufficientData(SheetArenaError):
    """Not enough rows/ratings/items for the requested statistic."""


class DegenerateData(SheetArenaError):
    """Vote data cannot identify a finite unpenalized optimum."""


class MissingAnchor(SheetArenaError):
    """The configured anchor model does not appear in the votes."""


class SingularInformation(SheetArenaError):
    """Observed information matrix is singular (collinear covariates)."""

    def __init__(self, columns: list[str]):
        super().__init__(f"singular information matrix; offending columns: {columns}")
        self.columns = columns


class ModelSetMismatch(SheetArenaError):
    """Two fits being compared cover different model sets or anchors."""


class InsufficientVotes(SheetArenaError):
    """A segment filter left too few votes to fit."""


class DimensionMismatch(SheetArenaError):
    """Embedding vectors disagree on dimensionality."""


class EmptySeedSet(SheetArenaError):
    """Category index requested over zero seed prompts."""


class OutOfRange(SheetArenaError):
    """A Likert score falls outside the 1-5 scale."""


class EmptyInput(SheetArenaError):
    """An aggregation was called on an empty collection."""


class MissingEvaluation(SheetArenaError):
    """A battle's spreadsheet has no expert evaluation on record."""


class UnknownBattle(SheetArenaError):
    """Vote targets a battle id that does not exist."""


class DuplicateVote(SheetArenaError):
    """Voter token already voted on this battle."""


class EmptyPrompt(SheetArenaError):
    """Prompt text is empty or exceeds the size limit."""
