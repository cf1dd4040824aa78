"""Exception types shared across the toolkit."""


class StylodetectError(Exception):
    """Base class for all toolkit errors."""


class ParseError(StylodetectError):
    """The grammar could not produce a syntax tree for the input."""


class DataError(StylodetectError):
    """Invalid or malformed corpus data."""


class DegenerateInput(StylodetectError):
    """An operation received input it is undefined for (e.g. zero lines)."""


class EmptyInput(StylodetectError):
    """An operation that requires a non-empty collection got an empty one."""


class InsufficientNegatives(StylodetectError):
    """The negative-pair pool is smaller than the number of positive pairs."""


class TooFewInstances(StylodetectError):
    """Fewer instances than folds requested."""


class InvalidGroups(StylodetectError):
    """ANOVA needs at least two groups and more observations than groups."""


class InvalidDegrees(StylodetectError):
    """Degrees of freedom for the F distribution must be positive integers."""


class SingleClassInput(StylodetectError):
    """Classifier training needs at least two distinct labels."""


class NonFiniteFeature(StylodetectError):
    """A feature matrix contains NaN or infinite values."""


class DimensionMismatch(StylodetectError):
    """Input vector length does not match the model's input layer."""


class LengthMismatch(StylodetectError):
    """Paired label sequences differ in length."""


class TreeTooLarge(StylodetectError):
    """A tree exceeds the node budget for quadratic tree edit distance."""


class EmptyCorpus(StylodetectError):
    """A vectorizer cannot be fitted on zero documents."""


class DegenerateScores(StylodetectError):
    """All training similarity scores are identical."""


class MissingGenerator(StylodetectError):
    """A per-generator analysis requires every generator to be present."""
