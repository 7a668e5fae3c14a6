"""Exception hierarchy.

Ingestion problems derive from :class:`IngestionError` and computation
problems from :class:`ComputationError`; the CLI maps them to exit codes 3
and 4 respectively.
"""


class UccError(ValueError):
    """Base class for all ucceval errors."""


class IngestionError(UccError):
    pass


class ComputationError(UccError):
    pass


class EmptyDataset(IngestionError):
    def __init__(self, msg="dataset has no records"):
        super().__init__(msg)


class NonFiniteValue(IngestionError):
    def __init__(self, index, field):
        self.index = index
        self.field = field
        super().__init__(f"record {index}: field {field!r} is not finite")


class NegativeBand(IngestionError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"record {index}: negative band")


class LengthMismatch(IngestionError):
    def __init__(self, lengths):
        self.lengths = tuple(lengths)
        super().__init__(f"input sequences have different lengths: {self.lengths}")


class BoundOrderViolation(IngestionError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"record {index}: bounds do not satisfy lower <= y_hat <= upper")


class ParseError(IngestionError):
    def __init__(self, line, detail=""):
        self.line = line
        msg = f"line {line}: cannot parse row"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class MissingColumn(IngestionError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"missing column {name!r}")


class ZeroVariance(ComputationError):
    def __init__(self, what="values"):
        super().__init__(f"standard deviation of {what} is zero")


class AsymmetricBands(ComputationError):
    def __init__(self, index=None):
        self.index = index
        where = "" if index is None else f" (first at record {index})"
        super().__init__("operation requires symmetric bands" + where)


class UnsupportedAxes(ComputationError):
    pass


class AllScalesInfinite(ComputationError):
    def __init__(self):
        super().__init__("every record has an infinite critical scale (zero band, nonzero error)")


class InfiniteScalesPresent(ComputationError):
    def __init__(self, n_infinite):
        self.n_infinite = n_infinite
        super().__init__(
            f"{n_infinite} record(s) have infinite critical scale; "
            "exclude them explicitly to compute an area"
        )


class InvalidRange(ComputationError):
    pass


class MismatchedBase(ComputationError):
    def __init__(self, detail="ground truth and predictions differ"):
        super().__init__(f"curves are not comparable: {detail}")


class ZeroReferenceArea(ComputationError):
    def __init__(self):
        super().__init__("reference AUUCC is zero; gain is undefined")


class TargetUnreachable(ComputationError):
    def __init__(self, target, floor):
        self.target = target
        self.floor = floor
        super().__init__(f"miss rate {target} is below the attainable floor {floor}")
