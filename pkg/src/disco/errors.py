"""Exception types shared across the library.

Every error that a caller is expected to catch carries enough structured
data to reproduce the failing check.
"""


class DiscoError(Exception):
    """Base class for all library errors."""


# ---------------------------------------------------------------- metric core

class AsymmetricMatrix(DiscoError):
    def __init__(self, i, j, a, b):
        self.i, self.j, self.a, self.b = i, j, a, b
        super().__init__(f"dist[{i}][{j}]={a!r} != dist[{j}][{i}]={b!r}")


class NegativeEntry(DiscoError):
    def __init__(self, i, j, value):
        self.i, self.j, self.value = i, j, value
        super().__init__(f"dist[{i}][{j}]={value!r} is negative")


class DuplicatePoint(DiscoError):
    def __init__(self, i, j):
        self.i, self.j = i, j
        super().__init__(f"points {i} and {j} are at distance 0")


class TriangleViolation(DiscoError):
    def __init__(self, i, j, k, amount):
        self.i, self.j, self.k, self.amount = i, j, k, amount
        super().__init__(
            f"d({i},{k}) exceeds d({i},{j}) + d({j},{k}) by {amount:g}")


class DisconnectedGraph(DiscoError):
    pass


class NonpositiveWeight(DiscoError):
    def __init__(self, edge):
        self.edge = edge
        super().__init__(f"edge {edge} has non-positive weight")


class TooFewPoints(DiscoError):
    pass


class BadDimensions(DiscoError):
    pass


class ExactSearchTooLarge(DiscoError):
    def __init__(self, n, threshold):
        self.n, self.threshold = n, threshold
        super().__init__(
            f"exact cover search disabled for n={n} > threshold={threshold}")


class NoMidpointWithinTolerance(DiscoError):
    def __init__(self, best_deviation):
        self.best_deviation = best_deviation
        super().__init__(
            f"best midpoint deviates by {best_deviation:g} from half-distance")


# --------------------------------------------------------------- chain engine

class NotAnEpsilonChain(DiscoError):
    def __init__(self, index, gap=None, scale=None):
        self.index, self.gap, self.scale = index, gap, scale
        msg = f"gap at position {index} is not below the scale"
        if gap is not None and scale is not None:
            msg = f"gap d={gap!r} at position {index} not < eps={scale!r}"
        super().__init__(msg)


class SizeMismatch(DiscoError):
    def __init__(self, a, b):
        self.a, self.b = a, b
        super().__init__(f"chains have sizes {a} and {b}")


class PreconditionViolated(DiscoError):
    def __init__(self, delta, slack_half):
        self.delta, self.slack_half = delta, slack_half
        super().__init__(
            f"pointwise deviation {delta!r} is not below half-slack {slack_half!r}")


class LengthBudgetExceeded(DiscoError):
    def __init__(self, length, budget):
        self.length, self.budget = length, budget
        super().__init__(f"chain length {length!r} exceeds budget {budget!r}")


class NotALoop(DiscoError):
    pass


class EndpointMismatch(DiscoError):
    pass


# -------------------------------------------------------------------- chassis

class DisconnectedAtScale(DiscoError):
    def __init__(self, eps):
        self.eps = eps
        super().__init__(f"1-skeleton is disconnected at scale {eps!r}")


class SnapTooCoarse(DiscoError):
    def __init__(self, delta, slack_half):
        self.delta, self.slack_half = delta, slack_half
        super().__init__(
            f"snap deviation {delta!r} not below half-slack {slack_half!r}; refine first")


class MatrixTooLarge(DiscoError):
    def __init__(self, size, budget):
        self.size, self.budget = size, budget
        super().__init__(f"matrix work {size} exceeds budget {budget}")


class BudgetExhausted(DiscoError):
    def __init__(self, what, spent):
        self.what, self.spent = what, spent
        super().__init__(f"budget exhausted: {what} after {spent}")


# -------------------------------------------------------------------- decider

class CoverTooSmall(DiscoError):
    def __init__(self, radius, needed):
        self.radius, self.needed = radius, needed
        super().__init__(
            f"cover radius {radius!r} insufficient for requested {needed!r}")


# ------------------------------------------------------------------- spectrum

class EmptySpectrum(DiscoError):
    pass


class ResolutionTooCoarse(DiscoError):
    def __init__(self, eps_min, floor):
        self.eps_min, self.floor = eps_min, floor
        super().__init__(
            f"eps_min={eps_min!r} below 3h={floor!r}; results below sample "
            "resolution are meaningless")


class NoGeodesicRealization(DiscoError):
    pass
