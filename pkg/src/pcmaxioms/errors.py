"""Exception types raised across the toolkit."""


class PcmError(ValueError):
    """Base class for invalid pairwise comparison input."""


class NonSquare(PcmError):
    pass


class NonPositiveEntry(PcmError):
    pass


class ReciprocityViolation(PcmError):
    def __init__(self, i, j, deviation):
        self.i = i
        self.j = j
        self.deviation = deviation
        super().__init__(
            f"entries ({i}, {j}) and ({j}, {i}) are not reciprocal: "
            f"|a_ij * a_ji - 1| = {deviation:.3g}"
        )


class LengthMismatch(PcmError):
    pass


class OrderTooSmall(PcmError):
    pass


class IndexOutOfRange(PcmError):
    pass


class SubsetTooSmall(PcmError):
    pass


class NoConvergence(RuntimeError):
    def __init__(self, max_iter, last_residual):
        self.max_iter = max_iter
        self.last_residual = last_residual
        super().__init__(
            f"power iteration did not converge in {max_iter} iterations "
            f"(last residual {last_residual:.3g})"
        )


class MissingRiEntry(KeyError):
    pass


class GeneratorRejected(ValueError):
    pass


class UnknownIndex(KeyError):
    pass


class UnknownSystem(KeyError):
    pass


class UnknownAxiom(KeyError):
    pass
