"""Exception types raised across the package."""


class CanonXformError(Exception):
    """Base class for every error raised by canonxform."""


class NotUnimodular(CanonXformError, ValueError):
    pass


class DegenerateB(CanonXformError, ValueError):
    """0 < |b| < 1e-9: too close to zero for the integral branch."""


class BZero(CanonXformError, ValueError):
    """An operation that needs b != 0 got b == 0."""


class NegativeDUnderRoot(CanonXformError, ValueError):
    pass


class UnderResolved(CanonXformError, ValueError):
    """Quadrature grid too coarse for the oscillation or spike being integrated."""


class EmptyGrid(CanonXformError, ValueError):
    pass


class KindMismatch(CanonXformError, ValueError):
    pass


class DenominatorNearZero(CanonXformError, ArithmeticError):
    def __init__(self, s, n, value):
        self.s, self.n, self.value = s, n, value
        super().__init__(f"|C_A(delta_{n})({s})| = {abs(value):.3e} below 1e-6")


class ZeroScale(CanonXformError, ValueError):
    pass


class UsageError(CanonXformError, ValueError):
    pass
