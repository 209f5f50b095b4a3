"""Shared exception types."""


class NumericalError(RuntimeError):
    """A computation left the reliable regime (blow-up, failed factorization).

    Argument/precondition violations raise ValueError instead; this class is
    reserved for failures that appear only once the numbers are in motion.
    """
