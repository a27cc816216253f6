"""Exception types raised across the package."""


class KWitnessError(ValueError):
    pass


class NotHermitian(KWitnessError):
    pass


class ShapeMismatch(KWitnessError):
    pass


class BadRank(KWitnessError):
    pass


class BadDimensions(KWitnessError):
    pass


class BadAlpha(KWitnessError):
    pass


class NotNormalized(KWitnessError):
    pass


class BadRange(KWitnessError):
    pass


class DegenerateZ(KWitnessError):
    pass


class TooLarge(KWitnessError):
    pass
