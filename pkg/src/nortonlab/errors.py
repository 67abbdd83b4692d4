"""Exception hierarchy shared by all modules."""


class NortonLabError(Exception):
    """Base class for all toolkit errors."""


class NotConnected(NortonLabError):
    pass


class NotDistanceRegular(NortonLabError):
    """Raised with a witness: two pairs at equal distance whose shell
    intersection counts differ.

    witness = (h, i, j, x, y, count_xy, u, v, count_uv): the pairs (x, y)
    and (u, v) are both at distance h but |G_i(.) & G_j(.)| differs.
    """

    def __init__(self, witness):
        self.witness = tuple(int(v) for v in witness)
        h, i, j, x, y, cnt_a, u, v, cnt_b = self.witness
        super().__init__(
            f"not distance-regular: |G_{i}(x) & G_{j}(y)| differs over pairs at "
            f"distance {h}: pair ({x},{y}) gives {cnt_a}, pair ({u},{v}) gives {cnt_b}"
        )


class DiameterTooSmall(NortonLabError):
    pass


class ValencyTooSmall(NortonLabError):
    pass


class TooLarge(NortonLabError):
    pass


class InvalidParams(NortonLabError):
    pass


class NotBuildable(NortonLabError):
    pass


class GraphFormatError(NortonLabError):
    """Bad graph JSON: duplicate edges, loops, out-of-range indices."""


class EigenSolveFailure(NortonLabError):
    pass


class ToleranceViolation(NortonLabError):
    pass


class InvalidTriple(NortonLabError):
    pass


class InvalidPair(NortonLabError):
    pass


class NotInEigenspace(NortonLabError):
    pass


class GammaStarZero(NortonLabError):
    pass


class NotDependent(NortonLabError):
    pass


class DegenerateDualSequence(NortonLabError):
    pass


class NotApplicable(NortonLabError):
    """Prediction withheld: its hypothesis (e.g. reinforced) fails."""


class NegativeGap(NortonLabError):
    pass


class PhiIndexError(NortonLabError, IndexError):
    pass
