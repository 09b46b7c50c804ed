import math
from dataclasses import dataclass
from typing import Literal, Self

import torch

type GeneratorTag = Literal["X", "U", "V"]

# Basis of sl(2, R): X generates the geodesic flow (with the half exponent convention
# a_t = exp(tX/2)), U the stable and V the unstable horocycle flow.
GENERATORS: dict[GeneratorTag, tuple[float, float, float, float]] = {
    "X": (1.0, 0.0, 0.0, -1.0),
    "U": (0.0, 1.0, 0.0, 0.0),
    "V": (0.0, 0.0, 1.0, 0.0),
}


def generator_matrix(tag: GeneratorTag) -> torch.Tensor:
    entries = GENERATORS.get(tag)
    if entries is None:
        options = " | ".join([repr(g) for g in GENERATORS])
        raise ValueError(f"No generator for `tag={tag!r}`, must be one of: {options}")
    return torch.tensor(entries, dtype=torch.float64).reshape(2, 2)


def commutator(lhs: torch.Tensor, rhs: torch.Tensor) -> torch.Tensor:
    return lhs @ rhs - rhs @ lhs


@dataclass(frozen=True)
class GroupElement:
    """
    A point of SL(2, R), stored as the entries of [[a, b], [c, d]].

    As a frame over the upper half-plane its base point is g·i, the flows act on the
    right and SL(2, Z) acts on the left.
    """

    a: float
    b: float
    c: float
    d: float

    @classmethod
    def identity(cls) -> Self:
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def from_tensor(cls, matrix: torch.Tensor) -> Self:
        assert matrix.size() == (2, 2), (
            f"GroupElement requires a 2x2 matrix, got size {tuple(matrix.size())}"
        )
        (a, b), (c, d) = matrix.tolist()
        return cls(float(a), float(b), float(c), float(d))

    @classmethod
    def exp(cls, tag: GeneratorTag, t: float) -> Self:
        """
        exp(tY) for a generator Y, in closed form.
        """
        match tag:
            case "X":
                return cls(math.exp(t), 0.0, 0.0, math.exp(-t))
            case "U":
                return cls(1.0, t, 0.0, 1.0)
            case "V":
                return cls(1.0, 0.0, t, 1.0)

    def to_tensor(self) -> torch.Tensor:
        return torch.tensor(
            [[self.a, self.b], [self.c, self.d]], dtype=torch.float64
        )

    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> Self:
        det = self.det()
        return self.__class__(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def normalise(self) -> Self:
        """
        Rescale the rows by 1/sqrt(det) so that the determinant is 1 again.
        """
        scale = 1.0 / math.sqrt(self.det())
        return self.__class__(
            self.a * scale, self.b * scale, self.c * scale, self.d * scale
        )

    def mobius(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.c * z + self.d)

    def base_point(self) -> complex:
        """
        g·i = (ac + bd + i) / (c² + d²), using det = 1 for the imaginary part.

        The imaginary part is not taken from the generic Möbius division, which loses
        all relative precision when the orbit runs close to the real axis.
        """
        norm = self.c * self.c + self.d * self.d
        return complex((self.a * self.c + self.b * self.d) / norm, 1.0 / norm)

    def automorphy_factor(self, z: complex = 1j) -> complex:
        return self.c * z + self.d

    def max_abs(self) -> float:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def distance(self, other: "GroupElement") -> float:
        """
        Largest difference of the entries, relative to the largest entry of the two
        (at least 1).
        """
        scale = max(1.0, self.max_abs(), other.max_abs())
        return (
            max(abs(lhs - rhs) for lhs, rhs in zip(self.entries(), other.entries()))
            / scale
        )

    def is_close(self, other: "GroupElement", tol: float = 1e-12) -> bool:
        return self.distance(other) <= tol

    def entries(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return self.__class__(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
