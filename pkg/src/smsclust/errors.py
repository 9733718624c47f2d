"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid input parameters (shapes, ranges, probabilities)."""


class NumericError(ArithmeticError):
    """A numerical routine failed (non-convergence, singular matrix)."""


class DegenerateBlockError(ParameterError):
    """A block has too few members to compute sample statistics."""


class EmbeddingDimensionError(ParameterError):
    """Requested embedding dimension reaches non-positive eigenvalues."""

    def __init__(self, requested: int, max_dim: int):
        self.requested = requested
        self.max_dim = max_dim
        super().__init__(
            f"embedding dimension exceeds positive spectrum: D={requested} requested, "
            f"largest admissible D is {max_dim}"
        )


class SelectionError(RuntimeError):
    """Every cell of a BIC grid was degenerate."""
