"""Physical parameter containers with validation.

Two immutable dataclasses describe everything the solvers need: the
boundary-driven chain (`ChainParameters`) and the few-level ratchet used
as an analytically tractable companion model (`ToyParameters`).  Both
validate on construction so that invalid physics is rejected at the edge
of the package rather than deep inside a solver.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class ChainParameters:
    """Parameters of the boundary-driven, dephased fermion chain.

    Attributes
    ----------
    n_sites : int
        Chain length ``N >= 2``.
    hopping : float
        Hopping amplitude ``tau``; the model is defined relative to
        ``tau = 1`` as the unit of energy.  Must be nonzero.
    interaction : float
        Nearest-neighbour interaction strength ``Delta`` multiplying
        ``(n_j - 1/2)(n_{j+1} - 1/2)``.
    coupling : float
        Reservoir coupling rate ``Gamma > 0`` of the boundary drives.
    bias : float
        Driving bias ``f`` with ``|f| <= 1``; ``f = 0`` is undriven
        and ``|f| = 1`` is maximal driving.
    dephasing : float
        Uniform bulk dephasing rate ``gamma >= 0``.
    staggered : float
        Amplitude ``B`` of an optional staggered potential
        ``B * sum_j (-1)**j n_j``.
    """

    n_sites: int
    hopping: float = 1.0
    interaction: float = 0.0
    coupling: float = 1.0
    bias: float = 0.0
    dephasing: float = 0.0
    staggered: float = 0.0

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise ValueError(f"n_sites must be an integer >= 2, got {self.n_sites}")
        if self.hopping == 0:
            raise ValueError("hopping must be nonzero (tau = 1 sets the energy scale)")
        if self.coupling <= 0:
            raise ValueError(f"coupling must be positive, got {self.coupling}")
        if self.dephasing < 0:
            raise ValueError(f"dephasing must be nonnegative, got {self.dephasing}")
        if abs(self.bias) > 1:
            raise ValueError(f"bias must satisfy |f| <= 1, got {self.bias}")

    def with_(self, **changes) -> "ChainParameters":
        """Copy with some fields replaced, revalidated."""
        return replace(self, **changes)


@dataclass(frozen=True)
class ToyParameters:
    """Parameters of the (K+1)-state companion model.

    The model has ``K`` configuration states coupled in a line plus one
    auxiliary reservoir state, a single interaction-shifted level, drives
    between the auxiliary state and the chain ends, and dephasing on the
    shifted level.

    Attributes
    ----------
    n_levels : int
        Number of configuration states ``K >= 2``.
    interaction : float
        Energy shift ``Delta`` of the last configuration state.
    coupling : float
        Drive rate ``Gamma > 0``.
    bias : float
        Drive bias ``f`` in ``[0, 1]``.
    dephasing : float
        Dephasing rate ``gamma >= 0`` acting on the shifted level.
    """

    n_levels: int
    interaction: float = 0.0
    coupling: float = 1.0
    bias: float = 0.0
    dephasing: float = 0.0

    def __post_init__(self):
        if int(self.n_levels) != self.n_levels or self.n_levels < 2:
            raise ValueError(f"n_levels must be an integer >= 2, got {self.n_levels}")
        if self.coupling <= 0:
            raise ValueError(f"coupling must be positive, got {self.coupling}")
        if self.dephasing < 0:
            raise ValueError(f"dephasing must be nonnegative, got {self.dephasing}")
        if not 0 <= self.bias <= 1:
            raise ValueError(f"bias must lie in [0, 1], got {self.bias}")

    def with_(self, **changes) -> "ToyParameters":
        """Copy with some fields replaced, revalidated."""
        return replace(self, **changes)
