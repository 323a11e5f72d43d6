"""Tunable limits shared by the deciders."""

from dataclasses import dataclass


class CapExceeded(RuntimeError):
    """A configured size limit was hit; the answer was not computed."""


@dataclass
class Limits:
    # largest k at which a k-delay decision is attempted
    decision_k_cap: int = 32
    # monoid generation stops (with an error) past this many elements
    monoid_cap: int = 10_000
    # subset constructions log a warning past this many states
    determinize_warn: int = 5_000
    # reachable game vertices before giving up
    game_vertex_cap: int = 500_000


LIMITS = Limits()
