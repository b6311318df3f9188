"""Numerical semistability of pairs ``(v, w)``.

A pair is numerically semistable when ``N(v) ⊆ N(w)`` for every maximal
torus, equivalently ``w_λ(w) <= w_λ(v)`` for every 1-PSG ``λ``. Tori are
supplied as a finite family of frames, so a positive answer is relative to
that family while a destabilizer is absolute.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .forms import FormError, SparseForm
from .geometry import contains_polytope
from .torus import OnePSG, TorusFrame, one_psg_weight, shear_frames, weight_polytope

__all__ = [
    "Pair",
    "Status",
    "Certificate",
    "PairVerdict",
    "DEFAULT_SEED",
    "default_frames",
    "check_pair_numerical",
    "destabilizing_slope",
    "hilbert_mumford_check",
    "trivial_form",
    "replay_certificate",
]

DEFAULT_SEED = 20121002
DEFAULT_SHEARS = 5


class Status(str, enum.Enum):
    SEMISTABLE_FOR_TESTED_TORI = "SEMISTABLE_FOR_TESTED_TORI"
    DESTABILIZED = "DESTABILIZED"


@dataclass(frozen=True)
class Pair:
    v: SparseForm
    w: SparseForm

    def __post_init__(self):
        self.v.require_nonzero("v")
        self.w.require_nonzero("w")
        if self.v.blocks[0] != self.w.blocks[0]:
            raise FormError("v and w are acted on by groups of different size")

    @property
    def group_size(self) -> int:
        return self.v.blocks[0]


@dataclass(frozen=True)
class Certificate:
    """A 1-PSG in a given torus frame with ``w_λ(w) - w_λ(v) = margin > 0``."""

    frame: TorusFrame
    u: OnePSG
    margin: Fraction


@dataclass(frozen=True)
class PairVerdict:
    status: Status
    certificate: Certificate | None
    tested_frames: int

    @property
    def semistable(self) -> bool:
        return self.status is Status.SEMISTABLE_FOR_TESTED_TORI


def trivial_form(num_vars: int) -> SparseForm:
    """The vector ``1`` of the trivial one-dimensional module."""
    return SparseForm.constant(num_vars, 1)


def default_frames(n: int, seed: int = DEFAULT_SEED, count: int = DEFAULT_SHEARS) -> list[TorusFrame]:
    """Identity frame followed by ``count`` seeded integer shears."""
    return [TorusFrame.identity(n)] + shear_frames(n, count, seed)


def destabilizing_slope(p: Pair, frame: TorusFrame, u: OnePSG) -> Fraction:
    """``w_λ(w) - w_λ(v)``; positive means the energy diverges to -inf along λ."""
    return one_psg_weight(p.w, frame, u) - one_psg_weight(p.v, frame, u)


def check_pair_numerical(p: Pair, frames: Sequence[TorusFrame] | None = None) -> PairVerdict:
    if frames is None:
        frames = default_frames(p.group_size)
    frames = list(frames)
    if not frames:
        raise ValueError("at least one torus frame is required")
    for frame in frames:
        res = contains_polytope(weight_polytope(p.v, frame), weight_polytope(p.w, frame))
        if not res.contained:
            u = OnePSG.from_direction(res.certificate)
            margin = destabilizing_slope(p, frame, u)
            assert margin > 0, "separation certificate does not destabilize"
            return PairVerdict(Status.DESTABILIZED, Certificate(frame, u, margin), len(frames))
    return PairVerdict(Status.SEMISTABLE_FOR_TESTED_TORI, None, len(frames))


def hilbert_mumford_check(w: SparseForm, frames: Sequence[TorusFrame] | None = None) -> PairVerdict:
    """Classical semistability of ``w``: the pair ``(1, w)``."""
    return check_pair_numerical(Pair(trivial_form(w.blocks[0]), w), frames)


def replay_certificate(p: Pair, cert: Certificate) -> bool:
    """Recompute the margin of a stored certificate from scratch."""
    margin = destabilizing_slope(p, cert.frame, cert.u)
    return margin > 0 and margin == cert.margin
