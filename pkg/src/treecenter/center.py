"""Elementwise 1-center of an ensemble of same-labeled merge trees.

For each matrix entry the members span an interval; the center matrix takes
the midpoint of every interval, which minimizes the worst-case max-norm
distance to the members.  Turning that matrix back into a tree gives a
structural average whose distance to any member never exceeds half the
largest entry range.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AgreementError, InputError
from .matrices import (
    SymMatrix,
    induced_matrix,
    is_ultra,
    matrix_linf,
    merge_tree_of_matrix,
)
from .trees import Ensemble, LabeledMergeTree


@dataclass
class CenterResult:
    center: LabeledMergeTree
    center_matrix: SymMatrix
    member_distances: list[float]
    radius: float
    center_matrix_ultra: bool = True


@dataclass
class StarSummary:
    """Per-member distances scaled for display as a star plot."""

    radius: float
    links: list[tuple[int, float, float]] = field(default_factory=list)
    # each link: (member index, distance, distance / radius)


def one_center_matrix(matrices: list[SymMatrix]) -> SymMatrix:
    """Per-entry midpoint of the min and max over the input matrices."""
    if not matrices:
        raise InputError("need at least one matrix")
    first = matrices[0]
    for m in matrices[1:]:
        if m.labels != first.labels:
            raise InputError("matrices are indexed by different label lists")
        if m.entries.shape != first.entries.shape:
            raise InputError("matrices have mismatched shapes")
    stack = np.stack([m.entries for m in matrices])
    mid = (stack.min(axis=0) + stack.max(axis=0)) / 2.0
    return SymMatrix(list(first.labels), mid)


def one_center_tree(ensemble: Ensemble) -> CenterResult:
    """Center tree, per-member distances, and the enclosing radius.

    The ensemble must be in full agreement.  The reported radius is half the
    largest per-entry range, which every candidate tree must reach for at
    least one member, so no tree does better.
    """
    if ensemble.agreement != "full":
        raise AgreementError(
            "ensemble members carry different label domains; harmonize first"
        )
    induced = [induced_matrix(m) for m in ensemble.members]
    center_matrix = one_center_matrix(induced)
    center = merge_tree_of_matrix(center_matrix)

    # Distances are measured against the center tree's own matrix, which can
    # differ from the midpoint matrix when the latter is not ultra.
    realized = induced_matrix(center)
    distances = [matrix_linf(realized, m) for m in induced]

    stack = np.stack([m.entries for m in induced])
    radius = float((stack.max(axis=0) - stack.min(axis=0)).max()) / 2.0
    return CenterResult(
        center=center,
        center_matrix=center_matrix,
        member_distances=distances,
        radius=radius,
        center_matrix_ultra=is_ultra(center_matrix),
    )


def ensemble_summary(result: CenterResult) -> StarSummary:
    """Distances of each member to the center, raw and normalized by radius."""
    links = []
    for i, d in enumerate(result.member_distances):
        norm = d / result.radius if result.radius > 0 else 0.0
        links.append((i, d, norm))
    return StarSummary(radius=result.radius, links=links)
