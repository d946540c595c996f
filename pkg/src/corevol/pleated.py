"""Renormalized volume from pleating data (the non-Fuchsian case).

The convex core is a compact region whose boundary surface is bent along
finitely many closed leaves.  The truncated region decomposes into the core,
a slab over the totally geodesic part of the boundary, and one wedge per
bent leaf; the wedge is the set of points projecting onto the leaf, a sector
of angular width (pi - theta) around its axis.  Pleating data (core volume,
leaf lengths and bending angles) is input, not computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import adaptive_quad
from .renvol import (
    Convention,
    PROVENANCE_CLOSED,
    LevelParam,
    VolumeProfile,
    bending_sum,
    renormalized_volume_fuchsian,
)
from .surface import SurfaceInfo


@dataclass(frozen=True)
class PleatLeaf:
    """Closed pleating leaf: length and interior dihedral angle theta.

    theta = pi means no bending; theta = 0 is the doubled-surface limit used
    by the Fuchsian degeneration, where each end geodesic counts as a leaf
    bent completely flat.
    """

    length: float
    theta: float

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError(f"leaf length must be positive, got {self.length}")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"bending angle must lie in [0, pi], got {self.theta}")


@dataclass(frozen=True)
class PleatedCoreData:
    """Convex-core input data: volume, boundary area, bent leaves.

    boundary_area is the hyperbolic area -2 pi chi(S) of the boundary
    surface; for a closed genus-g boundary use `from_genus`.
    """

    core_volume: float
    leaves: tuple[PleatLeaf, ...]
    boundary_area: float

    def __post_init__(self):
        if self.core_volume < 0:
            raise ValueError(f"core volume must be nonnegative, got {self.core_volume}")
        if self.boundary_area < 0:
            raise ValueError(f"boundary area must be nonnegative, got {self.boundary_area}")

    @classmethod
    def from_genus(cls, core_volume: float, leaves, genus: int) -> "PleatedCoreData":
        if genus < 2:
            raise ValueError(f"closed boundary surface needs genus >= 2, got {genus}")
        return cls(core_volume, tuple(leaves), 4.0 * math.pi * (genus - 1))


def collar_slab_volume(boundary_area: float, eps: float) -> float:
    """Volume of the distance-lambda slab over the geodesic boundary part:
    Area * (lam/2 + sinh(2 lam)/4).  Its expansion has constant term zero,
    so the slab never contributes to the renormalized volume."""
    if boundary_area < 0:
        raise ValueError(f"boundary area must be nonnegative, got {boundary_area}")
    level = LevelParam.from_eps(eps)
    lam = level.lam
    return boundary_area * (lam / 2.0 + math.sinh(2.0 * lam) / 4.0)


def wedge_volume_closed(leaf: PleatLeaf, eps: float,
                        convention: Convention) -> float:
    """Truncated wedge volume around one bent leaf.

    PAPER reproduces the printed line (pi-theta) L/4 (eps + eps^-2)
    - (pi-theta) L/2, first power of eps and all; DERIVED is the sector
    integral (pi-theta) L sinh^2(lam)/2 validated by the 3d quadrature.
    """
    level = LevelParam.from_eps(eps)
    w = (math.pi - leaf.theta) * leaf.length
    if convention is Convention.PAPER:
        return w / 4.0 * (eps + eps ** -2) - w / 2.0
    return w * math.sinh(level.lam) ** 2 / 2.0


def wedge_volume_quadrature(leaf: PleatLeaf, eps: float,
                            tol: float = 1e-8) -> float:
    """3d oracle for the wedge volume in the upper half-space model.

    The leaf axis is the z-axis and the wedge is the normal-cone sector
    {x >= 0, y <= tan(pi/2 - theta) x} of width (pi - theta), truncated at
    distance lambda from the axis (sqrt(x^2+y^2+z^2)/z <= cosh lambda) with
    z in [1, e^L], a fundamental domain of the leaf holonomy.  The integrand
    dx dy dz / z^3 is integrated by nested adaptive quadrature; the polar
    reduction of each slice is used only to place cell boundaries.
    """
    if tol < 1e-8:
        raise ValueError(f"tolerance must be at least 1e-8, got {tol}")
    level = LevelParam.from_eps(eps)
    if leaf.theta == math.pi:
        return 0.0
    sinh_lam = math.sinh(level.lam)
    sin_t, cos_t = math.sin(leaf.theta), math.cos(leaf.theta)
    slope = cos_t / sin_t  # upper sector edge y = slope * x

    def integrand(_x, _y, z):
        return 1.0 / z ** 3

    def slice_value(z: float) -> float:
        radius = z * sinh_lam
        x_kink = radius * sin_t  # edge ray meets the bounding arc
        x_max = radius if leaf.theta <= math.pi / 2.0 else x_kink

        def column(x):
            arc = np.sqrt(np.clip(radius ** 2 - x ** 2, 0.0, None))
            y_lo = -arc
            y_hi = np.minimum(slope * x, arc)
            width = np.clip(y_hi - y_lo, 0.0, None)
            mid = 0.5 * (y_lo + y_hi)
            half = 0.5 * width
            # two-point Gauss in y (exact: the integrand does not depend on y)
            y1 = mid - half / math.sqrt(3.0)
            y2 = mid + half / math.sqrt(3.0)
            return width * 0.5 * (integrand(x, y1, z) + integrand(x, y2, z))

        breaks = (x_kink,) if 0.0 < x_kink < x_max else ()
        value, _ = adaptive_quad(column, 0.0, x_max, rel_tol=tol / 10.0,
                                 breakpoints=breaks)
        return value

    def slab(z_values):
        return np.array([slice_value(z) for z in z_values])

    value, _ = adaptive_quad(slab, 1.0, math.exp(leaf.length), rel_tol=tol / 3.0)
    return value


def pleated_profile(core: PleatedCoreData, eps_grid, convention: Convention,
                    group_id: str = "") -> VolumeProfile:
    """Truncated-volume profile: core plus slab plus all wedges."""
    samples = []
    for e in eps_grid:
        e = float(e)
        vol = core.core_volume + collar_slab_volume(core.boundary_area, e)
        for leaf in core.leaves:
            vol += wedge_volume_closed(leaf, e, convention)
        samples.append((e, vol))
    return VolumeProfile(tuple(samples), PROVENANCE_CLOSED[convention], group_id)


def renormalized_volume_pleated(core: PleatedCoreData,
                                convention: Convention) -> float:
    """Constant term of the pleated truncated-volume expansion.

    PAPER: Vol(core) - (1/2) sum (pi - theta_i) L_i.
    DERIVED: Vol(core) - (1/4) sum (pi - theta_i) L_i.
    """
    total = bending_sum((leaf.length, leaf.theta) for leaf in core.leaves)
    if convention is Convention.PAPER:
        return core.core_volume - total / 2.0
    return core.core_volume - total / 4.0


def fuchsian_reduction_check(surface: SurfaceInfo, convention: Convention):
    """Degenerate a Fuchsian surface to pleating data and compare routes.

    The core volume collapses to zero and every end geodesic becomes a leaf
    with theta = 0; the pleated formula must then agree with the Fuchsian
    one exactly (bitwise, since both sum the same terms in the same order).
    Returns (passed, report dict).
    """
    leaves = tuple(PleatLeaf(length, 0.0) for length in surface.end_lengths)
    core = PleatedCoreData(0.0, leaves, boundary_area=2.0 * surface.core_area)
    pleated = renormalized_volume_pleated(core, convention)
    fuchsian = renormalized_volume_fuchsian(surface, convention)
    report = {
        "convention": convention.value,
        "pleated": pleated,
        "fuchsian": fuchsian,
        "difference": pleated - fuchsian,
    }
    return pleated == fuchsian, report
