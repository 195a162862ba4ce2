"""Shared test varieties."""

from secantid.latticegeom import LatticePolytope
from secantid.varieties import make_toric


def cone_over_rnc4():
    """Cone with vertex (0,...,0,1) over the quartic curve, in P^5."""
    pts = tuple((i, 0) for i in range(5)) + ((0, 1),)
    return make_toric(LatticePolytope(pts), "cone-rnc4")


def cone_over_conic():
    return make_toric(LatticePolytope(((0, 0), (1, 0), (2, 0), (0, 1))), "cone-conic")
