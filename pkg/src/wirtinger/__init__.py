"""Discrete Wirtinger inequalities, cone isoperimetry and polytope quermassintegrals."""
from .angles import AngleVector, parse_angles
from .circle import (
    build_closed,
    build_dirichlet,
    check_wirtinger,
    equal_angle_spectrum,
    find_violation,
    predicted_signature,
    spectral_gap,
    trig_kernel,
)
from .cone import ConeWedges, build_polygon, edge_lengths, improve_polygon, isoperimetric_deficit
from .errors import DomainError, InputError, PreconditionError
from .polytope import build_fan, quermass_matrix, support_polytope, verify_hyperplane_form
from .spectral import Signature, eigh, geneigh, kernel_basis, signature

__version__ = "0.1.0"
