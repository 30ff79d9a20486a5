"""Hopf-bundle spinor coordinates on S^3 and their helicity structure.

Spinors are stored as complex pairs rather than angles, so no coordinate
singularity is introduced; angles are derived on demand.  Local sections
over the momentum sphere (alpha=0 north, alpha=-phi south) realize the
mu = +1/2 gauge structure, and the conjugate spinors give the dual
mu = -1/2 bundle.

At fixed polar angle the two phase angles (alpha, xi) parametrize a flat
torus in S^3; advancing both equally traces a helical curve along which
the connection one-form reduces to an exact differential.  Those helical
flows are a coordinate curiosity, not part of the computational surface,
and are only noted here.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi

import numpy as np

from .basis import AngularGrid
from .gauge import Patch, PatchSide

__all__ = [
    "SectionSpinor",
    "SpinVector",
    "spinor_from_angles",
    "hopf_project",
    "connection_components",
    "section",
    "helicity_residual",
    "spin_field",
    "chern_number",
]

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class SectionSpinor:
    """Point on S^3 as a two-component complex spinor (z1, z2)."""

    z1: complex
    z2: complex

    def __post_init__(self):
        norm = abs(self.z1) ** 2 + abs(self.z2) ** 2
        if abs(norm - 1.0) > 1e-13:
            raise ValueError(f"spinor must be normalized, |z|^2 = {norm!r}")

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.z1, self.z2], dtype=complex)

    @property
    def theta(self) -> float:
        return 2 * np.arctan2(abs(self.z2), abs(self.z1))

    @property
    def alpha(self) -> float:
        return float(np.angle(self.z1))

    @property
    def xi(self) -> float:
        return float(np.angle(self.z2))

    def conjugate_dual(self) -> "SectionSpinor":
        """Left-handed partner (-z2*, z1*) spanning the dual bundle."""
        return SectionSpinor(z1=-np.conj(self.z2), z2=np.conj(self.z1))


@dataclass(frozen=True)
class SpinVector:
    """Spin expectation 3-vector; has modulus 1/2 for any unit spinor."""

    s: np.ndarray

    def __post_init__(self):
        if abs(np.linalg.norm(self.s) - 0.5) > 1e-12:
            raise ValueError("spin vector must have modulus 1/2")


def spinor_from_angles(theta: float, phi: float, alpha: float) -> SectionSpinor:
    """S^3 point (cos(theta/2) e^{i alpha}, sin(theta/2) e^{i(phi+alpha)})."""
    if not (0 <= theta <= pi):
        raise ValueError(f"theta must lie in [0, pi], got {theta}")
    return SectionSpinor(
        z1=complex(np.cos(theta / 2) * np.exp(1j * alpha)),
        z2=complex(np.sin(theta / 2) * np.exp(1j * (phi + alpha))),
    )


def hopf_project(z: SectionSpinor) -> np.ndarray:
    """Hopf map S^3 -> S^2: the unit vector z^dagger sigma z."""
    v = z.vec
    return np.array([float(np.real(np.conj(v) @ (s @ v))) for s in _SIGMA])


def connection_components(theta: float) -> tuple[float, float, float]:
    """Orthonormal-frame components of the global S^3 connection one-form.

    In coordinates (theta, alpha, xi) the form is regular everywhere with
    components (0, cos(theta/2), sin(theta/2)).
    """
    if not (0 <= theta <= pi):
        raise ValueError(f"theta must lie in [0, pi], got {theta}")
    return (0.0, float(np.cos(theta / 2)), float(np.sin(theta / 2)))


def section(patch: Patch, theta: float, phi: float) -> SectionSpinor:
    """Local section of the bundle over the given patch.

    alpha = 0 on the northern patch, alpha = -phi on the southern one;
    each choice is smooth away from the opposite pole, and evaluation
    outside the patch's validity region is rejected.
    """
    patch.require(theta, "section point")
    alpha = 0.0 if patch.side is PatchSide.N else -phi
    return spinor_from_angles(theta, phi, alpha)


def _sigma_dot(unit: np.ndarray) -> np.ndarray:
    return unit[0] * _SIGMA[0] + unit[1] * _SIGMA[1] + unit[2] * _SIGMA[2]


def helicity_residual(patch: Patch, theta: float, phi: float, mu_sign: int) -> float:
    """Norm of (sigma . p_hat -/+ 1) acting on the (dual) section spinor.

    mu_sign = +1 tests the right-handed section; -1 tests the conjugate
    spinor of the dual bundle.  Both residuals vanish identically.
    """
    if mu_sign not in (+1, -1):
        raise ValueError("mu_sign must be +1 or -1")
    z = section(patch, theta, phi)
    unit = np.array([np.sin(theta) * np.cos(phi),
                     np.sin(theta) * np.sin(phi),
                     np.cos(theta)])
    op = _sigma_dot(unit)
    if mu_sign == +1:
        res = op @ z.vec - z.vec
    else:
        zd = z.conjugate_dual().vec
        res = op @ zd + zd
    return float(np.linalg.norm(res))


def spin_field(z: SectionSpinor) -> SpinVector:
    """Local spin vector s = z^dagger (sigma/2) z."""
    return SpinVector(s=hopf_project(z) / 2)


def chern_number(mu_sign: int, grid: AngularGrid) -> float:
    """First Chern number from the flux of the local spin field.

    c1 = (1/2pi) * integral over S^2 of (p_hat . s) dOmega, evaluated by
    quadrature from the section spinors; +1 for right-handed sections and
    -1 for the dual bundle.
    """
    if mu_sign not in (+1, -1):
        raise ValueError("mu_sign must be +1 or -1")
    if grid.n_theta < 64 or grid.n_phi < 64:
        raise ValueError("chern_number needs a grid of at least 64 x 64")
    total = 0.0
    for ct, w in zip(grid.cos_nodes, grid.cos_weights):
        theta = float(np.arccos(ct))
        patch = Patch(PatchSide.N) if theta <= pi / 2 else Patch(PatchSide.S)
        for phi in grid.phi_nodes:
            z = section(patch, theta, float(phi))
            if mu_sign == -1:
                z = z.conjugate_dual()
            unit = np.array([np.sin(theta) * np.cos(phi),
                             np.sin(theta) * np.sin(phi),
                             np.cos(theta)])
            total += w * grid.phi_weight * float(unit @ spin_field(z).s)
    return total / (2 * pi)
