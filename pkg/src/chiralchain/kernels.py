"""Resonant dipole-dipole coupling kernels for 1D, 2D, and 3D reservoirs.

All kernels are reported through a single convention: the complex
pair-coupling J splits as

    J = (gamma_uv + 2i * Omega_uv) / 2,

so ``decay_part`` is half the collective decay rate gamma_uv and
``shift_part`` is the coherent exchange rate Omega_uv.  Rates are given
in natural units where the intrinsic single-atom rate (Gamma, Gamma_1D,
or Gamma_2D as appropriate) equals 1.

The 1D chiral reservoir is characterised instead by the pair (F, G) of
symmetric and antisymmetric combinations of the directional rates; for
equal left/right rates F and G are real and reduce to the decay and
shift parts of the reciprocal 1D kernel.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError
from .specfun import bessel_j, bessel_y

__all__ = [
    "KernelValue",
    "DipoleGeometry",
    "chiral_fg",
    "kernel_1d_reciprocal",
    "kernel_2d",
    "kernel_3d",
]


@dataclass(frozen=True)
class KernelValue:
    """One kernel evaluation: J = decay_part + i * shift_part.

    decay_part is gamma_uv / 2 and shift_part is Omega_uv, both in units
    of the intrinsic rate.  shift_divergent marks separations where the
    coherent shift has no finite value (contact limit of the 2D and 3D
    kernels); decay_part then still carries the finite decay limit and
    shift_part is NaN.
    """

    decay_part: float
    shift_part: float
    shift_divergent: bool = False

    @property
    def collective_decay(self) -> float:
        """The full pair decay rate gamma_uv (= 2 * decay_part)."""
        return 2.0 * self.decay_part

    @property
    def as_complex(self) -> complex:
        return complex(self.decay_part, self.shift_part)


@dataclass(frozen=True)
class DipoleGeometry:
    """Separation phase and dipole alignment for a planar or 3D pair.

    xi is the dimensionless separation k*r >= 0; alignment is the cosine
    of the angle between the (linear) dipole orientation and the
    interatomic axis, in [-1, 1].
    """

    xi: float
    alignment: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.xi) or self.xi < 0.0:
            raise DomainError(f"xi must be finite and >= 0, got {self.xi!r}")
        if not math.isfinite(self.alignment) or abs(self.alignment) > 1.0:
            raise DomainError(
                f"alignment must lie in [-1, 1], got {self.alignment!r}")


def _check_rates(gamma_left: float, gamma_right: float) -> None:
    for name, g in (("gamma_left", gamma_left), ("gamma_right", gamma_right)):
        if not math.isfinite(g) or g < 0.0:
            raise DomainError(f"{name} must be finite and >= 0, got {g!r}")
    if gamma_left == 0.0 and gamma_right == 0.0:
        raise DomainError("gamma_left and gamma_right cannot both vanish")


def chiral_fg(xi: float, gamma_left: float, gamma_right: float
              ) -> tuple[complex, complex]:
    """Symmetric/antisymmetric coupling pair (F, G) of a 1D chiral line.

    F = (gamma_R e^{i xi} + gamma_L e^{-i xi}) / 2
    G = -i (gamma_R e^{i xi} - gamma_L e^{-i xi}) / 2

    For gamma_left == gamma_right both are real: F = gamma cos(xi) and
    G = gamma sin(xi), i.e. the decay and shift parts of the reciprocal
    kernel.
    """
    if not math.isfinite(xi) or xi < 0.0:
        raise DomainError(f"xi must be finite and >= 0, got {xi!r}")
    _check_rates(gamma_left, gamma_right)
    phase = cmath.exp(1j * xi)
    f = 0.5 * (gamma_right * phase + gamma_left / phase)
    g = -0.5j * (gamma_right * phase - gamma_left / phase)
    return f, g


def kernel_1d_reciprocal(xi: float) -> KernelValue:
    """Reciprocal 1D kernel J = (1/2) e^{i xi} in units Gamma_1D = 1.

    decay_part^2 + shift_part^2 = 1/4 for every separation: a 1D line
    only dephases the pair coupling, it never weakens it.
    """
    if not math.isfinite(xi) or xi < 0.0:
        raise DomainError(f"xi must be finite and >= 0, got {xi!r}")
    return KernelValue(0.5 * math.cos(xi), 0.5 * math.sin(xi))


def kernel_3d(geometry: DipoleGeometry) -> KernelValue:
    """Free-space kernel for a linearly polarised pair, Gamma = 1.

    gamma_uv = (3/2) { (1 - a^2) sin(xi)/xi
                       + (1 - 3 a^2) [cos(xi)/xi^2 - sin(xi)/xi^3] }
    Omega_uv = (3/4) { -(1 - a^2) cos(xi)/xi
                       + (1 - 3 a^2) [sin(xi)/xi^2 + cos(xi)/xi^3] }

    with a the dipole/axis alignment cosine.  xi -> 0 gives the Dicke
    limit gamma_uv -> 1 for any alignment, while the shift diverges as
    1/xi^3 and is flagged instead of returned.
    """
    xi = geometry.xi
    a2 = geometry.alignment * geometry.alignment
    perp = 1.0 - a2
    quad_combo = 1.0 - 3.0 * a2
    if xi == 0.0:
        return KernelValue(0.5, math.nan, shift_divergent=True)
    if xi < 1e-2:
        # series for the bracketed combinations; the direct forms lose
        # up to 8 digits to cancellation below xi ~ 1e-4
        sinc = 1.0 - xi * xi / 6.0 + xi**4 / 120.0
        cos2_sin3 = -1.0 / 3.0 + xi * xi / 30.0 - xi**4 / 840.0
    else:
        sinc = math.sin(xi) / xi
        cos2_sin3 = math.cos(xi) / xi**2 - math.sin(xi) / xi**3
    sin2_cos3 = math.sin(xi) / xi**2 + math.cos(xi) / xi**3
    gamma_uv = 1.5 * (perp * sinc + quad_combo * cos2_sin3)
    omega_uv = 0.75 * (-perp * math.cos(xi) / xi + quad_combo * sin2_cos3)
    return KernelValue(0.5 * gamma_uv, omega_uv)


def kernel_2d(geometry: DipoleGeometry) -> KernelValue:
    """In-plane kernel for a planar reservoir, Gamma_2D = 1.

    J = (f + i g) / 2 with

    f(xi) = 2 [ J0(xi) - J1(xi)/xi + a^2 J2(xi) ]
    g(xi) = 2 Y0(xi) - 2 Y1(xi)/xi + 2 a^2 Y2(xi)
            - (4 / (pi xi^2)) (1 - 2 a^2)

    f(0+) = 1 recovers the Dicke limit; g diverges logarithmically at
    contact and is flagged there.  g is the Kramers-Kronig partner of f,
    which the test suite verifies by principal-value reconstruction.
    """
    xi = geometry.xi
    a2 = geometry.alignment * geometry.alignment
    if xi == 0.0:
        return KernelValue(0.5, math.nan, shift_divergent=True)
    j1_over_xi = _j1_over_x(xi)
    f = 2.0 * (bessel_j(0, xi) - j1_over_xi + a2 * bessel_j(2, xi))
    g = (2.0 * bessel_y(0, xi) - 2.0 * bessel_y(1, xi) / xi
         + 2.0 * a2 * bessel_y(2, xi)
         - 4.0 / (math.pi * xi * xi) * (1.0 - 2.0 * a2))
    return KernelValue(0.5 * f, 0.5 * g)


def _j1_over_x(x: float) -> float:
    # J1(x)/x by its own series at small argument; J1 ~ x/2 there, so the
    # plain quotient would just amplify rounding in J1.
    if x >= 0.1:
        return bessel_j(1, x) / x
    q = 0.25 * x * x
    term = 0.5
    total = term
    for m in range(1, 20):
        term *= -q / (m * (m + 1))
        total += term
        if abs(term) < 1e-18:
            break
    return total
