"""Confining potentials with analytic derivatives.

The catalogue is closed: every solver downstream needs exact gradients
and Laplacians, so only the families below are supported.

* ``radial_monomial``: Q(z) = s |z|^(2 alpha); with s = 1/2 this is the
  Freud potential |z|^(2 alpha) / 2.
* ``gaussian_2d``: Q(z) = |z|^2.
* ``elliptic_ginibre``: Q(z) = (|z|^2 - tau Re z^2) / (1 - tau^2).
* ``gaussian_log_1d``: V(x) = x^2 / 2 - a log|x| on the real line.

Wirtinger derivatives follow d = (d_x - i d_y) / 2 and the Laplacian is
Delta = d dbar = (d_x^2 + d_y^2) / 4.
"""

from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from .errors import FamilyMismatch, RangeError, SingularPoint

__all__ = [
    "PotentialSpec",
    "PotentialEval",
    "eval_2d",
    "eval_1d",
    "radial_parameters",
]

_FAMILIES = ("radial_monomial", "gaussian_2d", "elliptic_ginibre", "gaussian_log_1d")


@dataclass(frozen=True)
class PotentialSpec:
    """A member of one of the supported potential families.

    Prefer the named constructors, which validate parameter ranges.
    Parameters unused by a family are left at their defaults.
    """

    family: str
    alpha: float = 1.0
    strength: float = 0.5
    a: float = 0.0
    tau: float = 0.0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown potential family {self.family!r}")
        if self.family == "radial_monomial":
            if not self.alpha >= 1.0:
                raise RangeError(f"radial_monomial needs alpha >= 1, got {self.alpha}")
            if not self.strength > 0.0:
                raise RangeError("radial_monomial needs a positive strength")
        elif self.family == "elliptic_ginibre":
            if not 0.0 < self.tau < 1.0:
                raise RangeError(f"elliptic_ginibre needs 0 < tau < 1, got {self.tau}")
        elif self.family == "gaussian_log_1d":
            if not self.a > -1.0:
                raise RangeError(f"gaussian_log_1d needs a > -1, got {self.a}")

    @classmethod
    def radial_monomial(cls, alpha: float, strength: float = 0.5) -> "PotentialSpec":
        return cls("radial_monomial", alpha=float(alpha), strength=float(strength))

    @classmethod
    def gaussian_2d(cls) -> "PotentialSpec":
        return cls("gaussian_2d")

    @classmethod
    def elliptic_ginibre(cls, tau: float) -> "PotentialSpec":
        return cls("elliptic_ginibre", tau=float(tau))

    @classmethod
    def gaussian_log_1d(cls, a: float = 0.0) -> "PotentialSpec":
        return cls("gaussian_log_1d", a=float(a))

    @property
    def dimension(self) -> int:
        return 1 if self.family == "gaussian_log_1d" else 2

    @property
    def is_radial(self) -> bool:
        return self.family in ("radial_monomial", "gaussian_2d")

    def to_dict(self) -> dict:
        """Only the parameters relevant to the family."""
        keep = {
            "radial_monomial": ("alpha", "strength"),
            "gaussian_2d": (),
            "elliptic_ginibre": ("tau",),
            "gaussian_log_1d": ("a",),
        }[self.family]
        full = asdict(self)
        return {"family": self.family, **{k: full[k] for k in keep}}

    @classmethod
    def from_dict(cls, data: dict) -> "PotentialSpec":
        fields = {k: float(v) for k, v in data.items() if k != "family"}
        return cls(str(data["family"]), **fields)


class PotentialEval(NamedTuple):
    """Value, Wirtinger derivatives and Laplacian of Q at some points."""

    value: np.ndarray
    grad_z: np.ndarray
    grad_zbar: np.ndarray
    laplacian: np.ndarray


def radial_parameters(spec: PotentialSpec) -> tuple[float, float]:
    """Return ``(alpha, s)`` such that Q(z) = s |z|^(2 alpha)."""
    if spec.family == "radial_monomial":
        return spec.alpha, spec.strength
    if spec.family == "gaussian_2d":
        return 1.0, 1.0
    raise FamilyMismatch(f"{spec.family} is not a radial family")


def eval_2d(spec: PotentialSpec, z) -> PotentialEval:
    """Evaluate a planar potential and its derivatives.

    Args:
        spec: A 2D family.
        z: Complex scalar or array of points.

    Returns:
        PotentialEval with arrays shaped like ``z``.

    Raises:
        FamilyMismatch: If ``spec`` is a 1D family.
    """
    if spec.dimension != 2:
        raise FamilyMismatch(f"eval_2d called with 1D family {spec.family}")
    z = np.asarray(z, dtype=complex)
    zbar = np.conj(z)
    r2 = (z * zbar).real
    if spec.family == "elliptic_ginibre":
        tau = spec.tau
        scale = 1.0 / (1.0 - tau * tau)
        value = (r2 - tau * (z * z).real) * scale
        grad_z = (zbar - tau * z) * scale
        laplacian = np.full(z.shape, scale)
    else:
        alpha, s = radial_parameters(spec)
        # |z|^(2 alpha - 2), written so that alpha = 1 gives exactly 1 at 0
        rpow = r2 ** (alpha - 1.0)
        value = s * r2 * rpow
        grad_z = s * alpha * rpow * zbar
        laplacian = s * alpha * alpha * rpow
    return PotentialEval(value, grad_z, np.conj(grad_z), laplacian)


def eval_1d(spec: PotentialSpec, x) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate V_a(x) = x^2/2 - a log|x| and V_a'(x) = x - a/x.

    Raises:
        FamilyMismatch: If ``spec`` is not ``gaussian_log_1d``.
        SingularPoint: At ``x == 0`` when ``a != 0``.
    """
    if spec.family != "gaussian_log_1d":
        raise FamilyMismatch(f"eval_1d called with 2D family {spec.family}")
    x = np.asarray(x, dtype=float)
    a = spec.a
    if a == 0.0:
        return 0.5 * x * x, x.copy()
    if np.any(x == 0.0):
        raise SingularPoint("V_a is singular at x = 0 for a != 0")
    return 0.5 * x * x - a * np.log(np.abs(x)), x - a / x
