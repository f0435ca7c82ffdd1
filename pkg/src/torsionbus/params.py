"""Derived device parameters: torsional mechanics, couplings and rates.

Everything here is a pure function of raw device numbers.  The quantities
feed the dynamics modules after normalization by the reference coupling g0
(``to_simulation_units``), so that the Lindblad scenarios run with hbar = 1,
g0 = 1 and time measured in 1/g0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .constants import G_E, HBAR, K_B, MU_B_HZ_PER_MT

TWO_PI = 2.0 * math.pi

#: Fig.-4/5 reference values: g0 = 2*pi*200 kHz and the quoted decay rates.
PAPER_G0 = TWO_PI * 200e3
PAPER_N_TH = 104.0


@dataclass(frozen=True)
class CantileverParams:
    """Raw torsional-cantilever parameters.

    torsional_spring_constant: N*m/rad, moment_of_inertia: kg*m^2,
    temperature: K.  All strictly positive.
    """

    torsional_spring_constant: float
    moment_of_inertia: float
    temperature: float

    def __post_init__(self):
        for name in ("torsional_spring_constant", "moment_of_inertia", "temperature"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")


@dataclass(frozen=True)
class DerivedMechanics:
    """Quantities derived from the cantilever: frequency, zero-point scales,
    thermal occupation.  theta_zpf * angular_momentum_zpf = hbar/2."""

    omega_m: float                # rad/s
    theta_zpf: float              # rad (dimensionless amplitude)
    angular_momentum_zpf: float   # J*s
    n_th: float                   # mean thermal phonon number


@dataclass(frozen=True)
class CouplingParams:
    """Coupling constants and decay rates, all as angular frequencies (rad/s)
    or, after ``to_simulation_units``, as multiples of g0."""

    g0: float
    lambda_e: float
    Gamma1: float
    Gamma2: float
    gamma_m: float
    gamma_s: float

    def __post_init__(self):
        for name in ("lambda_e", "Gamma1", "Gamma2", "gamma_m", "gamma_s"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


def paper_cantilever() -> CantileverParams:
    """K = 3e-18 N*m/rad, I = 4.8e-33 kg*m^2, T = 20 mK."""
    return CantileverParams(3e-18, 4.8e-33, 0.020)


def paper_couplings() -> CouplingParams:
    """Fig.-4/5 rates: Gamma1 = Gamma2 = 0.05 g0, gamma_m = 2e-4 g0,
    gamma_s = 0.1 g0, with g0 = lambda_e = 2*pi*200 kHz."""
    return CouplingParams(
        g0=PAPER_G0,
        lambda_e=PAPER_G0,
        Gamma1=0.05 * PAPER_G0,
        Gamma2=0.05 * PAPER_G0,
        gamma_m=2e-4 * PAPER_G0,
        gamma_s=0.1 * PAPER_G0,
    )


def derive_mechanics(p: CantileverParams) -> DerivedMechanics:
    """Torsional frequency, zero-point fluctuations and thermal occupation.

    omega_m = sqrt(K/I), theta_zpf = (hbar^2/(K I))^(1/4) and
    n_th = 1/(exp(hbar omega_m / k_B T) - 1).  The zero-point angular
    momentum is fixed by theta_zpf * L_zpf = hbar/2.
    """
    K = p.torsional_spring_constant
    I = p.moment_of_inertia
    omega_m = math.sqrt(K / I)
    theta_zpf = (HBAR**2 / (K * I)) ** 0.25
    l_zpf = HBAR / (2.0 * theta_zpf)
    x = HBAR * omega_m / (K_B * p.temperature)
    n_th = 0.0 if x > 700.0 else 1.0 / math.expm1(x)
    return DerivedMechanics(omega_m, theta_zpf, l_zpf, n_th)


def spin_torsion_coupling(b_mg_mt: float, theta_zpf: float, mixing_angle: float) -> float:
    """Magnetic spin-torsion coupling lambda_e = g_e mu_B B_mg theta_zpf cos(alpha).

    ``b_mg_mt`` is the nanomagnet field at the NV center in mT.  The value is
    returned as an ordinary frequency in Hz, i.e. in the same convention as
    the 14 MHz/mT Bohr-magneton constant it is built from.  (The quoted
    device estimate lambda_e ~ 2*pi*200 kHz is larger than this direct
    product; the dynamics modules therefore take g0 as an independent input.)
    """
    if b_mg_mt < 0:
        raise ValueError("b_mg_mt must be non-negative")
    return G_E * MU_B_HZ_PER_MT * b_mg_mt * theta_zpf * math.cos(mixing_angle)


def to_simulation_units(c: CouplingParams) -> CouplingParams:
    """Normalize every rate by g0 (dimensionless units with g0 = 1)."""
    if c.g0 <= 0:
        raise ValueError("g0 must be strictly positive")
    return replace(
        c,
        g0=1.0,
        lambda_e=c.lambda_e / c.g0,
        Gamma1=c.Gamma1 / c.g0,
        Gamma2=c.Gamma2 / c.g0,
        gamma_m=c.gamma_m / c.g0,
        gamma_s=c.gamma_s / c.g0,
    )
