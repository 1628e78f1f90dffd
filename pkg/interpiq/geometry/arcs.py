"""
Closed-form harmonic measure of boundary arcs.

For z in the disk and the arc from e^{iθ1} to e^{iθ2} (counterclockwise, length L),
the normalized harmonic measure is (β - L/2)/π where β ∈ (L/2, π + L/2) is the
angle at z from the chord direction to e^{iθ1} to the direction to e^{iθ2}.
"""

import math

import numpy as np

TWO_PI = 2.0 * math.pi


def arc_measure(z, theta1, theta2) -> np.ndarray:
    """
    Harmonic measure ω(z, [θ1, θ2)) with dm = dθ/2π; broadcasts over all arguments.

    Arcs of length ≥ 2π have measure 1; empty arcs have measure 0.
    """
    z = np.asarray(z, dtype=complex)
    theta1 = np.asarray(theta1, dtype=float)
    theta2 = np.asarray(theta2, dtype=float)
    length = theta2 - theta1

    a = np.exp(1j * theta1)
    b = np.exp(1j * theta2)
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = np.angle((b - z) / (a - z))
    half = 0.5 * length
    beta = np.where(raw >= half - 0.5 * math.pi, raw, raw + TWO_PI)
    omega = np.clip((beta - half) / math.pi, 0.0, 1.0)

    omega = np.where(length >= TWO_PI, 1.0, omega)
    omega = np.where(length <= 0.0, 0.0, omega)
    return omega


def symmetric_arc_measure(z, half_width) -> np.ndarray:
    """ω(z, [-h, h)) for arcs centred at angle 0"""
    half_width = np.asarray(half_width, dtype=float)
    return arc_measure(z, -half_width, half_width)


def poisson_at_one(z) -> np.ndarray:
    """P_z(1) = (1 - |z|²)/|1 - z|²"""
    z = np.asarray(z, dtype=complex)
    r = np.abs(z)
    return (1.0 - r) * (1.0 + r) / np.abs(1.0 - z) ** 2
