"""
Optical channel gain between a transmitter and a receiver.

The channel is the product of Beer-Lambert extinction along the path and
geometric spreading of the beam over the receiver aperture. With a non-zero
correction exponent alpha, part of the scattered light is credited back to
the receiver.

Distances here are the perpendicular distance d = r * cos(phi); the slant
path seen by the extinction term is d / cos(phi) = r. Functions accept numpy
arrays for theta and the geometry fields so the link layer can evaluate whole
coverage grids at once.
"""

import math
from dataclasses import dataclass

import numpy as np

from src.constants.errors import DomainError
from src.constants.params import WaterChannelParams


@dataclass(frozen=True)
class LinkGeometry:
    """
    Relative placement of a receiver in a transmitter's beam.

    Attributes:
        distance (float): Euclidean transmitter to receiver distance r, m
        misalign_phi (float): angle between the pointing axis and the line to the receiver, rad
        perp_distance (float): r * cos(phi), m
    """
    distance: float
    misalign_phi: float
    perp_distance: float

    def __post_init__(self):
        if not self.distance > 0:
            raise DomainError(f"link distance must be > 0, got {self.distance}")
        if not 0 <= self.misalign_phi < math.pi / 2:
            raise DomainError(f"misalignment must be in [0, pi/2), got {self.misalign_phi}")

    @classmethod
    def from_distance(cls, distance: float, misalign_phi: float = 0.0) -> "LinkGeometry":
        return cls(distance, misalign_phi, distance * math.cos(misalign_phi))

    @classmethod
    def from_perpendicular(cls, perp_distance: float, misalign_phi: float = 0.0) -> "LinkGeometry":
        return cls(perp_distance / math.cos(misalign_phi), misalign_phi, perp_distance)

    @classmethod
    def from_positions(cls, tx_pos, rx_pos, pointing_psi: float) -> "LinkGeometry":
        """Geometry of rx_pos as seen from tx_pos with the beam axis at pointing_psi."""
        dx, dy = rx_pos[0] - tx_pos[0], rx_pos[1] - tx_pos[1]
        distance = math.hypot(dx, dy)
        offset = math.atan2(dy, dx) - pointing_psi
        phi = abs(math.atan2(math.sin(offset), math.cos(offset)))
        return cls.from_distance(distance, phi)


def beer_lambert_loss(params: WaterChannelParams, geom: LinkGeometry):
    """exp(-c * d / cos(phi)): extinction over the slant path."""
    return np.exp(-params.extinction_c * geom.perp_distance / np.cos(geom.misalign_phi))


def geometric_loss(aperture_A: float, theta, geom: LinkGeometry):
    """(A * cos(phi) / (theta * d))^2: share of the spread beam hitting the aperture."""
    return (aperture_A * np.cos(geom.misalign_phi) / (theta * geom.perp_distance)) ** 2


def channel_gain(params: WaterChannelParams, aperture_A: float, theta, geom: LinkGeometry):
    """
    Channel gain with the scattering correction.

        GL * exp(-(c * d / cos(phi)) * (A * cos(phi) / (theta * d))^alpha)

    Reduces to beer_lambert_loss * geometric_loss when alpha = 0.
    """
    cos_phi = np.cos(geom.misalign_phi)
    spread = aperture_A * cos_phi / (theta * geom.perp_distance)
    path = params.extinction_c * geom.perp_distance / cos_phi
    return spread ** 2 * np.exp(-path * spread ** params.alpha)


def gain_at_distance(params: WaterChannelParams, aperture_A: float, theta, distance):
    """
    channel_gain written in the Euclidean distance r.

    cos(phi) cancels between the slant path and the projected aperture, so
    the gain of a covered receiver depends on r and theta only. Broadcasts
    over numpy arrays of theta and distance.
    """
    spread = aperture_A / (np.asarray(theta, dtype=float) * np.asarray(distance, dtype=float))
    return spread ** 2 * np.exp(-params.extinction_c * distance * spread ** params.alpha)
