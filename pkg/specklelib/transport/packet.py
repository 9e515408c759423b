#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        packet.py
# Purpose:     Photon packets: launch, free flight, scattering and correlation weights
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Analogue Monte Carlo for the radiative transfer equations of the two correlated media.

A packet carries a position, a direction and one complex correlation weight per shift field. W11 (and W22, which has
the same law) is estimated by the packets themselves, W12 by the packets weighted with the accumulated phase factor
exp(i |k| (p - k).phi(x)) picked up at every scattering event. In the Large regime the phase is replaced by its
Riemann-Lebesgue limit: the weight is zeroed by any scattering inside the support X_s.

The stepping is vectorized over a PacketBatch; the single-packet functions wrap a batch of size one.
"""
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Optional, Sequence, Tuple
import logging
import math

import numpy as np

from ..medium.kernel import TransportCoefficients
from ..medium.sampling import CosineSampler
from ..scene.scene import Scene
from ..scene.shift import ShiftField, ShiftRegime
from ..utils.numerics import InvalidInputError, NumericalFailureError

_logger = logging.getLogger("specklelib.Packet")

__all__ = ['Event', 'PhotonPacket', 'PacketBatch', 'launch_batch', 'launch_packet', 'step_batch', 'step_packet',
           'update_correlation_weight', 'apply_weight_updates', 'sample_free_path', 'scatter_directions', 'DISCARDED']

DISCARDED = -1
GEOMETRY_TOLERANCE = 1e-9


class Event(IntEnum):
    SCATTERED = 0
    EXITED_MEASURED = 1
    EXITED_OTHER = 2
    ABSORBED = 3


@dataclass
class PhotonPacket:
    """A single packet, with the correlation weight of the scene's shift field"""
    position: np.ndarray
    direction: np.ndarray
    corr_weight: complex = 1.0 + 0.0j
    alive: bool = True
    path_length: float = 0.0


@dataclass
class PacketBatch:
    """
    Structure-of-arrays storage of n packets.

    :param positions: (n, d) positions
    :param directions: (n, d) unit directions
    :param weights: (n, S) complex correlation weights, one column per shift field
    :param path_lengths: (n,) travelled distances
    """
    positions: np.ndarray
    directions: np.ndarray
    weights: np.ndarray
    path_lengths: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.path_lengths is None:
            self.path_lengths = np.zeros(len(self.positions))

    def __len__(self):
        return len(self.positions)

    def keep(self, mask: np.ndarray) -> 'PacketBatch':
        """The packets selected by mask"""
        return PacketBatch(self.positions[mask], self.directions[mask], self.weights[mask], self.path_lengths[mask])

    def extend(self, other: 'PacketBatch') -> 'PacketBatch':
        """The packets of this batch followed by the ones of other"""
        return PacketBatch(np.concatenate([self.positions, other.positions]),
                           np.concatenate([self.directions, other.directions]),
                           np.concatenate([self.weights, other.weights]),
                           np.concatenate([self.path_lengths, other.path_lengths]))

    @classmethod
    def from_packet(cls, packet: PhotonPacket) -> 'PacketBatch':
        return cls(np.array([packet.position], dtype=float), np.array([packet.direction], dtype=float),
                   np.array([[packet.corr_weight]], dtype=complex), np.array([packet.path_length]))

    def to_packet(self, index: int = 0, alive: bool = True) -> PhotonPacket:
        return PhotonPacket(self.positions[index].copy(), self.directions[index].copy(),
                            complex(self.weights[index, 0]), alive, float(self.path_lengths[index]))


def _inward_frames(box, side_indices: np.ndarray):
    """Inward normals and tangent vectors for sides given by their index 2 * axis + upper"""
    d = box.dimension
    n = len(side_indices)
    axes = side_indices // 2
    upper = side_indices % 2 == 1
    inward = np.zeros((n, d))
    inward[np.arange(n), axes] = np.where(upper, -1.0, 1.0)
    if d == 2:
        tangents = [np.stack([-inward[:, 1], inward[:, 0]], axis=-1)]
    else:
        t1 = np.zeros((n, d))
        t2 = np.zeros((n, d))
        t1[np.arange(n), (axes + 1) % 3] = 1.0
        t2[np.arange(n), (axes + 2) % 3] = 1.0
        tangents = [t1, t2]
    return inward, tangents


def launch_batch(scene: Scene, rng: np.random.Generator, n: int, n_shifts: int = 1) -> PacketBatch:
    """
    Launches n packets on the illuminated boundary. The side is chosen with probability proportional to its area,
    the position is uniform on the side. Directions follow the scene's launch law: 'lambertian' draws them with
    density proportional to k.(-nu) on the inward half sphere, 'collimated' uses -nu.
    """
    box = scene.box
    d = box.dimension
    if not scene.illuminated:
        raise InvalidInputError("The scene has no illuminated boundary")
    names = box.sides
    side_ids = np.array([names.index(s) for s in scene.illuminated])
    areas = np.array([box.side_area(s) for s in scene.illuminated])
    choice = side_ids[rng.choice(len(side_ids), size=n, p=areas / areas.sum())]
    positions = box.lower + rng.random((n, d)) * box.lengths
    axes = choice // 2
    positions[np.arange(n), axes] = np.where(choice % 2 == 1, box.upper[axes], box.lower[axes])
    inward, tangents = _inward_frames(box, choice)
    if scene.launch == 'collimated':
        directions = inward
    elif d == 2:
        sin_t = 2.0 * rng.random(n) - 1.0
        cos_t = np.sqrt(np.maximum(1.0 - sin_t ** 2, 0.0))
        directions = cos_t[:, None] * inward + sin_t[:, None] * tangents[0]
    else:
        u = rng.random(n)
        azimuth = 2 * math.pi * rng.random(n)
        cos_t = np.sqrt(1.0 - u)
        sin_t = np.sqrt(u)
        directions = (cos_t[:, None] * inward + (sin_t * np.cos(azimuth))[:, None] * tangents[0] +
                      (sin_t * np.sin(azimuth))[:, None] * tangents[1])
    # grazing draws of probability zero are sent along the normal
    grazing = np.einsum('ij,ij->i', directions, inward) <= 0
    directions[grazing] = inward[grazing]
    directions /= np.linalg.norm(directions, axis=-1, keepdims=True)
    weights = np.ones((n, n_shifts), dtype=complex)
    return PacketBatch(positions, directions, weights)


def launch_packet(scene: Scene, rng_state: np.random.Generator) -> PhotonPacket:
    """Launches a single packet on the illuminated boundary, with correlation weight 1"""
    return launch_batch(scene, rng_state, 1).to_packet()


def sample_free_path(coeffs: TransportCoefficients, rng: np.random.Generator, size=None):
    """Exponential free paths of mean eta"""
    return rng.exponential(coeffs.mean_free_path, size)


def scatter_directions(directions: np.ndarray, mu: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    New directions making the cosines mu with the old ones. The azimuth is uniform (in 2D a uniform sign of the
    rotation). The results are renormalized.
    """
    n, d = directions.shape
    mu = np.clip(mu, -1.0, 1.0)
    sin_t = np.sqrt(1.0 - mu * mu)
    if d == 2:
        sin_t = np.where(rng.random(n) < 0.5, -sin_t, sin_t)
        ux, uy = directions[:, 0], directions[:, 1]
        new = np.stack([mu * ux - sin_t * uy, sin_t * ux + mu * uy], axis=-1)
    else:
        azimuth = 2 * math.pi * rng.random(n)
        cos_p, sin_p = np.cos(azimuth), np.sin(azimuth)
        ux, uy, uz = directions[:, 0], directions[:, 1], directions[:, 2]
        vertical = np.abs(uz) > 0.99999
        temp = np.sqrt(np.where(vertical, 1.0, 1.0 - uz * uz))
        new = np.stack([
            np.where(vertical, sin_t * cos_p, sin_t * (ux * uz * cos_p - uy * sin_p) / temp + ux * mu),
            np.where(vertical, sin_t * sin_p, sin_t * (uy * uz * cos_p + ux * sin_p) / temp + uy * mu),
            np.where(vertical, np.sign(uz) * mu, -sin_t * cos_p * temp + uz * mu),
        ], axis=-1)
    return new / np.linalg.norm(new, axis=-1, keepdims=True)


def apply_weight_updates(weights: np.ndarray, positions: np.ndarray, old_dirs: np.ndarray, new_dirs: np.ndarray,
                         shifts: Sequence[ShiftField], k_mag: float, mean_free_path: Optional[float]) -> None:
    """
    Multiplies in place the correlation weights (one column per shift field) by the phase factor of a scattering
    event at the given positions. Large regime: the weights of events inside X_s are set to 0.
    """
    for j, shift in enumerate(shifts):
        if shift.regime is ShiftRegime.NONE:
            continue
        if shift.regime is ShiftRegime.LARGE:
            weights[shift.contains(positions), j] = 0.0
            continue
        if shift.regime is ShiftRegime.SMALL and mean_free_path is None:
            raise InvalidInputError("The Small regime needs the mean free path")
        phi = shift.displacement(positions, k_mag, mean_free_path)
        phase = k_mag * np.einsum('ij,ij->i', new_dirs - old_dirs, phi)
        weights[:, j] *= np.exp(1j * phase)


def update_correlation_weight(packet: PhotonPacket, old_dir, new_dir, scene: Scene, k_mag: float,
                              mean_free_path: Optional[float] = None) -> PhotonPacket:
    """
    Applies the phase factor of a scattering event at packet.position to the packet's correlation weight.

    :param mean_free_path: eta, only needed in the Small regime where phi = eta psi / |k|
    :returns: the updated packet
    """
    weights = np.array([[packet.corr_weight]], dtype=complex)
    apply_weight_updates(weights, np.array([packet.position], dtype=float), np.array([old_dir], dtype=float),
                         np.array([new_dir], dtype=float), [scene.shift], k_mag, mean_free_path)
    packet.corr_weight = complex(weights[0, 0])
    return packet


def _box_exit(box, positions: np.ndarray, directions: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Distance to the box boundary along each ray and the index of the side crossed"""
    with np.errstate(divide='ignore', invalid='ignore'):
        t_hi = (box.upper - positions) / directions
        t_lo = (box.lower - positions) / directions
    t_axis = np.where(directions > 0, t_hi, np.where(directions < 0, t_lo, np.inf))
    axis = np.argmin(t_axis, axis=-1)
    rows = np.arange(len(positions))
    t_box = t_axis[rows, axis]
    side = 2 * axis + (directions[rows, axis] > 0)
    return t_box, side


def step_batch(batch: PacketBatch, scene: Scene, coeffs: TransportCoefficients, sampler: CosineSampler,
               rng: np.random.Generator, shifts: Sequence[ShiftField]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Advances every packet of the batch by one free flight, truncated at the box boundary or at an absorber.

    The batch is updated in place. Scattered packets get a new direction and updated correlation weights.

    :returns: (events, sides) where events holds Event values (or DISCARDED for packets with an indeterminate
        geometry) and sides holds the index of the side crossed by exiting packets (-1 otherwise)
    """
    box = scene.box
    n = len(batch)
    free = sample_free_path(coeffs, rng, n)
    t_box, side = _box_exit(box, batch.positions, batch.directions)
    bad = ~np.isfinite(t_box) | (t_box < -GEOMETRY_TOLERANCE)
    t_box = np.maximum(t_box, 0.0)
    t_abs = np.full(n, np.inf)
    for absorber in scene.absorbers:
        t_abs = np.minimum(t_abs, absorber.ray_hit(batch.positions, batch.directions))

    absorbed = (t_abs <= np.minimum(free, t_box)) & ~bad
    exited = ~absorbed & (t_box <= free) & ~bad
    scattered = ~absorbed & ~exited & ~bad
    travel = np.where(absorbed, t_abs, np.where(exited, t_box, free))
    travel = np.where(bad, 0.0, travel)
    batch.positions += travel[:, None] * batch.directions
    batch.path_lengths += travel

    # snap exiting packets onto the crossed side
    rows = np.nonzero(exited)[0]
    axes = side[rows] // 2
    batch.positions[rows, axes] = np.where(side[rows] % 2 == 1, box.upper[axes], box.lower[axes])

    events = np.full(n, int(Event.SCATTERED))
    events[absorbed] = int(Event.ABSORBED)
    events[bad] = DISCARDED
    measured_ids = np.array([box.sides.index(s) for s in scene.measured], dtype=int)
    cos_aperture = math.cos(scene.aperture_half_angle)
    is_measured_side = np.isin(side, measured_ids)
    normal_cos = np.abs(batch.directions[np.arange(n), side // 2])
    measured = exited & is_measured_side & (normal_cos >= cos_aperture - 1e-12)
    events[exited] = int(Event.EXITED_OTHER)
    events[measured] = int(Event.EXITED_MEASURED)
    sides_out = np.where(exited, side, -1)

    if np.any(scattered):
        idx = np.nonzero(scattered)[0]
        old = batch.directions[idx]
        mu = sampler.sample_cosine(rng, len(idx))
        new = scatter_directions(old, mu, rng)
        weights = batch.weights[idx]
        apply_weight_updates(weights, batch.positions[idx], old, new, shifts, coeffs.wavenumber,
                             coeffs.mean_free_path)
        batch.weights[idx] = weights
        batch.directions[idx] = new
    return events, sides_out


def step_packet(packet: PhotonPacket, scene: Scene, coeffs: TransportCoefficients,
                rng_state: np.random.Generator) -> Event:
    """
    Advances a single packet, see step_batch().

    :raises NumericalFailureError: if the packet's ray can't be intersected with the domain; the packet is marked dead
    """
    if not packet.alive:
        raise InvalidInputError("Can't step a dead packet")
    batch = PacketBatch.from_packet(packet)
    sampler = CosineSampler.for_coefficients(coeffs)
    events, _ = step_batch(batch, scene, coeffs, sampler, rng_state, [scene.shift])
    event = int(events[0])
    if event == DISCARDED:
        packet.alive = False
        raise NumericalFailureError(f"Indeterminate ray-boundary intersection at {packet.position}")
    updated = batch.to_packet(alive=event == Event.SCATTERED)
    packet.position, packet.direction = updated.position, updated.direction
    packet.corr_weight, packet.alive, packet.path_length = updated.corr_weight, updated.alive, updated.path_length
    return Event(event)
