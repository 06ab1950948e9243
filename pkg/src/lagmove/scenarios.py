"""Scenario construction and the time-stepping driver.

A step does, in order: read the current-level gradient (analytic from the
field, or WLSQ-reconstructed from neighbor velocities), build the move
context, displace points with the configured scheme, sample the field at
the new positions and time, and shift the history. Movement always happens
before the velocity update.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import diagnostics, gfdm, movers, neighbors
from .cloud import PointCloud, advance_history, apply_displacements, make_cloud
from .errors import StructuralError
from .fields import (
    Lissajous,
    LinearField,
    ModulatedRotation,
    RigidRotation,
    exact_lissajous_center,
)

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))
_TIME_EPS = 1e-12


@dataclass(frozen=True)
class Scenario:
    name: str
    field: object                 # velocity field with evaluate/gradient
    disc_center: tuple[float, float]
    disc_radius: float
    n_points: int
    t_end: float
    smoothing_length: float
    exact_diameter: float | None = None
    # exact displacement of the cloud centroid from its start, as f(t)
    exact_center_offset: Callable[[float], np.ndarray] | None = None

    def __post_init__(self):
        if self.n_points < 3 or self.disc_radius <= 0 or self.t_end <= 0:
            raise StructuralError("invalid scenario parameters")


@dataclass(frozen=True)
class RunConfig:
    mover: movers.MoverKind
    dt: float
    gradient_mode: str = "analytic"     # analytic | numeric
    radius_factor: float = 1.0
    output_stride: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.dt <= 0:
            raise StructuralError("dt must be positive")
        if self.gradient_mode not in ("analytic", "numeric"):
            raise StructuralError(f"unknown gradient mode {self.gradient_mode!r}")
        if self.output_stride < 1:
            raise StructuralError("output stride must be >= 1")


def sample_disc(center: tuple[float, float], radius: float, n: int) -> np.ndarray:
    """Deterministic near-uniform disc sampling.

    An even number of points sits equally spaced on the boundary circle (so
    the sampled diameter is exactly 2 r, via antipodal pairs); the interior
    follows the golden-angle sunflower layout.
    """
    if n < 3 or radius <= 0:
        raise StructuralError("need n >= 3 and positive radius")
    n_boundary = 2 * int(round(np.sqrt(n)))
    n_boundary = min(n_boundary, n if n % 2 == 0 else n - 1)
    n_interior = n - n_boundary

    theta_b = 2.0 * np.pi * np.arange(n_boundary) / n_boundary
    boundary = radius * np.stack([np.cos(theta_b), np.sin(theta_b)], axis=1)

    k = np.arange(n_interior)
    r = radius * np.sqrt((k + 0.5) / (n - (n_boundary + 1) / 2.0))
    theta = GOLDEN_ANGLE * k
    interior = np.stack([r * np.cos(theta), r * np.sin(theta)], axis=1)

    return np.concatenate([boundary, interior]) + np.asarray(center, dtype=float)


def rotation_scenario(n: int = 222, omega: float = 1.0, *, t_end: float | None = None) -> Scenario:
    """Unit disc in rigid rotation; default duration is two full rotations."""
    return Scenario(
        name="rotation",
        field=RigidRotation(center=(0.0, 0.0), omega=omega),
        disc_center=(0.0, 0.0),
        disc_radius=1.0,
        n_points=n,
        t_end=4.0 * np.pi / omega if t_end is None else t_end,
        smoothing_length=0.3,
        exact_diameter=2.0,
        exact_center_offset=lambda t: np.zeros(2),
    )


def lissajous_scenario(n: int = 222, t_end: float = 3.0) -> Scenario:
    return Scenario(
        name="lissajous",
        field=Lissajous(),
        disc_center=(0.0, 0.0),
        disc_radius=1.0,
        n_points=n,
        t_end=t_end,
        smoothing_length=0.3,
        exact_diameter=2.0,
        exact_center_offset=lambda t: exact_lissajous_center(t) - exact_lissajous_center(0.0),
    )


def modulated_rotation_scenario(
    n: int = 222, omega0: float = 1.0, freq: float = 0.5, t_end: float = 10.0
) -> Scenario:
    return Scenario(
        name="modulated-rotation",
        field=ModulatedRotation(center=(0.0, 0.0), omega0=omega0, modulation_freq=freq),
        disc_center=(0.0, 0.0),
        disc_radius=1.0,
        n_points=n,
        t_end=t_end,
        smoothing_length=0.3,
        exact_diameter=2.0,
        exact_center_offset=lambda t: np.zeros(2),
    )


def linear_field_scenario(n: int = 222, t_end: float = 2.0) -> Scenario:
    # trace-free A keeps the flow divergence-free
    return Scenario(
        name="linear-field",
        field=LinearField(A=((0.2, 1.0), (0.3, -0.2)), b=(0.5, -0.1)),
        disc_center=(0.0, 0.0),
        disc_radius=1.0,
        n_points=n,
        t_end=t_end,
        smoothing_length=0.3,
    )


SCENARIOS: dict[str, Callable[..., Scenario]] = {
    "rotation": rotation_scenario,
    "lissajous": lissajous_scenario,
    "modulated-rotation": modulated_rotation_scenario,
    "linear-field": linear_field_scenario,
}


def make_scenario(name: str, **kwargs) -> Scenario:
    try:
        factory = SCENARIOS[name]
    except KeyError:
        raise StructuralError(f"unknown scenario {name!r}") from None
    return factory(**kwargs)


def _field_state(scenario: Scenario, config: RunConfig, cloud_like, positions, t):
    """Velocity and current-level gradient at given positions and time."""
    v = scenario.field.evaluate(positions, t)
    if config.gradient_mode == "analytic":
        g = scenario.field.gradient(positions, t)
    else:
        probe = replace(cloud_like, positions=positions, velocities=v)
        index = neighbors.build_index(
            probe, config.radius_factor * probe.smoothing_length
        )
        g = gfdm.all_gradients(probe, index)
    return v, g


def initial_cloud(scenario: Scenario, config: RunConfig) -> PointCloud:
    positions = sample_disc(scenario.disc_center, scenario.disc_radius, scenario.n_points)
    cloud = make_cloud(
        positions,
        np.zeros_like(positions),
        np.zeros((scenario.n_points, 2, 2)),
        smoothing_length=scenario.smoothing_length,
        dt=config.dt,
    )
    v, g = _field_state(scenario, config, cloud, positions, 0.0)
    return replace(cloud, velocities=v, grad_velocities=g)


def step(cloud: PointCloud, scenario: Scenario, config: RunConfig) -> PointCloud:
    """Advance one step. Uses the bootstrap scheme while history is missing."""
    mover = config.mover if cloud.has_history else config.mover.bootstrap
    ctx = movers.MoveContext(
        dt=cloud.dt,
        v_n=cloud.velocities,
        v_prev=cloud.velocities_prev,
        grad_n=cloud.grad_velocities,
        grad_prev=cloud.grad_velocities_prev,
        has_history=cloud.has_history,
    )
    moved = apply_displacements(cloud, movers.displacement(mover, ctx))
    t_new = moved.initial_time + (moved.step + 1) * moved.dt
    v_new, g_new = _field_state(scenario, config, moved, moved.positions, t_new)
    return advance_history(moved, v_new, g_new)


def _record(cloud, scenario, start_centroid, v0) -> diagnostics.DiagnosticsRecord:
    c = diagnostics.centroid(cloud)
    dia = diagnostics.diameter(cloud)
    vol = diagnostics.hull_volume(cloud)
    e_dia = (
        abs(dia - scenario.exact_diameter) if scenario.exact_diameter is not None else 0.0
    )
    if scenario.exact_center_offset is not None:
        exact = start_centroid + scenario.exact_center_offset(cloud.time)
        e_x = float(np.linalg.norm(c - exact))
    else:
        e_x = 0.0
    return diagnostics.DiagnosticsRecord(
        step=cloud.step,
        time=cloud.time,
        centroid=c,
        diameter=dia,
        hull_volume=vol,
        eps_dia=e_dia,
        eps_x=e_x,
        eps_V=diagnostics.eps_volume(v0, vol),
    )


def short_step(
    cloud: PointCloud, scenario: Scenario, config: RunConfig, dt_short: float
) -> PointCloud:
    """One step of length ``dt_short`` landing exactly on the target time.

    Backward differences inside the movers keep the regular spacing; only
    the integration interval shrinks. The returned cloud keeps the original
    dt and step numbering, with its clock pinned to the landing time.
    """
    t_new = cloud.time + dt_short
    mover = config.mover if cloud.has_history else config.mover.bootstrap
    ctx = movers.MoveContext(
        dt=dt_short,
        v_n=cloud.velocities,
        v_prev=cloud.velocities_prev,
        grad_n=cloud.grad_velocities,
        grad_prev=cloud.grad_velocities_prev,
        has_history=cloud.has_history,
        dt_history=cloud.dt,
    )
    moved = apply_displacements(cloud, movers.displacement(mover, ctx))
    v_new, g_new = _field_state(scenario, config, moved, moved.positions, t_new)
    out = advance_history(moved, v_new, g_new)
    return replace(out, initial_time=t_new - out.step * out.dt)


def plan_steps(t_end: float, dt: float) -> tuple[int, float]:
    """Number of full steps and the leftover interval needed to hit t_end."""
    n_full = int(np.floor(t_end / dt + 1e-9))
    remainder = t_end - n_full * dt
    if remainder <= _TIME_EPS * max(1.0, abs(t_end)):
        remainder = 0.0
    return n_full, remainder


def run(scenario: Scenario, config: RunConfig) -> list[diagnostics.DiagnosticsRecord]:
    """Full run to t_end; when dt does not divide t_end the last step is
    shortened to land exactly on it. Records every stride plus the final step."""
    cloud = initial_cloud(scenario, config)
    v0 = diagnostics.hull_volume(cloud)
    start_centroid = diagnostics.centroid(cloud)
    records = [_record(cloud, scenario, start_centroid, v0)]

    n_full, remainder = plan_steps(scenario.t_end, config.dt)
    for _ in range(n_full):
        cloud = step(cloud, scenario, config)
        if cloud.step % config.output_stride == 0:
            records.append(_record(cloud, scenario, start_centroid, v0))
    if remainder > 0.0:
        cloud = short_step(cloud, scenario, config, remainder)

    if records[-1].step != cloud.step or remainder > 0.0:
        final = _record(cloud, scenario, start_centroid, v0)
        final = replace(final, time=scenario.t_end)
        records.append(final)
    return records


@dataclass(frozen=True)
class SweepCell:
    mover: str
    dt: float
    eps_dia: float
    eps_x: float
    eps_V: float
    failed: bool = False


def convergence_sweep(
    scenario: Scenario,
    base: RunConfig,
    dts: list[float],
    mover_names: tuple[str, ...] = movers.MOVER_NAMES,
) -> list[SweepCell]:
    """Cross product of movers and time steps; failed cells are marked and
    the sweep continues. Sorted by (mover, dt)."""
    cells = []
    for name in sorted(mover_names):
        for dt in sorted(dts):
            config = replace(base, mover=movers.MoverKind(name, base.mover.terms), dt=dt)
            try:
                final = run(scenario, config)[-1]
                cells.append(SweepCell(name, dt, final.eps_dia, final.eps_x, final.eps_V))
            except Exception:
                cells.append(SweepCell(name, dt, np.nan, np.nan, np.nan, failed=True))
    return cells
