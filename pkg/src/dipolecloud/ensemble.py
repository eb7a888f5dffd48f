"""Random spatial configurations of motionless atoms in a cube.

Lengths are measured in units of the inverse wave number 1/k throughout,
so a cube of edge ``kL`` at number density ``n/k^3`` holds
``N = round(density * kL**3)`` atoms.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

MAX_REDRAWS = 1_000_000


def atom_count(density: float, box_size: float) -> int:
    """Number of atoms at the given density (n/k^3) and cube edge (kL)."""
    return int(round(density * box_size**3))


@dataclass(frozen=True)
class EnsembleConfiguration:
    """One realization of atom positions in a cube.

    positions has shape (N, 3) with every coordinate in [0, kL]; seed_record
    is the (master seed, realization index) pair that generated it.
    """

    positions: np.ndarray
    box_size: float
    density: float
    seed_record: tuple[int, int]
    exclusion_radius: float = 0.0
    redraws: int = field(default=0, compare=False)

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        object.__setattr__(self, "positions", pos)
        if pos.ndim != 2 or pos.shape[1] != 3:
            raise ValueError(f"positions must be (N, 3), got {pos.shape}")
        if pos.size and (pos.min() < 0.0 or pos.max() > self.box_size):
            raise ValueError("positions fall outside the cube [0, kL]^3")
        expected = atom_count(self.density, self.box_size)
        if len(pos) != expected:
            raise ValueError(
                f"N={len(pos)} inconsistent with round(density*kL^3)={expected}"
            )

    @property
    def n_atoms(self) -> int:
        return len(self.positions)


def _violating_atom(positions: np.ndarray, r_min: float) -> int | None:
    """Index of the first atom participating in a too-close pair, else None."""
    delta = positions[:, None, :] - positions[None, :, :]
    dist = np.linalg.norm(delta, axis=-1)
    np.fill_diagonal(dist, np.inf)
    bad = np.argwhere(dist < r_min)
    if len(bad) == 0:
        return None
    return int(bad.min())


def sample_cube(
    density: float,
    box_size: float,
    r_min: float = 0.0,
    seed: tuple[int, int] = (0, 0),
) -> EnsembleConfiguration:
    """Draw one uniform random configuration of N atoms in the cube.

    The stream is a pure function of ``seed = (master seed, realization
    index)``, so realizations are reproducible under any parallel schedule.
    With ``r_min > 0`` atoms violating the pair-distance floor are redrawn
    one at a time until the whole configuration satisfies it.
    """
    if density <= 0 or box_size <= 0:
        raise ValueError("density and box_size must be positive")
    if r_min < 0:
        raise ValueError("r_min must be >= 0")
    n = atom_count(density, box_size)
    master, index = int(seed[0]), int(seed[1])
    rng = np.random.default_rng(np.random.SeedSequence((master, index)))
    positions = rng.uniform(0.0, box_size, size=(n, 3))

    redraws = 0
    if r_min > 0.0 and n > 1:
        while True:
            i = _violating_atom(positions, r_min)
            if i is None:
                break
            if redraws >= MAX_REDRAWS:
                raise RuntimeError(
                    f"exclusion radius r_min={r_min} infeasible: rejection "
                    f"sampling did not terminate after {MAX_REDRAWS} redraws "
                    f"(N={n}, kL={box_size})"
                )
            positions[i] = rng.uniform(0.0, box_size, size=3)
            redraws += 1

    return EnsembleConfiguration(
        positions=positions,
        box_size=box_size,
        density=density,
        seed_record=(master, index),
        exclusion_radius=r_min,
        redraws=redraws,
    )


def positions_to_csv(cfg: EnsembleConfiguration, path) -> None:
    """Dump atom positions (x, y, z in units 1/k), one row per atom."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["# x", "y", "z"])
        for row in cfg.positions:
            writer.writerow([f"{v:.17g}" for v in row])
