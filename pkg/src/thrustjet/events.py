"""Collision events: container type, toy dijet generator, and file I/O.

Momenta are stored as an (N, 3) float64 array in GeV.  Particles follow the
massless convention E_i = |p_i|, so energies are always derived from the
momenta and never stored.  Events used for clustering are expected to be
momentum balanced (sum of momenta ~ 0); `balance` enforces this by mean
subtraction and the generator applies it automatically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

BALANCE_TOL = 1e-9


class EventFileError(ValueError):
    """Raised on malformed event files; carries the offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class Event:
    """An ordered set of particle three-momenta, massless convention."""

    event_id: int
    momenta: np.ndarray  # (N, 3) float64, GeV

    def __post_init__(self):
        p = np.ascontiguousarray(np.asarray(self.momenta, dtype=np.float64))
        if p.ndim != 2 or p.shape[1] != 3:
            raise ValueError(f"momenta must be (N, 3), got {p.shape}")
        if p.shape[0] < 2:
            raise ValueError(f"an event needs at least 2 particles, got {p.shape[0]}")
        if not np.all(np.isfinite(p)):
            raise ValueError("non-finite momentum component")
        p.setflags(write=False)
        object.__setattr__(self, "momenta", p)

    @property
    def n(self) -> int:
        return self.momenta.shape[0]

    @property
    def energies(self) -> np.ndarray:
        """Massless particle energies |p_i|."""
        return np.linalg.norm(self.momenta, axis=1)

    @property
    def sum_abs_p(self) -> float:
        return float(self.energies.sum())

    @property
    def balanced(self) -> bool:
        net = np.linalg.norm(self.momenta.sum(axis=0))
        return bool(net <= BALANCE_TOL * self.sum_abs_p)


@dataclass(frozen=True)
class GeneratorConfig:
    """Knobs for the toy dijet generator."""

    n_min: int = 17
    n_max: int = 95
    com_energy: float = 91.1876  # GeV, Z pole
    transverse_smear: float = 0.3
    rng_seed: int = 0

    def __post_init__(self):
        if not (2 <= self.n_min <= self.n_max):
            raise ValueError(
                f"need 2 <= n_min <= n_max, got [{self.n_min}, {self.n_max}]"
            )


def balance(event: Event) -> Event:
    """Subtract the mean momentum from every particle; idempotent."""
    mean = event.momenta.mean(axis=0)
    return Event(event.event_id, event.momenta - mean)


def _random_unit_vector(rng: np.random.Generator) -> np.ndarray:
    z = rng.uniform(-1.0, 1.0)
    phi = rng.uniform(0.0, 2.0 * np.pi)
    rho = np.sqrt(max(0.0, 1.0 - z * z))
    return np.array([rho * np.cos(phi), rho * np.sin(phi), z])


def _orthonormal_frame(axis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # any vector not parallel to axis works as a starting point
    helper = np.array([1.0, 0.0, 0.0])
    if abs(axis[0]) > 0.9:
        helper = np.array([0.0, 1.0, 0.0])
    u = np.cross(axis, helper)
    u /= np.linalg.norm(u)
    v = np.cross(axis, u)
    return u, v


def generate_dijet_event(config: GeneratorConfig, event_id: int) -> Event:
    """Generate one momentum-balanced toy dijet event.

    Two back-to-back particle clusters along a random axis: longitudinal
    momenta are exponential with scale com_energy / N, transverse components
    Gaussian with width transverse_smear times the longitudinal momentum.
    Deterministic given (config.rng_seed, event_id).
    """
    rng = np.random.default_rng(np.random.SeedSequence((config.rng_seed, event_id)))
    n = int(rng.integers(config.n_min, config.n_max + 1))
    axis = _random_unit_vector(rng)
    u, v = _orthonormal_frame(axis)

    n_up = n // 2
    signs = np.where(np.arange(n) < n_up, 1.0, -1.0)
    p_long = rng.exponential(scale=config.com_energy / n, size=n)
    p_t = rng.normal(0.0, 1.0, size=(n, 2)) * (config.transverse_smear * p_long)[:, None]
    momenta = (
        (signs * p_long)[:, None] * axis[None, :]
        + p_t[:, 0:1] * u[None, :]
        + p_t[:, 1:2] * v[None, :]
    )
    return balance(Event(event_id, momenta))


def generate_dataset(config: GeneratorConfig, n_events: int) -> list[Event]:
    return [generate_dijet_event(config, i) for i in range(n_events)]


def save_events(path, events) -> None:
    """Write events in the plain-text event file format.

    Per event: a header line ``E <id> <N>`` followed by N lines
    ``<px> <py> <pz>`` in GeV.  Lines starting with '#' are comments.
    """
    with open(path, "w", encoding="utf-8") as fh:
        for ev in events:
            fh.write(f"E {ev.event_id} {ev.n}\n")
            for px, py, pz in ev.momenta:
                fh.write(f"{px:.17g} {py:.17g} {pz:.17g}\n")


def load_events(path) -> list[Event]:
    """Parse an event file; the balanced flag is computed, never enforced."""
    events: list[Event] = []
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()

    i = 0
    while i < len(lines):
        line_no = i + 1
        stripped = lines[i].strip()
        i += 1
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if parts[0] != "E" or len(parts) != 3:
            raise EventFileError(line_no, f"expected 'E <id> <N>' header, got {stripped!r}")
        try:
            event_id, n = int(parts[1]), int(parts[2])
        except ValueError:
            raise EventFileError(line_no, f"bad header fields in {stripped!r}") from None
        if n < 2:
            raise EventFileError(line_no, f"event {event_id} has N={n} < 2")

        momenta = np.empty((n, 3))
        filled = 0
        while filled < n:
            if i >= len(lines):
                raise EventFileError(
                    len(lines), f"event {event_id}: expected {n} particle lines, got {filled}"
                )
            line_no = i + 1
            stripped = lines[i].strip()
            i += 1
            if not stripped or stripped.startswith("#"):
                continue
            fields = stripped.split()
            if fields[0] == "E":
                raise EventFileError(
                    line_no, f"event {event_id}: expected {n} particle lines, got {filled}"
                )
            if len(fields) != 3:
                raise EventFileError(line_no, f"expected '<px> <py> <pz>', got {stripped!r}")
            try:
                momenta[filled] = [float(x) for x in fields]
            except ValueError:
                raise EventFileError(line_no, f"non-numeric momentum in {stripped!r}") from None
            if not np.all(np.isfinite(momenta[filled])):
                raise EventFileError(line_no, f"non-finite momentum in {stripped!r}")
            filled += 1
        events.append(Event(event_id, momenta))
    return events
