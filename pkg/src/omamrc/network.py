"""Network topology, link statistics and per-frame channel realizations.

The network has M sources, L half-duplex relays and one destination. Every
ordered link from a transmitter (source or relay) to a receiver (relay or
destination) carries an average SNR gamma_{a,b}; per frame, each link fades
with a zero-mean circularly symmetric complex Gaussian coefficient of
variance gamma_{a,b} (linear scale), the fading staying constant over the
whole frame. Transmit power and noise variance are unity, so gamma absorbs
both path loss and shadowing.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, replace

import numpy as np


class NodeKind(enum.Enum):
    SOURCE = "source"
    RELAY = "relay"
    DESTINATION = "destination"


@dataclass(frozen=True)
class NodeId:
    """A node in the network: source s_i, relay r_j, or the destination."""

    kind: NodeKind
    index: int

    @staticmethod
    def source(index: int) -> "NodeId":
        return NodeId(NodeKind.SOURCE, index)

    @staticmethod
    def relay(index: int) -> "NodeId":
        return NodeId(NodeKind.RELAY, index)

    @staticmethod
    def destination() -> "NodeId":
        return NodeId(NodeKind.DESTINATION, 0)

    def __repr__(self) -> str:
        if self.kind is NodeKind.DESTINATION:
            return "d"
        prefix = "s" if self.kind is NodeKind.SOURCE else "r"
        return f"{prefix}{self.index + 1}"


def transmitter_index(node: NodeId, m: int) -> int:
    """Flat transmitter index: sources 0..M-1, then relays M..M+L-1.

    This order is also the deterministic node order used by every
    tie-breaking rule (sources ascending, then relays ascending).
    """
    if node.kind is NodeKind.SOURCE:
        return node.index
    if node.kind is NodeKind.RELAY:
        return m + node.index
    raise ValueError("destination never transmits")


def node_from_transmitter_index(idx: int, m: int) -> NodeId:
    return NodeId.source(idx) if idx < m else NodeId.relay(idx - m)


def receiver_index(node: NodeId, l: int) -> int:
    """Flat receiver index: relays 0..L-1, destination L."""
    if node.kind is NodeKind.RELAY:
        return node.index
    if node.kind is NodeKind.DESTINATION:
        return l
    raise ValueError("sources never receive")


def db_to_linear(db: float | np.ndarray) -> float | np.ndarray:
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def linear_to_db(linear: float | np.ndarray) -> float | np.ndarray:
    return 10.0 * np.log10(np.asarray(linear, dtype=float))


def mutual_information(h: complex) -> float:
    """Mutual information of one link in b.c.u for a Gaussian input: log2(1+|h|^2)."""
    return float(np.log2(1.0 + abs(h) ** 2))


class ConfigError(ValueError):
    """Invalid network configuration; carries the full list of problems."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


@dataclass(frozen=True)
class NetworkConfig:
    """Static simulation parameters for one network.

    Parameters
    ----------
    m, l : int
        Number of sources (>= 2) and relays (>= 1).
    t_max : int
        Maximum number of retransmission rounds in the second phase.
    alpha : float
        Ratio of second-phase to first-phase time-slot lengths; weights
        the mutual information accumulated from retransmissions.
    rates : tuple of float
        Initial rate of each source in b.c.u, fixed for the whole run.
    gains_db : ndarray, shape (M+L, L+1)
        Average link SNR in dB, row = transmitter (sources then relays),
        column = receiver (relays then destination). Self-links
        (relay r to itself) are ignored and may hold NaN.
    gains_linear : ndarray or None
        Linear-scale gains, filled in by :func:`validate_config`.
    """

    m: int
    l: int
    t_max: int
    alpha: float
    rates: tuple[float, ...]
    gains_db: np.ndarray
    gains_linear: np.ndarray | None = None

    @property
    def n_nodes(self) -> int:
        """Number of candidate transmitters M+L."""
        return self.m + self.l

    def gain_db(self, a: NodeId, b: NodeId) -> float:
        return float(self.gains_db[transmitter_index(a, self.m),
                                   receiver_index(b, self.l)])

    def sources(self) -> list[NodeId]:
        return [NodeId.source(i) for i in range(self.m)]

    def relays(self) -> list[NodeId]:
        return [NodeId.relay(i) for i in range(self.l)]

    def candidates(self) -> list[NodeId]:
        """All possible transmitters in deterministic node order."""
        return self.sources() + self.relays()


def symmetric_gains_db(m: int, l: int, gamma_db: float) -> np.ndarray:
    """Gain matrix with every link at the same average SNR."""
    gains = np.full((m + l, l + 1), float(gamma_db))
    for r in range(l):
        gains[m + r, r] = np.nan
    return gains


def validate_config(cfg: NetworkConfig) -> NetworkConfig:
    """Check a configuration and cache the linear-scale gain matrix.

    Collects every problem before raising, so a bad config file reports
    all its mistakes at once.
    """
    errors: list[str] = []
    if cfg.m < 2:
        errors.append(f"M must be >= 2, got {cfg.m}")
    if cfg.l < 1:
        errors.append(f"L must be >= 1, got {cfg.l}")
    if cfg.t_max < 1:
        errors.append(f"T_max must be >= 1, got {cfg.t_max}")
    if not cfg.alpha > 0:
        errors.append(f"alpha must be positive, got {cfg.alpha}")
    if len(cfg.rates) != cfg.m:
        errors.append(f"expected {cfg.m} rates, got {len(cfg.rates)}")
    for s, rate in enumerate(cfg.rates):
        if not rate > 0:
            errors.append(f"non-positive rate for source {s}")
    gains = np.asarray(cfg.gains_db, dtype=float)
    if gains.shape != (cfg.m + cfg.l, cfg.l + 1):
        errors.append(
            f"gain matrix must have shape {(cfg.m + cfg.l, cfg.l + 1)}, "
            f"got {gains.shape}")
    else:
        for a in range(cfg.m + cfg.l):
            for b in range(cfg.l + 1):
                if a == cfg.m + b:
                    continue  # relay self-link, unused
                if np.isnan(gains[a, b]):
                    tx = NodeId.source(a) if a < cfg.m else NodeId.relay(a - cfg.m)
                    rx = NodeId.destination() if b == cfg.l else NodeId.relay(b)
                    errors.append(f"missing link entry {tx}->{rx}")
    if errors:
        raise ConfigError(errors)

    if cfg.t_max < cfg.l:
        warnings.warn(
            f"T_max={cfg.t_max} is below the number of relays L={cfg.l}; "
            "allowed, but unusual as a system design choice",
            stacklevel=2)

    linear = db_to_linear(gains)
    for r in range(cfg.l):
        linear[cfg.m + r, r] = 0.0  # neutralize unused self-links
    return replace(cfg, gains_db=gains, gains_linear=linear)


@dataclass(frozen=True)
class ChannelRealization:
    """One frame's fading draw: complex gains and cached per-link MI.

    Both arrays are indexed like the config gain matrix. ``mi[a, b]``
    equals log2(1 + |gains[a, b]|^2) and is what the whole decoding
    machinery consumes; the complex coefficients are kept for inspection.
    """

    gains: np.ndarray
    mi: np.ndarray

    def mi_to_destination(self, l: int) -> np.ndarray:
        return self.mi[:, l]

    def mi_to_relay(self, r: int) -> np.ndarray:
        return self.mi[:, r]


def draw_realization(cfg: NetworkConfig, rng: np.random.Generator) -> ChannelRealization:
    """Draw one frame's independent Rayleigh-fading coefficients.

    Each link coefficient is zero-mean circularly symmetric complex
    Gaussian with variance equal to the configured linear gain, so
    E[|h|^2] = gamma. A zero-variance link always yields h = 0, MI = 0.
    """
    if cfg.gains_linear is None:
        raise ValueError("config must pass validate_config before drawing")
    shape = cfg.gains_linear.shape
    z = rng.standard_normal((*shape, 2))
    scale = np.sqrt(cfg.gains_linear / 2.0)
    gains = scale * z[..., 0] + 1j * (scale * z[..., 1])
    mi = np.log2(1.0 + gains.real ** 2 + gains.imag ** 2)
    return ChannelRealization(gains=gains, mi=mi)


def frame_rng(master_seed: int, frame_index: int) -> np.random.Generator:
    """Independent per-frame random substream.

    Derived from (master seed, frame index) only, so a frame's draw does
    not depend on execution order or on how frames are split across
    workers.
    """
    return np.random.default_rng(
        np.random.SeedSequence(master_seed, spawn_key=(frame_index,)))
