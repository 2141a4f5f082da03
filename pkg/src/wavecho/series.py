"""Fixed-rate free-surface elevation series with sea-state metadata."""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ShapeError


@dataclass
class GaugeSeries:
    t: np.ndarray    # seconds
    eta: np.ndarray  # free-surface elevation, m
    hs: float
    tp: float
    seed: int
    dx: float = 5.0
    gauge_x: float = 3500.0
    sample_rate: float = 1.0

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.eta = np.asarray(self.eta, dtype=float)
        if self.t.shape != self.eta.shape:
            raise ShapeError("time and elevation arrays must have equal length")

    def __len__(self) -> int:
        return self.eta.size


_HEADER_KEYS = ("Hs", "Tp", "seed", "dx", "gauge_x", "sample_rate")


def save_gauge_csv(series: GaugeSeries, path) -> None:
    """Bit-exact round-trippable dump: header rows, then (t, eta) rows."""
    values = {
        "Hs": series.hs, "Tp": series.tp, "seed": series.seed,
        "dx": series.dx, "gauge_x": series.gauge_x,
        "sample_rate": series.sample_rate,
    }
    with open(path, "w") as fh:
        for key in _HEADER_KEYS:
            fh.write(f"# {key}={values[key]!r}\n")
        fh.write("t,eta\n")
        for t, eta in zip(series.t, series.eta):
            fh.write(f"{float(t)!r},{float(eta)!r}\n")


def load_gauge_csv(path) -> GaugeSeries:
    header = {}
    ts, etas = [], []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line == "t,eta":
                continue
            if line.startswith("#"):
                key, value = line[1:].split("=", 1)
                header[key.strip()] = value.strip()
            else:
                a, b = line.split(",")
                ts.append(float(a))
                etas.append(float(b))
    missing = [k for k in _HEADER_KEYS if k not in header]
    if missing:
        raise ConfigurationError(f"gauge file missing header keys: {missing}")
    return GaugeSeries(
        t=np.array(ts), eta=np.array(etas),
        hs=float(header["Hs"]), tp=float(header["Tp"]), seed=int(header["seed"]),
        dx=float(header["dx"]), gauge_x=float(header["gauge_x"]),
        sample_rate=float(header["sample_rate"]),
    )
