"""Reservoir connectivity construction for the 16 network variants.

A variant is named by a four-digit binary code (neuron model, architecture,
input domain, size).  Random variants get a dense uniform weight matrix; the
structured ("tonotopic") variants are built from four excitatory/inhibitory
block matrices arranged into core and belt fields and combined into a single
state matrix.  Every weight matrix is rescaled to unit spectral radius.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateSpectrumError,
    ConfigurationError,
    EmptyNetworkError,
    InvalidCodeError,
    ShapeError,
    UnsupportedTopologyError,
)

# Columns per tonotopic field; equals the Fourier window length of the
# spectral frontend.
FIELD_COLUMNS = 16

# Small/large unit counts shared by random and structured variants.
SIZE_SMALL = 32
SIZE_LARGE = 128

# Intra-field connection kernels: excitatory connections reach across the
# field (long length scale), excitatory-to-inhibitory ones stay local.
_LAMBDA_E_FRACTION = 1.0 / 4.0
_LAMBDA_I_FRACTION = 1.0 / 16.0

# Inter-field (core <-> belt) topographic band half-width and its
# multiplicative jitter range, making each field pair's pattern unique.
_BAND_HALF_WIDTH = 1
_JITTER_LOW, _JITTER_HIGH = 0.5, 1.5

_SCALE_TOL = 1e-10


@dataclass(frozen=True)
class NetworkCode:
    """Four binary construction choices identifying one reservoir variant."""

    neuron_model: int  # 0 presynaptic, 1 postsynaptic
    architecture: int  # 0 random, 1 tonotopic
    input_domain: int  # 0 time, 1 frequency
    size: int          # 0 small (32 units), 1 large (128 units)

    def __post_init__(self):
        for name in ("neuron_model", "architecture", "input_domain", "size"):
            if getattr(self, name) not in (0, 1):
                raise InvalidCodeError(f"{name} must be 0 or 1")

    def __str__(self) -> str:
        return f"{self.neuron_model}{self.architecture}{self.input_domain}{self.size}"

    @property
    def n_units(self) -> int:
        return SIZE_LARGE if self.size else SIZE_SMALL

    @property
    def num_fields(self) -> int:
        """Tonotopic field count (1 small, 4 large); random variants have none."""
        if not self.architecture:
            return 0
        return 4 if self.size else 1

    @property
    def input_dim(self) -> int:
        return 2 * FIELD_COLUMNS if self.input_domain else 1

    @property
    def is_structured(self) -> bool:
        return bool(self.architecture)

    @property
    def is_postsynaptic(self) -> bool:
        return bool(self.neuron_model)


def parse_code(text: str) -> NetworkCode:
    """Parse a four-character binary string such as ``"0000"`` or ``"1111"``."""
    if not isinstance(text, str) or len(text) != 4:
        raise InvalidCodeError(f"network code must be 4 characters, got {text!r}")
    if any(ch not in "01" for ch in text):
        raise InvalidCodeError(f"network code digits must be 0 or 1, got {text!r}")
    return NetworkCode(*(int(ch) for ch in text))


ALL_CODES = tuple(f"{i:04b}" for i in range(16))


@dataclass(frozen=True)
class TopologySpec:
    """Geometry of a structured reservoir."""

    num_fields: int
    columns_per_field: int = FIELD_COLUMNS
    neurons_per_column: int = 2
    membrane_time_constant: float = 1.0

    def __post_init__(self):
        if self.num_fields not in (1, 4):
            raise UnsupportedTopologyError(
                f"supported field counts are 1 and 4, got {self.num_fields}"
            )
        if self.columns_per_field < 1:
            raise ConfigurationError("columns_per_field must be >= 1")
        if self.membrane_time_constant <= 0:
            raise ConfigurationError("membrane_time_constant must be > 0")

    @property
    def n_units(self) -> int:
        return self.neurons_per_column * self.num_fields * self.columns_per_field

    @classmethod
    def for_code(cls, code: NetworkCode, tau_m: float = 1.0) -> "TopologySpec":
        if not code.is_structured:
            raise ConfigurationError("random variants carry no topology spec")
        return cls(num_fields=code.num_fields, membrane_time_constant=tau_m)


@dataclass
class Connectivity:
    """Reservoir weight matrix, input matrix and neuron partition labels.

    ``w`` is the combined, spectrally scaled matrix.  For structured variants
    the state is ordered [all excitatory; all inhibitory], field-major within
    each half.  Random variants carry trivial partition labels.
    """

    w: np.ndarray
    d: np.ndarray
    code: str
    seed: int
    excitatory: np.ndarray = field(repr=False)
    field_index: np.ndarray = field(repr=False)
    column_index: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.w.shape[0]

    @property
    def m(self) -> int:
        return self.d.shape[1]


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(stream)])


def build_random_connectivity(n: int, seed: int) -> np.ndarray:
    """Dense uniform(-1, 1) weight matrix, before spectral scaling."""
    if n < 1:
        raise EmptyNetworkError(f"network size must be >= 1, got {n}")
    return _rng(seed, 0).uniform(-1.0, 1.0, size=(n, n))


def _intra_field_kernel(n_cols: int, decay: float) -> np.ndarray:
    c = np.arange(n_cols)
    return np.exp(-np.abs(c[:, None] - c[None, :]) / decay)


def _topographic_band(n_cols: int, decay: float, rng: np.random.Generator) -> np.ndarray:
    dist = np.abs(np.arange(n_cols)[:, None] - np.arange(n_cols)[None, :])
    band = (dist <= _BAND_HALF_WIDTH)
    jitter = rng.uniform(_JITTER_LOW, _JITTER_HIGH, size=(n_cols, n_cols))
    return np.where(band, np.exp(-dist / decay) * jitter, 0.0)


def build_tonotopic_connectivity(spec: TopologySpec, seed: int):
    """Four block matrices (w_ee, w_ei, w_ie, w_ii) of a structured reservoir.

    Within a field, excitatory weights decay over a long tonotopic range and
    excitatory-to-inhibitory weights over a short one.  Inhibitory neurons
    connect only within their own column, so w_ii and w_ei are identity
    matrices.  In the four-field case the core (field 0) is reciprocally and
    topographically connected to the three belt fields, each direction with
    its own seeded jitter; belt fields do not talk to each other.
    """
    nf, nc = spec.num_fields, spec.columns_per_field
    half = nf * nc
    lam_e = nc * _LAMBDA_E_FRACTION
    lam_i = nc * _LAMBDA_I_FRACTION
    rng = _rng(seed, 2)

    w_ee = np.zeros((half, half))
    w_ie = np.zeros((half, half))
    k_e = _intra_field_kernel(nc, lam_e)
    k_i = _intra_field_kernel(nc, lam_i)
    for f in range(nf):
        sl = slice(f * nc, (f + 1) * nc)
        w_ee[sl, sl] = k_e
        w_ie[sl, sl] = k_i
    if nf == 4:
        core = slice(0, nc)
        for belt in range(1, 4):
            sl = slice(belt * nc, (belt + 1) * nc)
            w_ee[sl, core] = _topographic_band(nc, lam_e, rng)  # core -> belt
            w_ee[core, sl] = _topographic_band(nc, lam_e, rng)  # belt -> core
    w_ei = np.eye(half)
    w_ii = np.eye(half)
    return w_ee, w_ei, w_ie, w_ii


def assemble_combined(w_ee, w_ei, w_ie, w_ii, tau_m: float = 1.0) -> np.ndarray:
    """Stack the four blocks into the combined state matrix.

    Inhibitory source columns enter negated:
    W = (1/tau_m) [[w_ee, -w_ei], [w_ie, -w_ii]].
    """
    blocks = [np.asarray(b, dtype=float) for b in (w_ee, w_ei, w_ie, w_ii)]
    shape = blocks[0].shape
    if any(b.shape != shape for b in blocks) or shape[0] != shape[1]:
        raise ShapeError("all four blocks must be square with equal dimension")
    w_ee, w_ei, w_ie, w_ii = blocks
    top = np.hstack([w_ee, -w_ei])
    bottom = np.hstack([w_ie, -w_ii])
    return np.vstack([top, bottom]) / float(tau_m)


def spectral_radius(w: np.ndarray) -> float:
    """Largest eigenvalue magnitude (dense solve)."""
    return float(np.max(np.abs(np.linalg.eigvals(np.asarray(w, dtype=float)))))


def spectral_scale(w: np.ndarray) -> np.ndarray:
    """Rescale so the largest eigenvalue magnitude equals one."""
    w = np.asarray(w, dtype=float)
    rho = spectral_radius(w)
    scale = max(1.0, float(np.linalg.norm(w, np.inf)))
    if rho <= _SCALE_TOL * scale:
        raise DegenerateSpectrumError(
            f"spectral radius {rho:g} is numerically zero; cannot rescale"
        )
    return w / rho


def build_input_matrix(
    code: NetworkCode, n: int, m: int, seed: int, tau_m: float = 1.0
) -> np.ndarray:
    """Input matrix D for one variant.

    Random architectures use a dense uniform(-1, 1) matrix of whatever input
    dimension the domain implies.  Structured architectures feed only the
    core field: unit diagonals (scaled by 1/tau_m) route the real half of the
    spectral input into core excitatory rows and the imaginary half into core
    inhibitory rows; time-domain input broadcasts into all core excitatory
    rows.  All belt rows stay exactly zero.
    """
    if m != code.input_dim:
        raise ConfigurationError(
            f"input dimension {m} inconsistent with code {code} (expected {code.input_dim})"
        )
    if n != code.n_units:
        raise ConfigurationError(
            f"network size {n} inconsistent with code {code} (expected {code.n_units})"
        )
    if not code.is_structured:
        return _rng(seed, 1).uniform(-1.0, 1.0, size=(n, m))

    nc = FIELD_COLUMNS
    half = n // 2
    gain = 1.0 / float(tau_m)
    d = np.zeros((n, m))
    core_e = np.arange(nc)          # excitatory rows of field 0
    core_i = half + np.arange(nc)   # inhibitory rows of field 0
    if code.input_domain:
        d[core_e, np.arange(nc)] = gain
        d[core_i, nc + np.arange(nc)] = gain
    else:
        d[core_e, 0] = gain
    return d


def build_connectivity(code, seed: int, tau_m: float = 1.0) -> Connectivity:
    """Full connectivity (scaled W, input D, partition) for one variant."""
    if isinstance(code, str):
        code = parse_code(code)
    n = code.n_units
    if code.is_structured:
        spec = TopologySpec.for_code(code, tau_m)
        w_ee, w_ei, w_ie, w_ii = build_tonotopic_connectivity(spec, seed)
        w = spectral_scale(assemble_combined(w_ee, w_ei, w_ie, w_ii, tau_m))
        half = n // 2
        excit = np.arange(n) < half
        fidx = np.tile(np.repeat(np.arange(spec.num_fields), FIELD_COLUMNS), 2)
        cidx = np.tile(np.arange(FIELD_COLUMNS), 2 * spec.num_fields)
    else:
        w = spectral_scale(build_random_connectivity(n, seed))
        excit = np.ones(n, dtype=bool)
        fidx = np.zeros(n, dtype=int)
        cidx = np.arange(n)
    d = build_input_matrix(code, n, code.input_dim, seed, tau_m)
    return Connectivity(
        w=w, d=d, code=str(code), seed=int(seed),
        excitatory=excit, field_index=fidx, column_index=cidx,
    )


def save_connectivity_csv(conn: Connectivity, path) -> None:
    """Row-major dump of W then D with a small header, for fixture tests."""
    with open(path, "w") as fh:
        fh.write(f"# N={conn.n}\n# M={conn.m}\n# code={conn.code}\n# seed={conn.seed}\n")
        for row in conn.w:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
        for row in conn.d:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def load_connectivity_csv(path) -> Connectivity:
    header = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, value = line[1:].split("=", 1)
                header[key.strip()] = value.strip()
            else:
                rows.append([float(v) for v in line.split(",")])
    n, m = int(header["N"]), int(header["M"])
    code = parse_code(header["code"])
    w = np.array(rows[:n])
    d = np.array(rows[n:n + n])
    if w.shape != (n, n) or d.shape != (n, m):
        raise ShapeError("connectivity dump does not match its header")
    rebuilt = build_connectivity(code, int(header["seed"]))
    return Connectivity(
        w=w, d=d, code=str(code), seed=int(header["seed"]),
        excitatory=rebuilt.excitatory,
        field_index=rebuilt.field_index,
        column_index=rebuilt.column_index,
    )
