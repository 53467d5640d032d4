"""Declarative experiment configuration.

Configs are flat key/value YAML documents carrying a `schema_version` field;
unknown keys are rejected.  Every field of ExperimentConfig is a valid key.
Grids are YAML lists.  The per-trial random streams are derived from
(`seed`, trial index, purpose counter), so results are independent of the
worker count.
"""

import hashlib
from dataclasses import asdict, dataclass, fields

import yaml

from ..alphabets import hybrid_sumset, one_bit, psk, uniform_dac
from ..exceptions import ConfigError
from ..ide import IdeConfig
from ..precoders import available_solvers

SCHEMA_VERSION = 1

KINDS = (
    "convergence",
    "ber-sweep",
    "iui-sweep",
    "csi-error",
    "oracle-gap",
    "psk-sweep",
    "complexity-table",
)

ALPHABET_KINDS = ("one-bit", "psk", "dac", "hybrid")

#: solvers that produce per-iteration traces (usable in the convergence study)
TRACED_SOLVERS = ("admm", "admm2", "admm3", "ide", "ide2")


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    seed: int = 20260801
    trials: int = 2000
    n_users: int = 16
    load_factors: tuple = (4,)
    constellation: str = "qpsk"
    alphabet: str = "one-bit"
    alphabet_bits: int = 1
    alphabet_psk_order: int = 4
    alphabet_n_rf: int = 1
    p_tx: float = 0.0  # 0 means the default 1/N
    snr_db: tuple = ()
    epsilon: tuple = ()
    psk_orders: tuple = ()
    solvers: tuple = ("ide", "ide2", "wf-quant")
    n_iter: int = 100
    alpha: float = 0.95
    gamma0: float = 1.0
    gamma: float = 1.0
    beta_mode: str = "adaptive"
    beta_value: float = 1.0
    beta_update_period: int = 10
    beta_min: float = 1e-6
    gamma_source: str = "damped"
    target_ber: float = 1e-3
    oracle_cap: int = 10_000_000
    squid_iters: int = 100
    c1po_iters: int = 24
    tbcep_psk_order: int = 4
    tbcep_memory_fractions: tuple = (0.1, 0.5, 0.9)

    def ide_config(self, beta_mode=None):
        return IdeConfig(
            n_iter=self.n_iter,
            alpha=self.alpha,
            gamma0=self.gamma0,
            beta_mode=beta_mode or self.beta_mode,
            beta_value=self.beta_value,
            beta_update_period=self.beta_update_period,
            beta_min=self.beta_min,
            gamma_source=self.gamma_source,
        )

    def p_tx_for(self, n_antennas):
        return self.p_tx if self.p_tx > 0 else 1.0 / n_antennas

    def validate(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.n_users < 1:
            raise ConfigError("n_users must be >= 1")
        if not self.load_factors or any(
            (not isinstance(r, int)) or r < 1 for r in self.load_factors
        ):
            raise ConfigError("load_factors must be a nonempty list of integers >= 1")
        if self.alphabet not in ALPHABET_KINDS:
            raise ConfigError(f"alphabet must be one of {ALPHABET_KINDS}")
        unknown = set(self.solvers) - set(available_solvers())
        if unknown:
            raise ConfigError(f"unknown solvers {sorted(unknown)}")
        if not self.solvers:
            raise ConfigError("solvers must be nonempty")
        try:
            self.ide_config()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.kind == "convergence":
            if self.trials != 1:
                raise ConfigError("the convergence study runs a single trial")
            if len(self.load_factors) != 1:
                raise ConfigError("the convergence study uses one load factor")
            bad = set(self.solvers) - set(TRACED_SOLVERS)
            if bad:
                raise ConfigError(
                    f"solvers without iteration traces: {sorted(bad)}"
                )
        elif self.kind in ("ber-sweep", "iui-sweep", "oracle-gap"):
            if not self.snr_db:
                raise ConfigError(f"{self.kind} needs a nonempty snr_db grid")
        elif self.kind == "csi-error":
            if len(self.snr_db) != 1:
                raise ConfigError("csi-error uses a single fixed snr_db value")
            if not self.epsilon:
                raise ConfigError("csi-error needs a nonempty epsilon grid")
            if any(not 0.0 <= e <= 1.0 for e in self.epsilon):
                raise ConfigError("epsilon values must lie in [0, 1]")
        elif self.kind == "psk-sweep":
            if not self.snr_db:
                raise ConfigError("psk-sweep needs a nonempty snr_db grid")
            if not self.psk_orders or any(m < 2 for m in self.psk_orders):
                raise ConfigError("psk-sweep needs PSK orders >= 2")
        return self


def _coerce(value, target):
    if isinstance(target, tuple):
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"expected a list, got {value!r}")
        return tuple(value)
    if isinstance(target, bool):  # pragma: no cover - no bool fields today
        return bool(value)
    if isinstance(target, int) and not isinstance(value, int):
        raise ConfigError(f"expected an integer, got {value!r}")
    if isinstance(target, float):
        if not isinstance(value, (int, float)):
            raise ConfigError(f"expected a number, got {value!r}")
        return float(value)
    if isinstance(target, str) and not isinstance(value, str):
        raise ConfigError(f"expected a string, got {value!r}")
    return value


def config_from_mapping(data, base=None):
    """Build a validated config from a flat mapping, overlaying `base`."""
    if not isinstance(data, dict):
        raise ConfigError("config document must be a flat mapping")
    data = dict(data)
    version = data.pop("schema_version", None)
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"schema_version must be {SCHEMA_VERSION}, got {version!r}"
        )
    known = {f.name: f for f in fields(ExperimentConfig)}
    unknown = set(data) - set(known)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    merged = asdict(base) if base is not None else {}
    defaults = ExperimentConfig(kind=data.get("kind", merged.get("kind", "ber-sweep")))
    for name, value in data.items():
        try:
            merged[name] = _coerce(value, getattr(defaults, name))
        except ConfigError as exc:
            raise ConfigError(f"key {name!r}: {exc}") from None
    # tuples may arrive as lists through asdict/yaml
    for name in merged:
        if isinstance(merged[name], list):
            merged[name] = tuple(merged[name])
    try:
        cfg = ExperimentConfig(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    return cfg.validate()


def load_config(path, base=None):
    """Load and validate a YAML config file."""
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if data is None:
        raise ConfigError(f"config file {path} is empty")
    return config_from_mapping(data, base=base)


def config_to_dict(cfg):
    """Flat, YAML/JSON-ready echo of a config, including the schema version."""
    out = {"schema_version": SCHEMA_VERSION}
    for f in fields(ExperimentConfig):
        value = getattr(cfg, f.name)
        out[f.name] = list(value) if isinstance(value, tuple) else value
    return out


def config_hash(cfg):
    """Stable short hash naming the results directory of a run."""
    blob = yaml.safe_dump(config_to_dict(cfg), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def alphabet_from_config(cfg, p_tx, psk_order=None):
    """Instantiate the finite alphabet described by a config."""
    kind = cfg.alphabet
    if kind == "one-bit":
        return one_bit(p_tx)
    if kind == "psk":
        return psk(psk_order or cfg.alphabet_psk_order, p_tx)
    if kind == "dac":
        return uniform_dac(cfg.alphabet_bits, p_tx)
    if kind == "hybrid":
        return hybrid_sumset(
            uniform_dac(cfg.alphabet_bits, p_tx),
            psk(psk_order or cfg.alphabet_psk_order, p_tx),
            cfg.alphabet_n_rf,
        )
    raise ConfigError(f"alphabet must be one of {ALPHABET_KINDS}")


def default_config(kind):
    """Desk-scale defaults reproducing the reference studies for each kind."""
    if kind == "convergence":
        return ExperimentConfig(
            kind=kind,
            trials=1,
            n_users=16,
            load_factors=(4,),
            alphabet="one-bit",
            solvers=("admm", "admm2", "admm3", "ide", "ide2"),
            beta_mode="fixed",
            beta_value=1.0,
        ).validate()
    if kind in ("ber-sweep", "iui-sweep"):
        return ExperimentConfig(
            kind=kind,
            trials=2000,
            n_users=16,
            load_factors=(4, 8),
            alphabet="one-bit",
            snr_db=(0.0, 2.0, 4.0, 6.0, 8.0, 10.0),
            solvers=("ide", "ide2", "wf-quant", "wf"),
            beta_mode="adaptive",
        ).validate()
    if kind == "csi-error":
        return ExperimentConfig(
            kind=kind,
            trials=2000,
            n_users=16,
            load_factors=(4,),
            alphabet="one-bit",
            snr_db=(12.0,),
            epsilon=(0.0, 0.2, 0.4, 0.6, 0.8, 1.0),
            solvers=("ide", "ide2", "wf-quant"),
            beta_mode="fixed",
            beta_value=1.0,
        ).validate()
    if kind == "oracle-gap":
        return ExperimentConfig(
            kind=kind,
            trials=10_000,
            n_users=2,
            load_factors=(4,),
            alphabet="psk",
            alphabet_psk_order=4,
            snr_db=(0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0),
            solvers=("oracle", "ide", "ide2"),
            beta_mode="adaptive",
        ).validate()
    if kind == "psk-sweep":
        return ExperimentConfig(
            kind=kind,
            trials=2000,
            n_users=16,
            load_factors=(4,),
            alphabet="psk",
            snr_db=(0.0, 2.0, 4.0, 6.0, 8.0, 10.0),
            psk_orders=(4, 8),
            solvers=("ide", "ide2"),
            beta_mode="fixed",
            beta_value=1.0,
        ).validate()
    if kind == "complexity-table":
        return ExperimentConfig(
            kind=kind,
            trials=1,
            n_users=16,
            load_factors=(4, 8),
        ).validate()
    raise ConfigError(f"unknown experiment kind {kind!r}")
