"""Finite-alphabet precoding toolkit for the massive MU-MIMO downlink."""

__version__ = "0.1.0"

from .alphabets import (
    ExplicitSet,
    FiniteAlphabet,
    PerDimensionLevels,
    PskPhases,
    hybrid_sumset,
    one_bit,
    psk,
    uniform_dac,
)
from .admm import IterationTrace, run_admm, run_admm2, run_admm3
from .complexity import (
    ALGORITHMS,
    COMPLEXITY_MODELS,
    ComplexityModel,
    predicted_multiplications,
)
from .exceptions import (
    CandidateBudgetError,
    ConfigError,
    DegenerateChannelError,
    SingularChannelError,
)
from .ide import (
    IdeConfig,
    PrecodeResult,
    ide2_run,
    ide_run,
    lmmse_matrix,
    unbiasing_matrix,
    update_beta,
)
from .linear import LinearPrecodeResult, quantized_wf, wf_precode, zf_precode
from .model import (
    SystemConfig,
    generate_channel,
    iui,
    mse_objective,
    perturb_channel,
    sample_cn,
    snr_to_sigma2,
    transmit,
)
from .modulation import Constellation, detect, get_constellation, modulate, square_qam
from .oracle import OracleResult, exhaustive_precode, exhaustive_with_beta
from .precoders import (
    AdmmPrecoder,
    ChannelPrecoder,
    Ide2Precoder,
    IdePrecoder,
    OraclePrecoder,
    QuantizedWfPrecoder,
    WfPrecoder,
    ZfPrecoder,
    available_solvers,
    make_precoder,
)
