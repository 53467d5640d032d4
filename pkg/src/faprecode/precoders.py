"""Estimator-style precoder interface.

Every precoder follows the scikit-learn convention: hyperparameters go to
``__init__`` verbatim, ``fit(H)`` binds the precoder to one channel
realization, ``precode(s)`` maps a single symbol vector to a full result
object, and ``transform(S)`` maps rows of an (n_trials, K) symbol matrix to
rows of an (n_trials, N) transmit matrix (per-row precoding factors are kept
in ``betas_``).  ``get_params``/``set_params``/``clone`` work as usual.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from . import oracle as oracle_mod
from .admm import run_admm, run_admm2, run_admm3
from .exceptions import CandidateBudgetError
from .ide import IdeConfig, PrecodeResult, ide2_run, ide_run
from .linear import quantized_wf, wf_precode, zf_precode
from .oracle import DEFAULT_CAP, exhaustive_precode, exhaustive_with_beta
from .validation import as_channel_matrix


class ChannelPrecoder(BaseEstimator):
    """Base class: channel binding, validation and the batch transform."""

    def fit(self, H, y=None):
        """Bind to a channel realization H (users x antennas)."""
        H = as_channel_matrix(H)
        self.channel_ = H
        self.n_users_, self.n_antennas_ = H.shape
        return self

    def _fitted_channel(self):
        if not hasattr(self, "channel_"):
            raise NotFittedError(
                f"{type(self).__name__} is not fitted; call fit(H) first"
            )
        return self.channel_

    def precode(self, s):
        raise NotImplementedError

    def transform(self, S):
        """Precode each row of S; returns the (n_trials, N) transmit matrix."""
        H = self._fitted_channel()
        S = np.asarray(S, dtype=np.complex128)
        single = S.ndim == 1
        S = np.atleast_2d(S)
        X = np.empty((S.shape[0], H.shape[1]), dtype=np.complex128)
        betas = np.empty(S.shape[0])
        for i, s in enumerate(S):
            res = self.precode(s)
            X[i] = res.x
            betas[i] = res.beta
        self.betas_ = betas
        return X[0] if single else X


class ZfPrecoder(ChannelPrecoder):
    """Zero-forcing baseline (infinite resolution)."""

    def __init__(self, p_tx=1.0):
        self.p_tx = p_tx

    def precode(self, s):
        return zf_precode(self._fitted_channel(), s, self.p_tx)


class WfPrecoder(ChannelPrecoder):
    """Regularized linear baseline (infinite resolution)."""

    def __init__(self, p_tx=1.0, sigma2=0.0):
        self.p_tx = p_tx
        self.sigma2 = sigma2

    def precode(self, s):
        return wf_precode(self._fitted_channel(), s, self.p_tx, self.sigma2)


class QuantizedWfPrecoder(ChannelPrecoder):
    """Regularized baseline followed by direct projection onto the alphabet."""

    def __init__(self, alphabet=None, p_tx=1.0, sigma2=0.0, beta_min=1e-6):
        self.alphabet = alphabet
        self.p_tx = p_tx
        self.sigma2 = sigma2
        self.beta_min = beta_min

    def precode(self, s):
        if self.alphabet is None:
            raise ValueError("QuantizedWfPrecoder requires an alphabet")
        return quantized_wf(
            self._fitted_channel(),
            s,
            self.p_tx,
            self.sigma2,
            self.alphabet,
            beta_min=self.beta_min,
        )


class _IterativePrecoder(ChannelPrecoder):
    def __init__(
        self,
        alphabet=None,
        sigma2=0.0,
        n_iter=100,
        alpha=0.95,
        gamma0=1.0,
        beta_mode="adaptive",
        beta_value=1.0,
        beta_update_period=10,
        beta_min=1e-6,
        gamma_source="damped",
    ):
        self.alphabet = alphabet
        self.sigma2 = sigma2
        self.n_iter = n_iter
        self.alpha = alpha
        self.gamma0 = gamma0
        self.beta_mode = beta_mode
        self.beta_value = beta_value
        self.beta_update_period = beta_update_period
        self.beta_min = beta_min
        self.gamma_source = gamma_source

    def _config(self):
        if self.alphabet is None:
            raise ValueError(f"{type(self).__name__} requires an alphabet")
        return IdeConfig(
            n_iter=self.n_iter,
            alpha=self.alpha,
            gamma0=self.gamma0,
            beta_mode=self.beta_mode,
            beta_value=self.beta_value,
            beta_update_period=self.beta_update_period,
            beta_min=self.beta_min,
            gamma_source=self.gamma_source,
        )


class IdePrecoder(_IterativePrecoder):
    """Adaptive-penalty estimation-projection solver (full variant)."""

    def precode(self, s):
        return ide_run(
            self._fitted_channel(), s, self.alphabet, self._config(), self.sigma2
        )


class Ide2Precoder(_IterativePrecoder):
    """Inversion-free estimation-projection solver (low-complexity variant)."""

    def precode(self, s):
        return ide2_run(
            self._fitted_channel(), s, self.alphabet, self._config(), self.sigma2
        )


class AdmmPrecoder(ChannelPrecoder):
    """Consensus-splitting solver family, run at a fixed precoding factor."""

    _RUNNERS = {"admm": run_admm, "admm2": run_admm2, "admm3": run_admm3}

    def __init__(
        self, alphabet=None, variant="admm", gamma=1.0, alpha=0.95, n_iter=100,
        beta_value=1.0,
    ):
        self.alphabet = alphabet
        self.variant = variant
        self.gamma = gamma
        self.alpha = alpha
        self.n_iter = n_iter
        self.beta_value = beta_value

    def precode(self, s):
        if self.alphabet is None:
            raise ValueError("AdmmPrecoder requires an alphabet")
        try:
            runner = self._RUNNERS[self.variant]
        except KeyError:
            raise ValueError(
                f"unknown variant {self.variant!r}, expected one of "
                f"{sorted(self._RUNNERS)}"
            ) from None
        Ht = self.beta_value * self._fitted_channel()
        kwargs = {"gamma": self.gamma, "n_iter": self.n_iter}
        if self.variant != "admm":
            kwargs["alpha"] = self.alpha
        trace = runner(Ht, s, self.alphabet, **kwargs)
        return PrecodeResult(
            x=trace.x,
            beta=self.beta_value,
            iui_trace=trace.iui,
            iterations=trace.iterations,
            mult_count=None,
        )


class OraclePrecoder(ChannelPrecoder):
    """Exhaustive search over X^N; joint over the precoding factor unless
    beta_mode = "fixed".

    Fitting precomputes the candidate products H @ x for the whole feasible
    set when it is small enough to hold in memory, so repeated precoding of
    different symbol vectors (or noise levels) against one channel is cheap.
    """

    def __init__(
        self, alphabet=None, sigma2=0.0, beta_mode="adaptive", beta_value=1.0,
        beta_min=1e-6, cap=DEFAULT_CAP,
    ):
        self.alphabet = alphabet
        self.sigma2 = sigma2
        self.beta_mode = beta_mode
        self.beta_value = beta_value
        self.beta_min = beta_min
        self.cap = cap

    def fit(self, H, y=None):
        super().fit(H)
        if self.alphabet is None:
            raise ValueError("OraclePrecoder requires an alphabet")
        total = oracle_mod.candidate_count(self.alphabet, self.n_antennas_)
        if total > self.cap:
            raise CandidateBudgetError(total, self.cap)
        self._scan_cache_ = None
        if total <= oracle_mod._CACHE_LIMIT:
            _, cand = next(oracle_mod.iter_candidates(self.alphabet, self.n_antennas_))
            P = cand @ self.channel_.T
            q = np.einsum("bk,bk->b", P.conj(), P).real
            self._scan_cache_ = (cand, P, q, total)
        return self

    def precode(self, s):
        H = self._fitted_channel()
        if self._scan_cache_ is None:
            if self.beta_mode == "fixed":
                res = exhaustive_precode(
                    self.beta_value * H, s, self.alphabet, cap=self.cap
                )
                beta = self.beta_value
            else:
                res = exhaustive_with_beta(
                    H, s, self.alphabet, self.sigma2, cap=self.cap,
                    beta_min=self.beta_min,
                )
                beta = res.beta_star
        else:
            cand, P, q, total = self._scan_cache_
            if self.beta_mode == "fixed":
                obj = oracle_mod.score_fixed_beta(self.beta_value * P, s)
                i = int(np.argmin(obj))
                beta = self.beta_value
            else:
                obj, betas = oracle_mod.score_joint_beta(
                    P, q, s, H.shape[0], self.sigma2, self.beta_min
                )
                i = int(np.argmin(obj))
                beta = float(betas[i])
            res = oracle_mod.OracleResult(
                x_star=cand[i].copy(),
                objective=float(obj[i]),
                candidates_evaluated=total,
                beta_star=None if self.beta_mode == "fixed" else beta,
            )
        return PrecodeResult(
            x=res.x_star,
            beta=beta,
            iui_trace=np.asarray([res.objective]),
            iterations=1,
            mult_count=None,
        )


#: harness-facing registry of solver names
PRECODERS = {
    "zf": ZfPrecoder,
    "wf": WfPrecoder,
    "wf-quant": QuantizedWfPrecoder,
    "ide": IdePrecoder,
    "ide2": Ide2Precoder,
    "admm": AdmmPrecoder,
    "admm2": AdmmPrecoder,
    "admm3": AdmmPrecoder,
    "oracle": OraclePrecoder,
}


def available_solvers():
    return tuple(sorted(PRECODERS))


def make_precoder(name, *, alphabet, p_tx, sigma2, ide_config, gamma=1.0, cap=DEFAULT_CAP):
    """Build a ready-to-fit precoder for a harness solver name."""
    if name == "zf":
        return ZfPrecoder(p_tx=p_tx)
    if name == "wf":
        return WfPrecoder(p_tx=p_tx, sigma2=sigma2)
    if name == "wf-quant":
        return QuantizedWfPrecoder(
            alphabet=alphabet, p_tx=p_tx, sigma2=sigma2, beta_min=ide_config.beta_min
        )
    if name in ("ide", "ide2"):
        cls = IdePrecoder if name == "ide" else Ide2Precoder
        return cls(
            alphabet=alphabet,
            sigma2=sigma2,
            n_iter=ide_config.n_iter,
            alpha=ide_config.alpha,
            gamma0=ide_config.gamma0,
            beta_mode=ide_config.beta_mode,
            beta_value=ide_config.beta_value,
            beta_update_period=ide_config.beta_update_period,
            beta_min=ide_config.beta_min,
            gamma_source=ide_config.gamma_source,
        )
    if name in ("admm", "admm2", "admm3"):
        return AdmmPrecoder(
            alphabet=alphabet,
            variant=name,
            gamma=gamma,
            alpha=ide_config.alpha,
            n_iter=ide_config.n_iter,
            beta_value=ide_config.beta_value,
        )
    if name == "oracle":
        return OraclePrecoder(
            alphabet=alphabet,
            sigma2=sigma2,
            beta_mode=ide_config.beta_mode,
            beta_value=ide_config.beta_value,
            beta_min=ide_config.beta_min,
            cap=cap,
        )
    raise ValueError(f"unknown solver {name!r}, expected one of {available_solvers()}")
