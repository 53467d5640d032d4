"""Experiment runners: seeded trial execution, worker pool, aggregation.

Per-trial randomness comes from numpy SeedSequence([seed, trial, purpose])
with purpose counters 0..3 for channel, data bits, channel perturbation and
receiver noise.  Workers only change scheduling: tasks are mapped in order
and aggregated by trial index, so outputs are byte-identical for any worker
count.
"""

import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .. import __version__
from ..complexity import predicted_multiplications, tbcep_multiplications
from ..exceptions import ConfigError
from ..ide import PrecodeResult
from ..model import generate_channel, iui, perturb_channel, sample_cn, snr_to_sigma2
from ..modulation import detect, get_constellation, modulate
from ..precoders import make_precoder
from .config import alphabet_from_config, config_to_dict
from .results import SolverMetrics, SweepResult, SweepRow, TrialRecord, to_db

PURPOSE_CHANNEL, PURPOSE_BITS, PURPOSE_PERTURB, PURPOSE_NOISE = range(4)


def trial_rng(seed, trial, purpose):
    """Independent per-(trial, purpose) random stream; the documented scheme."""
    return np.random.default_rng(np.random.SeedSequence([seed, trial, purpose]))


def _map_ordered(fn, tasks, workers):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    chunk = max(1, len(tasks) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=chunk))


def _draw_instance(cfg, n_users, n_antennas, trial, const):
    H = generate_channel(n_users, n_antennas, trial_rng(cfg.seed, trial, PURPOSE_CHANNEL))
    bits = trial_rng(cfg.seed, trial, PURPOSE_BITS).integers(
        0, 2, n_users * const.bits_per_symbol
    )
    s = modulate(bits, const)
    z_unit = sample_cn(trial_rng(cfg.seed, trial, PURPOSE_NOISE), n_users)
    return H, bits, s, z_unit


def _build_precoders(cfg, alphabet, p_tx):
    return {
        name: make_precoder(
            name,
            alphabet=alphabet,
            p_tx=p_tx,
            sigma2=0.0,
            ide_config=cfg.ide_config(),
            gamma=cfg.gamma,
            cap=cfg.oracle_cap,
        )
        for name in cfg.solvers
    }


def _solve_and_detect(pre, H_true, s, bits, z_unit, sigma2, const):
    if "sigma2" in pre.get_params():
        pre.set_params(sigma2=sigma2)
    res = pre.precode(s)
    y = H_true @ res.x + math.sqrt(sigma2) * z_unit
    _, bhat = detect(y, res.beta, const)
    residual = iui(s, res.beta, H_true, res.x)
    return SolverMetrics(
        iui=residual,
        mse=residual + res.beta**2 * len(s) * sigma2,
        beta=res.beta,
        bit_errors=int(np.sum(bhat != bits)),
        bits_sent=int(bits.size),
    )


def _sweep_trial(args):
    """One trial of a ber/iui/psk/oracle-gap sweep at one load factor.

    Returns {grid_key_tuple: TrialRecord}; the channel, data bits and unit
    noise draw are shared across the grid (common random numbers), and each
    precoder is fitted to the channel once and reused across noise levels.
    """
    cfg, load_factor, trial = args
    K = cfg.n_users
    N = load_factor * K
    p_tx = cfg.p_tx_for(N)
    const = get_constellation(cfg.constellation)
    H, bits, s, z_unit = _draw_instance(cfg, K, N, trial, const)
    psk_orders = cfg.psk_orders if cfg.kind == "psk-sweep" else (None,)
    out = {}
    for order in psk_orders:
        alphabet = alphabet_from_config(cfg, p_tx, psk_order=order)
        precoders = _build_precoders(cfg, alphabet, p_tx)
        for pre in precoders.values():
            pre.fit(H)
        for snr_db in cfg.snr_db:
            sigma2 = snr_to_sigma2(snr_db, N, p_tx)
            results = {
                name: _solve_and_detect(pre, H, s, bits, z_unit, sigma2, const)
                for name, pre in precoders.items()
            }
            key = (load_factor, snr_db) if order is None else (load_factor, order, snr_db)
            out[key] = TrialRecord(trial=trial, seed=cfg.seed, results=results)
    return out


def _csi_trial(args):
    """One trial of the channel-error study: precode on the perturbed channel,
    transmit through the true one."""
    cfg, load_factor, trial = args
    K = cfg.n_users
    N = load_factor * K
    p_tx = cfg.p_tx_for(N)
    const = get_constellation(cfg.constellation)
    H, bits, s, z_unit = _draw_instance(cfg, K, N, trial, const)
    alphabet = alphabet_from_config(cfg, p_tx)
    sigma2 = snr_to_sigma2(cfg.snr_db[0], N, p_tx)
    out = {}
    for eps in cfg.epsilon:
        # rebuilding the stream gives every epsilon the same error matrix
        H_hat = perturb_channel(H, eps, trial_rng(cfg.seed, trial, PURPOSE_PERTURB))
        precoders = _build_precoders(cfg, alphabet, p_tx)
        results = {}
        for name, pre in precoders.items():
            pre.fit(H_hat)
            results[name] = _solve_and_detect(pre, H, s, bits, z_unit, sigma2, const)
        out[(eps,)] = TrialRecord(trial=trial, seed=cfg.seed, results=results)
    return out


def _aggregate(cfg, grid_var_name, grid_keys, per_trial, notes=None):
    """Pool trial records into a SweepResult; BER is pooled bit errors over
    pooled bits, IUI is the dB of the trial-mean residual."""
    totals = {}
    for record_map in per_trial:
        for key, record in record_map.items():
            for solver, m in record.results.items():
                acc = totals.setdefault(
                    (key, solver), {"err": 0, "bits": 0, "iui": 0.0, "beta": 0.0, "n": 0}
                )
                acc["err"] += m.bit_errors
                acc["bits"] += m.bits_sent
                acc["iui"] += m.iui
                acc["beta"] += m.beta
                acc["n"] += 1
    rows = []
    for key in grid_keys:
        for solver in cfg.solvers:
            acc = totals[(key, solver)]
            rows.append(
                SweepRow(
                    solver=solver,
                    grid_value=",".join(str(v) for v in key),
                    ber=acc["err"] / acc["bits"],
                    iui_db=to_db(acc["iui"] / acc["n"]),
                    beta_mean=acc["beta"] / acc["n"],
                    trials=acc["n"],
                    bit_errors=acc["err"],
                    bits=acc["bits"],
                )
            )
    return SweepResult(
        experiment=cfg.kind,
        grid_var_name=grid_var_name,
        seed=cfg.seed,
        version=__version__,
        config=config_to_dict(cfg),
        rows=tuple(rows),
        notes=notes or {},
    )


def run_sweep(cfg, workers=1):
    """ber-sweep / iui-sweep / psk-sweep / oracle-gap trial loop."""
    tasks = [
        (cfg, R, trial) for R in cfg.load_factors for trial in range(cfg.trials)
    ]
    per_trial = _map_ordered(_sweep_trial, tasks, workers)
    if cfg.kind == "psk-sweep":
        grid_var_name = "load_factor,psk_order,snr_db"
        grid_keys = [
            (R, m, snr)
            for R in cfg.load_factors
            for m in cfg.psk_orders
            for snr in cfg.snr_db
        ]
    else:
        grid_var_name = "load_factor,snr_db"
        grid_keys = [(R, snr) for R in cfg.load_factors for snr in cfg.snr_db]
    return _aggregate(cfg, grid_var_name, grid_keys, per_trial)


def snr_at_target_ber(snrs, bers, target):
    """SNR where the BER curve crosses `target`, log-linear in BER.

    Returns None when the curve does not bracket the target.
    """
    for i in range(len(snrs) - 1):
        b0, b1 = bers[i], bers[i + 1]
        if b0 > 0 and b1 > 0 and b0 >= target >= b1:
            if b0 == b1:
                return float(snrs[i])
            t = (math.log10(target) - math.log10(b0)) / (
                math.log10(b1) - math.log10(b0)
            )
            return float(snrs[i] + t * (snrs[i + 1] - snrs[i]))
    return None


def run_oracle_gap(cfg, workers=1):
    """Small-system sweep against the exhaustive optimum, reporting the SNR
    gap of each solver at the target BER."""
    result = run_sweep(cfg, workers=workers)
    R = cfg.load_factors[0]
    curves = {
        solver: [
            next(r for r in result.rows if r.solver == solver and r.grid_value == f"{R},{snr}")
            for snr in cfg.snr_db
        ]
        for solver in cfg.solvers
    }
    notes = {}
    for solver, rows in curves.items():
        at = snr_at_target_ber(list(cfg.snr_db), [r.ber for r in rows], cfg.target_ber)
        notes[f"snr_at_target_{solver}"] = at
    oracle_at = notes.get("snr_at_target_oracle")
    if oracle_at is not None:
        for solver in cfg.solvers:
            at = notes[f"snr_at_target_{solver}"]
            if solver != "oracle" and at is not None:
                notes[f"snr_gap_db_{solver}_vs_oracle"] = at - oracle_at
    notes["target_ber"] = cfg.target_ber
    return SweepResult(
        experiment=result.experiment,
        grid_var_name=result.grid_var_name,
        seed=result.seed,
        version=result.version,
        config=result.config,
        rows=result.rows,
        notes=notes,
    )


def run_csi_error(cfg, workers=1):
    tasks = [
        (cfg, R, trial) for R in cfg.load_factors for trial in range(cfg.trials)
    ]
    per_trial = _map_ordered(_csi_trial, tasks, workers)
    grid_keys = [(eps,) for eps in cfg.epsilon]
    return _aggregate(cfg, "epsilon", grid_keys, per_trial)


def run_convergence(cfg):
    """Single seeded instance; every solver's per-iteration residual trace."""
    R = cfg.load_factors[0]
    K = cfg.n_users
    N = R * K
    p_tx = cfg.p_tx_for(N)
    const = get_constellation(cfg.constellation)
    H, _, s, _ = _draw_instance(cfg, K, N, 0, const)
    alphabet = alphabet_from_config(cfg, p_tx)
    rows = []
    for name in cfg.solvers:
        pre = make_precoder(
            name,
            alphabet=alphabet,
            p_tx=p_tx,
            sigma2=0.0,
            ide_config=cfg.ide_config(),
            gamma=cfg.gamma,
            cap=cfg.oracle_cap,
        )
        res: PrecodeResult = pre.fit(H).precode(s)
        for t, value in enumerate(res.iui_trace, start=1):
            rows.append(
                SweepRow(
                    solver=name,
                    grid_value=str(t),
                    ber=None,
                    iui_db=to_db(float(value)),
                    beta_mean=res.beta,
                    trials=1,
                    bit_errors=0,
                    bits=0,
                )
            )
    return SweepResult(
        experiment=cfg.kind,
        grid_var_name="iteration",
        seed=cfg.seed,
        version=__version__,
        config=config_to_dict(cfg),
        rows=tuple(rows),
    )


def run_complexity_table(cfg):
    """Predicted multiplication totals in the published table's shape."""
    iters = {
        "SQUID": cfg.squid_iters,
        "C1PO": cfg.c1po_iters,
        "IDE": cfg.n_iter,
        "IDE2": cfg.n_iter,
    }
    rows = []
    for algorithm in ("SQUID", "C1PO", "IDE", "IDE2"):
        for R in cfg.load_factors:
            N = R * cfg.n_users
            count = predicted_multiplications(algorithm, N, cfg.n_users, iters[algorithm])
            rows.append(
                {
                    "algorithm": algorithm,
                    "n_antennas": N,
                    "n_users": cfg.n_users,
                    "iterations": iters[algorithm],
                    "psk_order": None,
                    "memory_length": None,
                    "multiplications": count,
                }
            )
    for frac in cfg.tbcep_memory_fractions:
        for R in cfg.load_factors:
            N = R * cfg.n_users
            L = round(frac * N)
            rows.append(
                {
                    "algorithm": "TB-CEP",
                    "n_antennas": N,
                    "n_users": cfg.n_users,
                    "iterations": None,
                    "psk_order": cfg.tbcep_psk_order,
                    "memory_length": L,
                    "multiplications": tbcep_multiplications(
                        N, cfg.n_users, cfg.tbcep_psk_order, L
                    ),
                }
            )
    return rows


def run_experiment(cfg, workers=1):
    """Dispatch a validated config to its runner."""
    cfg.validate()
    if cfg.kind == "convergence":
        return run_convergence(cfg)
    if cfg.kind in ("ber-sweep", "iui-sweep", "psk-sweep"):
        return run_sweep(cfg, workers=workers)
    if cfg.kind == "oracle-gap":
        return run_oracle_gap(cfg, workers=workers)
    if cfg.kind == "csi-error":
        return run_csi_error(cfg, workers=workers)
    if cfg.kind == "complexity-table":
        return run_complexity_table(cfg)
    raise ConfigError(f"unknown experiment kind {cfg.kind!r}")
