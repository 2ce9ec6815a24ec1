"""Self-contained analysis reports shared by the CLI and the HTTP service.

Schema ``netinform-report/1``.  Reports embed the canonical input documents,
the options and seeds that produced them, and carry no timing fields, so the
same inputs always serialize to the same bytes.
"""

from __future__ import annotations

import hashlib
import json

from . import __version__
from .freqgrid import make_grid
from .graph import derive_sets
from .inform import (
    EXIT_CODES,
    check_shi_identifiability,
    check_theorem2,
    compare_informativity_vs_identifiability,
    generic_rank_probe,
)
from .model import Network, PredictorModel, load, save, validate, validate_predictor

SCHEMA = "netinform-report/1"


def _np_default(o):
    import numpy as np

    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _digest(doc: dict) -> str:
    return hashlib.sha256(
        json.dumps(doc, sort_keys=True, default=_np_default).encode("utf-8")
    ).hexdigest()


def render(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, default=_np_default)


def _base(net: Network, pred: PredictorModel | None, options: dict) -> dict:
    doc = save(net, pred)
    return {
        "schema": SCHEMA,
        "tool_version": __version__,
        "input": doc,
        "input_digest": _digest(doc),
        "options": options,
    }


def validation_report(net: Network, pred: PredictorModel | None = None) -> dict:
    rep = _base(net, pred, {})
    rep["validation"] = validate(net).to_dict()
    if pred is not None:
        rep["predictor_validation"] = validate_predictor(net, pred).to_dict()
    return rep


def check_report(net: Network, pred: PredictorModel, mode: str = "both",
                 grid: int = 256, tol: float = 1e-8, probe: int = 0,
                 seed: int = 0, max_card: int = 6) -> tuple[dict, int]:
    """Full verdict bundle with evidence; returns (report, exit_code)."""
    options = {"mode": mode, "grid": grid, "tol": tol, "probe": probe,
               "seed": seed, "max_card": max_card}
    pred = pred.ensure_param_map(net)
    rep = _base(net, pred, options)
    omega = make_grid(grid)
    verdicts = check_theorem2(net, pred, mode=mode, omega=omega, tol=tol,
                              max_card=max_card)
    ident = check_shi_identifiability(net, pred, max_card=max_card)
    comparison = compare_informativity_vs_identifiability(net, pred,
                                                          max_card=max_card)
    rep["verdicts"] = {k: v.to_dict() for k, v in verdicts.items()}
    rep["verdicts"]["identifiability"] = ident.to_dict()
    rep["comparison"] = {
        "agree": comparison["agree"],
        "miso": comparison["miso"],
        "explanation": comparison["explanation"],
    }
    bundle = derive_sets(net, pred, max_card=max_card)
    rep["sets"] = bundle.to_dict()
    if bundle["w_T"].members:
        from .immersion import decompose_Ts_Rs

        try:
            rep["immersion"] = decompose_Ts_Rs(net, bundle, omega).to_dict()
        except Exception as exc:  # structural violations surface in the report
            rep["immersion"] = {"error": str(exc)}
    if probe > 0:
        rep["probe"] = generic_rank_probe(net, pred, trials=probe, seed=seed,
                                          omega=make_grid(min(grid, 128)),
                                          tol=tol)
    # NotSatisfied dominates Inconclusive which dominates Satisfied.
    codes = [EXIT_CODES[v.result] for v in verdicts.values()]
    if 1 in codes:
        exit_code = 1
    elif 2 in codes:
        exit_code = 2
    else:
        exit_code = 0
    return rep, exit_code


def sets_report(net: Network, pred: PredictorModel, max_card: int = 6) -> dict:
    pred = pred.ensure_param_map(net)
    rep = _base(net, pred, {"max_card": max_card})
    rep["sets"] = derive_sets(net, pred, max_card=max_card).to_dict()
    return rep


def probe_report(net: Network, pred: PredictorModel, trials: int, seed: int,
                 grid: int = 128, tol: float = 1e-8) -> dict:
    pred = pred.ensure_param_map(net)
    rep = _base(net, pred, {"trials": trials, "seed": seed, "grid": grid,
                            "tol": tol})
    rep["probe"] = generic_rank_probe(net, pred, trials=trials, seed=seed,
                                      omega=make_grid(grid), tol=tol)
    return rep


def experiment_report(net: Network, pred: PredictorModel, N_grid: list[int],
                      runs: int, seed: int, jobs: int = 1,
                      restarts: int = 3, progress=None) -> dict:
    from .harness import consistency_experiment

    options = {"N_grid": list(N_grid), "runs": runs, "seed": seed,
               "jobs": jobs, "restarts": restarts}
    pred = pred.ensure_param_map(net)
    rep = _base(net, pred, options)
    result = consistency_experiment(net, pred, list(N_grid), runs=runs,
                                    seed=seed, jobs=jobs, restarts=restarts,
                                    progress=progress)
    rep["experiment"] = result.to_dict()
    rep["experiment_csv"] = result.to_csv()
    return rep


def parse_predictor_doc(doc: dict, net: Network) -> PredictorModel:
    """Predictor from a standalone document, wrapped or bare."""
    wrapped = doc if "predictor" in doc else {"predictor": doc}
    wrapped = {"nodes": list(net.w_labels),
               "excitations": save(net)["excitations"], **wrapped}
    _, pred = load(wrapped)
    if pred is None:
        raise ValueError("document carries no predictor")
    return pred
