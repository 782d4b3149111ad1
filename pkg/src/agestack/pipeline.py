"""Filesystem-free pipeline commands behind the service and CLI.

Each run_* function takes the raw config text, a seed, and named input
file contents, and returns output file contents plus a meta block. No
function reads or writes the filesystem (harvest's temporary spool is
the one internal exception), so the same code serves HTTP requests and
in-process CLI calls identically.

Every run returns a run.meta.json recording the command, the resolved
section parameters, the seed, a sha256 config digest, and a sha256 per
output file. Formats that tolerate comments (SVG, text tables) also
carry the digest inline; the schema-bound CSVs stay clean so they keep
passing the strict parsers.
"""

from __future__ import annotations

import configparser
import hashlib
import json
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from agestack import __version__
from agestack.core.curation import curate_balanced
from agestack.core.io import (
    parse_manifest,
    parse_predictions,
    parse_records,
    render_manifest,
    render_predictions,
)
from agestack.core.types import Manifest, Prediction
from agestack.errors import DataError, UsageError
from agestack.estimators.harvest import harvest
from agestack.estimators.remote import RemoteAdapter, RemoteClient, RemoteConfig
from agestack.estimators.replay import ReplayAdapter
from agestack.estimators.simulator import default_profiles, parse_profiles, simulate
from agestack.metrics import PairedSample, band_accuracy, compare_services
from agestack.reporting.figures import fig_band_accuracy, fig_mae_by_age, fig_mean_by_age
from agestack.reporting.tables import (
    render_band_table_csv,
    render_band_table_text,
    render_mae_table_csv,
    render_mae_table_text,
)
from agestack.stacking import LearnerSpec, assemble, oof_predictions, plan_folds, stack_oof

# Config keys that name input files; the CLI resolves them client-side,
# so every section may carry them alongside its own parameters.
INPUT_PATH_KEYS = {"candidates", "manifest", "predictions", "replay", "profiles"}

LEARNER_PARAM_KEYS = {
    "tree": {"max_depth", "min_samples_split"},
    "gbr": {"n_stages", "learning_rate", "max_depth", "min_samples_split"},
    "bagging": {"n_members", "max_depth", "min_samples_split"},
    "logistic": {"epochs", "step", "l2_lambda"},
}

_INT_PARAMS = {"max_depth", "min_samples_split", "n_stages", "n_members", "epochs"}


@dataclass(frozen=True)
class RunResult:
    files: dict[str, str]
    meta: dict


def check_seed(seed: int) -> int:
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2**64:
        raise UsageError(f"seed must be an integer in [0, 2^64), got {seed!r}")
    return seed


def parse_section(config_text: str, section: str) -> dict[str, str]:
    parser = configparser.ConfigParser()
    try:
        parser.read_string(config_text)
    except configparser.Error as exc:
        raise UsageError(f"unparseable config: {exc}") from None
    if section not in parser:
        raise UsageError(f"config is missing the [{section}] section")
    return dict(parser[section])


def config_digest(command: str, params: Mapping[str, str], seed: int) -> str:
    canonical = json.dumps(
        {"command": command, "params": dict(sorted(params.items())), "seed": seed},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _stamp_inline(name: str, content: str, digest: str, seed: int) -> str:
    note = f"config-digest {digest} seed {seed}"
    if name.endswith(".svg"):
        return content + f"<!-- {note} -->\n"
    if name.endswith(".txt"):
        return content + f"# {note}\n"
    return content


def _finalize(
    command: str, params: Mapping[str, str], seed: int, files: dict[str, str]
) -> RunResult:
    digest = config_digest(command, params, seed)
    stamped = {n: _stamp_inline(n, c, digest, seed) for n, c in files.items()}
    meta = {
        "command": command,
        "config": dict(sorted(params.items())),
        "config_digest": digest,
        "outputs": {
            n: hashlib.sha256(c.encode("utf-8")).hexdigest() for n, c in sorted(stamped.items())
        },
        "seed": seed,
        "version": __version__,
    }
    stamped[f"{command}.meta.json"] = json.dumps(meta, sort_keys=True, indent=2) + "\n"
    return RunResult(files=stamped, meta=meta)


def _require_input(inputs: Mapping[str, str], name: str, command: str) -> str:
    if name not in inputs:
        raise UsageError(f"{command} needs the {name!r} input")
    return inputs[name]


def _prediction_inputs(inputs: Mapping[str, str], command: str) -> list[Prediction]:
    """Merge predictions:<i> inputs; duplicates across files are data errors."""
    keys = sorted(
        (k for k in inputs if k == "predictions" or k.startswith("predictions:")),
        key=lambda k: (len(k), k),
    )
    if not keys:
        raise UsageError(f"{command} needs at least one predictions input")
    merged: list[Prediction] = []
    seen: set[tuple[str, str]] = set()
    for key in keys:
        for pred in parse_predictions(inputs[key]):
            pair = (pred.subject_id, pred.estimator_id)
            if pair in seen:
                raise DataError(
                    f"duplicate prediction for subject {pair[0]!r}, estimator {pair[1]!r} "
                    "across predictions inputs"
                )
            seen.add(pair)
            merged.append(pred)
    return merged


def _int_param(params: Mapping[str, str], key: str, default: int | None) -> int | None:
    if key not in params or params[key] == "":
        return default
    try:
        return int(params[key])
    except ValueError:
        raise UsageError(f"{key} must be an integer, got {params[key]!r}") from None


def _float_param(params: Mapping[str, str], key: str, default: float) -> float:
    if key not in params or params[key] == "":
        return default
    try:
        return float(params[key])
    except ValueError:
        raise UsageError(f"{key} must be a number, got {params[key]!r}") from None


def _list_param(params: Mapping[str, str], key: str) -> list[str]:
    raw = params.get(key, "")
    return [chunk.strip() for chunk in raw.split(",") if chunk.strip()]


def run_curate(config_text: str, seed: int, inputs: Mapping[str, str]) -> RunResult:
    """Candidates CSV in, balanced manifest CSV out."""
    check_seed(seed)
    params = parse_section(config_text, "curate")
    quota = _int_param(params, "quota", None)
    if quota is None:
        raise UsageError("curate needs quota")
    age_min = _int_param(params, "age_min", 0)
    age_max = _int_param(params, "age_max", 25)
    candidates = parse_records(_require_input(inputs, "candidates", "curate"))
    manifest = curate_balanced(candidates, quota=quota, age_min=age_min, age_max=age_max, seed=seed)
    return _finalize("curate", params, seed, {"manifest.csv": render_manifest(manifest)})


def run_simulate(config_text: str, seed: int, inputs: Mapping[str, str]) -> RunResult:
    """Simulate the configured profiles over a manifest."""
    check_seed(seed)
    params = parse_section(config_text, "simulate")
    manifest = parse_manifest(_require_input(inputs, "manifest", "simulate"))
    profiles = (
        parse_profiles(inputs["profiles"]) if "profiles" in inputs else default_profiles()
    )
    names = _list_param(params, "estimators") or sorted(profiles)
    missing = [n for n in names if n not in profiles]
    if missing:
        raise UsageError(f"profiles not defined in the profile file: {missing}")
    rows: list[Prediction] = []
    for name in names:
        rows.extend(simulate(profiles[name], manifest, seed))
    rows.sort(key=lambda p: (p.subject_id, p.estimator_id))
    return _finalize("simulate", params, seed, {"predictions.csv": render_predictions(rows)})


def _remote_adapters(
    config_text: str, names: Sequence[str], image_root: str
) -> list[RemoteAdapter]:
    adapters = []
    for name in names:
        section = parse_section(config_text, f"remote:{name}")
        for key in ("provider", "endpoint", "credentials_env"):
            if key not in section:
                raise UsageError(f"[remote:{name}] needs {key}")
        config = RemoteConfig(
            estimator_id=name,
            provider=section["provider"],
            endpoint=section["endpoint"],
            credentials_env=section["credentials_env"],
            timeout_s=_float_param(section, "timeout_s", 10.0),
            retry_budget=_int_param(section, "retry_budget", 3),
            backoff_base_s=_float_param(section, "backoff_base_s", 0.5),
        )
        adapters.append(RemoteAdapter(RemoteClient(config), image_root))
    return adapters


def run_harvest(config_text: str, seed: int, inputs: Mapping[str, str]) -> RunResult:
    """Run adapters over the manifest; spool files through a temp dir."""
    check_seed(seed)
    params = parse_section(config_text, "harvest")
    manifest = parse_manifest(_require_input(inputs, "manifest", "harvest"))
    names = _list_param(params, "estimators")
    if not names:
        raise UsageError("harvest needs estimators")
    mode = params.get("mode", "replay")
    if mode == "replay":
        recorded = parse_predictions(_require_input(inputs, "replay", "harvest"))
        adapters = [ReplayAdapter(recorded, name) for name in names]
    elif mode == "remote":
        adapters = _remote_adapters(config_text, names, params.get("image_root", "."))
    else:
        raise UsageError(f"harvest mode must be replay or remote, got {mode!r}")

    concurrency = _int_param(params, "concurrency", 4)
    budget = _int_param(params, "failure_budget", None)
    with tempfile.TemporaryDirectory(prefix="agestack-harvest-") as spool:
        out_path = Path(spool) / "predictions.csv"
        try:
            harvest(manifest, adapters, concurrency, out_path, failure_budget=budget)
        finally:
            if mode == "remote":
                for adapter in adapters:
                    adapter.client.close()
        files = {
            "predictions.csv": out_path.read_text(encoding="utf-8"),
            "predictions.csv.errors.json": (
                out_path.with_name("predictions.csv.errors.json").read_text(encoding="utf-8")
            ),
        }
    return _finalize("harvest", params, seed, files)


def run_stack(config_text: str, seed: int, inputs: Mapping[str, str]) -> RunResult:
    """Train the configured meta-learner out-of-fold over base predictions."""
    check_seed(seed)
    params = parse_section(config_text, "stack")
    learner = params.get("learner", "")
    if learner not in LEARNER_PARAM_KEYS:
        raise UsageError(
            f"stack needs learner, one of {sorted(LEARNER_PARAM_KEYS)}, got {learner!r}"
        )
    known = LEARNER_PARAM_KEYS[learner] | {"learner", "k", "estimators"} | INPUT_PATH_KEYS
    unknown = set(params) - known
    if unknown:
        raise UsageError(f"unknown [stack] keys for {learner}: {sorted(unknown)}")

    manifest = parse_manifest(_require_input(inputs, "manifest", "stack"))
    predictions = _prediction_inputs(inputs, "stack")
    order = _list_param(params, "estimators") or sorted({p.estimator_id for p in predictions})
    matrix = assemble(manifest, predictions, order)

    hyper = {}
    for key in LEARNER_PARAM_KEYS[learner]:
        if params.get(key, "") == "":
            continue  # absent or blank: the fitter's default applies
        if key in _INT_PARAMS:
            hyper[key] = _int_param(params, key, None)
        else:
            hyper[key] = _float_param(params, key, 0.0)
    k = _int_param(params, "k", 10)
    plan = plan_folds(matrix.subject_ids, k, seed)
    oof = stack_oof(matrix, plan, LearnerSpec(learner, hyper).fit_fn(), seed)
    rows = oof_predictions(matrix, oof, f"stack:{learner}:{seed}")
    rows.sort(key=lambda p: (p.subject_id, p.estimator_id))
    return _finalize("stack", params, seed, {"oof_predictions.csv": render_predictions(rows)})


def _samples_by_estimator(
    manifest: Manifest,
    predictions: Sequence[Prediction],
    order: Sequence[str],
) -> dict[str, list[PairedSample]]:
    """Per-estimator paired samples over exactly the manifest subjects.

    Prediction rows for subjects outside the manifest are ignored, so a
    wider harvest can be evaluated against a narrower manifest. Coverage
    gaps surface later via compare_services.
    """
    ages = manifest.age_by_subject()
    by_estimator: dict[str, list[PairedSample]] = {name: [] for name in order}
    for pred in predictions:
        if pred.estimator_id in by_estimator and pred.subject_id in ages:
            by_estimator[pred.estimator_id].append(
                PairedSample(pred.subject_id, pred.point, ages[pred.subject_id])
            )
    return by_estimator


def _evaluation_inputs(
    config_text: str, section: str, inputs: Mapping[str, str]
) -> tuple[dict[str, str], dict[str, list[PairedSample]], list[tuple[str, float]]]:
    params = parse_section(config_text, section)
    manifest = parse_manifest(_require_input(inputs, "manifest", section))
    predictions = _prediction_inputs(inputs, section)
    order = _list_param(params, "estimators") or sorted({p.estimator_id for p in predictions})
    samples = _samples_by_estimator(manifest, predictions, order)
    ranking = compare_services(samples)
    return params, samples, ranking


def run_evaluate(config_text: str, seed: int, inputs: Mapping[str, str]) -> RunResult:
    """MAE ranking and per-band accuracy tables, CSV plus aligned text."""
    check_seed(seed)
    params, samples, ranking = _evaluation_inputs(config_text, "evaluate", inputs)
    tables = {name: band_accuracy(samples[name]) for name, _ in ranking}
    files = {
        "metrics.csv": render_mae_table_csv(ranking),
        "mae_table.txt": render_mae_table_text(ranking),
        "band_accuracy.csv": render_band_table_csv(tables),
        "band_table.txt": render_band_table_text(tables),
    }
    return _finalize("evaluate", params, seed, files)


def run_report(config_text: str, seed: int, inputs: Mapping[str, str]) -> RunResult:
    """Figure data CSVs plus SVG charts for the three headline figures."""
    check_seed(seed)
    params, samples, ranking = _evaluation_inputs(config_text, "report", inputs)
    ordered = {name: samples[name] for name, _ in ranking}
    fig1_csv, fig1_svg = fig_mean_by_age(ordered)
    fig2_csv, fig2_svg = fig_mae_by_age(ordered)
    tables = {name: band_accuracy(ordered[name]) for name in ordered}
    fig4_csv, fig4_svg = fig_band_accuracy(tables)
    files = {
        "fig1_mean_by_age.csv": fig1_csv,
        "fig1_mean_by_age.svg": fig1_svg,
        "fig2_mae_by_age.csv": fig2_csv,
        "fig2_mae_by_age.svg": fig2_svg,
        "fig4_band_accuracy.csv": fig4_csv,
        "fig4_band_accuracy.svg": fig4_svg,
    }
    return _finalize("report", params, seed, files)


RUNNERS = {
    "curate": run_curate,
    "simulate": run_simulate,
    "harvest": run_harvest,
    "stack": run_stack,
    "evaluate": run_evaluate,
    "report": run_report,
}
