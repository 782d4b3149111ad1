"""Command-line client for the pipeline service.

The CLI reads input files named in the config, sends their contents to
the service, and writes whatever files come back into --out. By default
it talks to an in-process instance of the service, so no server needs
to run; --server points it at a remote one instead.

Exit codes: 0 success, 1 usage error, 2 data error (schema/coverage),
3 remote failure budget exceeded.
"""

from __future__ import annotations

import asyncio
import configparser
import sys
from pathlib import Path

import click
import httpx

from agestack import __version__
from agestack.service.app import create_app

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_REMOTE = 3

_STATUS_TO_EXIT = {400: EXIT_USAGE, 422: EXIT_DATA, 502: EXIT_REMOTE}

# Which config keys of each section name input files to upload.
# "multi" keys take a comma-separated path list sent as key:<index>.
INPUT_SPECS: dict[str, list[tuple[str, str]]] = {
    "curate": [("candidates", "single")],
    "simulate": [("manifest", "single"), ("profiles", "optional")],
    "harvest": [("manifest", "single"), ("replay", "optional")],
    "stack": [("manifest", "single"), ("predictions", "multi")],
    "evaluate": [("manifest", "single"), ("predictions", "multi")],
    "report": [("manifest", "single"), ("predictions", "multi")],
}


class Cli(click.Group):
    """Group that maps click's own usage failures onto exit code 1."""

    def main(self, *args, **kwargs):
        kwargs["standalone_mode"] = False
        try:
            return super().main(*args, **kwargs)
        except click.exceptions.Exit as exc:
            sys.exit(exc.exit_code)
        except click.Abort:
            sys.exit(EXIT_USAGE)
        except click.UsageError as exc:
            click.echo(f"agestack: {exc.format_message()}", err=True)
            sys.exit(EXIT_USAGE)


@click.group(cls=Cli)
@click.version_option(version=__version__, prog_name="agestack")
@click.option("--config", "config_path", type=click.Path(), default=None, help="Config file.")
@click.option("--seed", type=int, default=0, show_default=True, help="Run seed (u64).")
@click.option("--out", "out_dir", type=click.Path(), default=".", show_default=True,
              help="Directory for output files.")
@click.option("--server", default=None, metavar="URL",
              help="Remote service URL; in-process service when omitted.")
@click.pass_context
def main(ctx: click.Context, config_path: str | None, seed: int, out_dir: str,
         server: str | None) -> None:
    """Stacked-ensemble age estimation pipeline."""
    ctx.obj = {"config_path": config_path, "seed": seed, "out": out_dir, "server": server}


def _fail(message: str, code: int) -> None:
    click.echo(f"agestack: {message}", err=True)
    sys.exit(code)


def _load_config(ctx_obj: dict) -> tuple[str, Path]:
    path = ctx_obj["config_path"]
    if not path:
        _fail("this command needs --config", EXIT_USAGE)
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8"), path.parent
    except OSError as exc:
        _fail(f"cannot read config {path}: {exc}", EXIT_USAGE)
        raise AssertionError("unreachable")


def _read_input(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        _fail(f"cannot read input file {path}: {exc}", EXIT_USAGE)
        raise AssertionError("unreachable")


def _collect_inputs(command: str, config_text: str, base_dir: Path) -> dict[str, str]:
    """Resolve the section's input paths (relative to the config file)."""
    parser = configparser.ConfigParser()
    try:
        parser.read_string(config_text)
    except configparser.Error as exc:
        _fail(f"unparseable config: {exc}", EXIT_USAGE)
    if command not in parser:
        return {}
    section = parser[command]
    inputs: dict[str, str] = {}
    for key, kind in INPUT_SPECS[command]:
        raw = section.get(key, "").strip()
        if not raw or (key == "profiles" and raw == "default"):
            continue
        if kind == "multi":
            paths = [chunk.strip() for chunk in raw.split(",") if chunk.strip()]
            for i, p in enumerate(paths):
                inputs[f"{key}:{i}"] = _read_input(base_dir / p)
        else:
            inputs[key] = _read_input(base_dir / raw)
    return inputs


def _post(server: str | None, path: str, payload: dict) -> httpx.Response:
    if server:
        try:
            return httpx.post(server.rstrip("/") + path, json=payload, timeout=300.0)
        except httpx.HTTPError as exc:
            _fail(f"cannot reach {server}: {exc}", EXIT_USAGE)
            raise AssertionError("unreachable")

    async def in_process() -> httpx.Response:
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://agestack.local", timeout=None
        ) as client:
            return await client.post(path, json=payload)

    return asyncio.run(in_process())


def _run_command(ctx: click.Context, command: str) -> None:
    obj = ctx.obj
    if not 0 <= obj["seed"] < 2**64:
        _fail(f"--seed must be in [0, 2^64), got {obj['seed']}", EXIT_USAGE)
    config_text, base_dir = _load_config(obj)
    inputs = _collect_inputs(command, config_text, base_dir)
    payload = {"config": config_text, "seed": obj["seed"], "inputs": inputs}
    response = _post(obj["server"], f"/v1/{command}", payload)

    if response.status_code != 200:
        try:
            body = response.json()
            message = f"{body.get('error', 'error')}: {body.get('detail', response.text)}"
        except ValueError:
            message = response.text
        _fail(message, _STATUS_TO_EXIT.get(response.status_code, EXIT_USAGE))

    out_dir = Path(obj["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, content in response.json()["files"].items():
        target = out_dir / name
        target.write_text(content, encoding="utf-8", newline="")
        click.echo(f"wrote {target}")
    sys.exit(EXIT_OK)


def _register(command: str, help_text: str) -> None:
    @main.command(name=command, help=help_text)
    @click.pass_context
    def _cmd(ctx: click.Context) -> None:
        _run_command(ctx, command)


_register("curate", "Build a balanced manifest from a candidates CSV.")
_register("simulate", "Simulate configured service profiles over a manifest.")
_register("harvest", "Run estimator adapters over a manifest.")
_register("stack", "Train a meta-learner out-of-fold over base predictions.")
_register("evaluate", "Rank estimators by MAE and tabulate band accuracy.")
_register("report", "Emit figure data CSVs and SVG charts.")


@main.command(name="serve", help="Run the pipeline service over HTTP.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    import uvicorn

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
