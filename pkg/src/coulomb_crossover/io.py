"""File output: atomic CSV/JSON tables, sampler checkpoints, run configs."""

import configparser
import io
import json
import os
import tempfile
from importlib import metadata
from pathlib import Path

import numpy as np

from .sampler import GasConfig, GasEnsemble

__all__ = [
    "atomic_write",
    "write_table",
    "read_table",
    "write_checkpoint",
    "read_checkpoint",
    "emit_config",
    "parse_config",
    "package_version",
]


def package_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def atomic_write(path, text: str) -> Path:
    """Write ``text`` to a temporary file beside ``path`` and rename it over."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _csv_text(columns: dict[str, np.ndarray], comments: dict | None = None) -> str:
    names = list(columns)
    data = np.column_stack([np.asarray(columns[k], dtype=float) for k in names])
    buf = io.StringIO()
    for key, value in (comments or {}).items():
        buf.write(f"# {key}={value}\n")
    buf.write(",".join(names) + "\n")
    np.savetxt(buf, data, delimiter=",", fmt="%.17g")
    return buf.getvalue()


def write_table(path, columns: dict[str, np.ndarray], *, fmt: str = "csv",
                metadata_: dict | None = None) -> Path:
    """Write named columns as CSV (header row, column order kept) or JSON.

    JSON holds ``{"columns": {name: [...]}, "metadata": {...}}``; the
    metadata always carries the package version.
    """
    meta = {"version": package_version(), **(metadata_ or {})}
    if fmt == "csv":
        return atomic_write(path, _csv_text(columns))
    if fmt == "json":
        payload = {
            "columns": {k: [float(v) for v in np.asarray(col, dtype=float)] for k, col in columns.items()},
            "metadata": meta,
        }
        return atomic_write(path, json.dumps(payload, indent=1, allow_nan=True) + "\n")
    raise ValueError(f"unknown format {fmt!r}")


def read_table(path, fmt: str | None = None) -> tuple[dict[str, np.ndarray], dict]:
    """Read a table written by :func:`write_table`; ``fmt`` defaults to the suffix."""
    path = Path(path)
    text = path.read_text()
    if (fmt or ("json" if path.suffix == ".json" else "csv")) == "json":
        payload = json.loads(text)
        return {k: np.asarray(v, dtype=float) for k, v in payload["columns"].items()}, payload["metadata"]
    meta = {}
    lines = text.splitlines()
    body = []
    for line in lines:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key] = value
        else:
            body.append(line)
    names = body[0].split(",")
    data = np.loadtxt(io.StringIO("\n".join(body[1:])), delimiter=",", ndmin=2)
    return {k: data[:, i] for i, k in enumerate(names)}, meta


def write_checkpoint(path, config: GasConfig, ensemble: GasEnsemble) -> Path:
    """Positions per row with the configuration in ``# key=value`` lines.

    The chain continues from the file through :func:`read_checkpoint`; the
    random stream is keyed by seed and sweep count, both in the header.
    """
    header = dict(config.to_dict())
    header.update(
        sweep_count=ensemble.sweep_count,
        proposal_scale=repr(ensemble.proposal_scale),
        accepted=ensemble.accepted,
        proposed=ensemble.proposed,
    )
    pos = ensemble.positions
    if config.dimension == 2:
        columns = {"x": pos.real, "y": pos.imag}
    else:
        columns = {"x": pos}
    return atomic_write(path, _csv_text(columns, header))


def read_checkpoint(path) -> tuple[GasConfig, GasEnsemble]:
    columns, meta = read_table(path, fmt="csv")
    config = GasConfig.from_dict(meta)
    x = columns["x"]
    pos = x + 1j * columns["y"] if config.dimension == 2 else x.copy()
    ensemble = GasEnsemble(
        pos,
        sweep_count=int(meta["sweep_count"]),
        proposal_scale=float(meta["proposal_scale"]),
        accepted=int(meta.get("accepted", 0)),
        proposed=int(meta.get("proposed", 0)),
    )
    return config, ensemble


def emit_config(sections: dict[str, dict]) -> str:
    """Render ``{section: {key: value}}`` as an INI file (``key = value``)."""
    parser = configparser.ConfigParser(interpolation=None)
    for name, values in sections.items():
        parser[name] = {k: _to_text(v) for k, v in values.items() if v is not None}
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


def _to_text(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return " ".join(_to_text(v) for v in value)
    return str(value)


def parse_config(text: str) -> dict[str, dict[str, str]]:
    """Parse INI text into ``{section: {key: raw string}}``; keys use underscores."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.read_string(text)
    return {
        name: {k.replace("-", "_"): v for k, v in parser[name].items()}
        for name in parser.sections()
    }
