"""Command-line front end.

Exit codes: 0 success, 2 validation or parse failure, 3 numerical refusal.
"""

from __future__ import annotations

import functools
import time
from pathlib import Path
from typing import Optional

import click
import numpy as np

from . import io
from .errors import FileFormatError, NumericalRefusal, ShapeError
from .spectral import u_eigen
from .systems import (
    MltiSystem,
    classify_stability,
    min_energy_input,
    obs_gramian_finite,
    obs_gramian_infinite,
    observability_tensor,
    reach_gramian_finite,
    reach_gramian_infinite,
    reachability_tensor,
    simulate,
    solution_at,
)
from .tensor import (
    PairedTensor,
    frobenius_norm,
    is_u_positive_definite,
    rank_u,
    symmetric_part_eigenvalues,
)
from .tolerance import DEFAULT_TOL, Tolerance

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_REFUSED = 3


class Settings:
    def __init__(self, tol: Tolerance, output: Optional[str], fmt: str, layout_check: bool):
        self.tol = tol
        self.output = output
        self.fmt = fmt
        self.layout_check = layout_check


def _complex_list(values) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=np.complex128)]


def _render_text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key, value in obj.items():
            if isinstance(value, (dict, list)) and value and not _is_flat(value):
                lines.append(f"{pad}{key}:")
                lines.extend(_render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar_text(value)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)) and not _is_flat(item):
                lines.append(f"{pad}-")
                lines.extend(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar_text(item)}")
    else:
        lines.append(pad + _scalar_text(obj))
    return lines


def _is_flat(value) -> bool:
    if isinstance(value, dict):
        return False
    return all(not isinstance(v, (dict, list)) or (isinstance(v, list) and _is_flat(v)) for v in value)


def _scalar_text(value) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(_scalar_text(v) for v in value) + "]"
    if isinstance(value, float):
        return f"{value:.10g}"
    if value is None:
        return "-"
    return str(value)


def _emit(settings: Settings, obj: dict) -> None:
    if settings.fmt == "json":
        text = io.dumps(obj)
    else:
        text = "\n".join(_render_text(obj)) + "\n"
    if settings.output:
        Path(settings.output).write_text(text)
    else:
        click.echo(text, nl=False)


def _report(name: str, args: dict, settings: Settings, results: dict, started: float) -> dict:
    return {
        "command": {"name": name, **args},
        "tolerances": settings.tol.as_dict(),
        "results": results,
        "timing": {"seconds": time.perf_counter() - started},
    }


def _guarded(func):
    """Map library errors onto exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return func(*args, **kwargs)
        except (FileFormatError, ShapeError, ValueError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(EXIT_INVALID)
        except NumericalRefusal as exc:
            click.echo(f"refused: {exc}", err=True)
            ctx.exit(EXIT_REFUSED)

    return wrapper


def _load(settings: Settings, path: str) -> Optional[MltiSystem]:
    system = io.load_system(path)
    if settings.layout_check:
        _emit(
            settings,
            {
                "command": {"name": "layout-check", "system": path},
                "results": {
                    "valid": True,
                    "N": system.order,
                    "state_shape": list(system.state_shape),
                    "input_shape": list(system.input_shape),
                    "output_shape": list(system.output_shape),
                    "data_lengths": {
                        name: getattr(system, name).array.size for name in ("A", "B", "C")
                    },
                },
            },
        )
        return None
    return system


def _gramian_summary(W: PairedTensor, tol: Tolerance) -> dict:
    lam = symmetric_part_eigenvalues(W)
    return {
        "u_positive_definite": is_u_positive_definite(W, tol),
        "min_symmetric_eigenvalue": float(lam[0]),
        "max_symmetric_eigenvalue": float(lam[-1]),
    }


@click.group()
@click.option("--tol", type=float, default=None, help="Relative base tolerance for rank, definiteness and inverse checks.")
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None, help="Write the report here instead of stdout.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json", show_default=True)
@click.option("--layout-check", is_flag=True, help="Only validate the system file layout and exit.")
@click.pass_context
def main(ctx, tol, output, fmt, layout_check):
    """Analyse multilinear time-invariant systems stored as JSON system files."""
    try:
        tolerance = DEFAULT_TOL if tol is None else DEFAULT_TOL.with_base(tol)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--tol")
    ctx.obj = Settings(tolerance, output, fmt, layout_check)


@main.command()
@click.argument("system", type=click.Path(exists=True, dir_okay=False))
@click.option("--eigentensors", is_flag=True, help="Include the folded eigentensors.")
@click.pass_obj
@_guarded
def eig(settings: Settings, system, eigentensors):
    """U-eigenvalues of the state operator A."""
    started = time.perf_counter()
    sysm = _load(settings, system)
    if sysm is None:
        return
    spectrum = u_eigen(sysm.A)
    results = {
        "eigenvalues": _complex_list(spectrum.eigenvalues),
        "spectral_radius": float(np.max(np.abs(spectrum.eigenvalues))),
    }
    if eigentensors:
        results["eigentensors"] = [io.tensor_to_dict(x) for x in spectrum.eigentensors]
    args = {"system": system, "eigentensors": eigentensors}
    _emit(settings, _report("eig", args, settings, results, started))


@main.command()
@click.argument("system", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
@_guarded
def analyze(settings: Settings, system):
    """Stability, reachability and observability of a system."""
    started = time.perf_counter()
    sysm = _load(settings, system)
    if sysm is None:
        return
    tol = settings.tol
    verdict = classify_stability(sysm.A, tol)
    rank_r = rank_u(reachability_tensor(sysm), tol)
    rank_o = rank_u(observability_tensor(sysm), tol)
    radius = verdict.spectral_radius
    results = {
        "stability": verdict.classification.value,
        "spectral_radius": radius,
        "eigenvalues": _complex_list(verdict.spectrum.eigenvalues),
        "marginal_clusters": [
            {
                "eigenvalue": _complex_list([c.eigenvalue])[0],
                "algebraic": c.algebraic,
                "geometric": c.geometric,
            }
            for c in verdict.marginal_detail
        ],
        "state_dimension": sysm.state_dim,
        "reachability_rank": rank_r,
        "observability_rank": rank_o,
        "reachable": rank_r == sysm.state_dim,
        "observable": rank_o == sysm.state_dim,
    }
    if radius < 1.0 - tol.stability:
        try:
            results["gramians"] = {
                "reach": _gramian_summary(reach_gramian_infinite(sysm, tol), tol),
                "obs": _gramian_summary(obs_gramian_infinite(sysm, tol), tol),
            }
        except NumericalRefusal as exc:
            results["gramians"] = {"omitted": str(exc)}
    else:
        results["gramians"] = {
            "omitted": f"spectral radius {radius:.6g} is not below 1; infinite-horizon Gramians do not exist"
        }
    _emit(settings, _report("analyze", {"system": system}, settings, results, started))


@main.command("simulate")
@click.argument("system", type=click.Path(exists=True, dir_okay=False))
@click.option("--x0", "x0_path", required=True, type=click.Path(exists=True, dir_okay=False), help="Initial state tensor file.")
@click.option("--inputs", "inputs_path", type=click.Path(exists=True, dir_okay=False), help="Input sequence file.")
@click.option("--zero-input", is_flag=True, help="Drive the system with zero input.")
@click.option("--steps", "-T", required=True, type=click.IntRange(min=0))
@click.option("--verify-closed-form", is_flag=True, help="Compare every state with the closed-form solution.")
@click.pass_obj
@_guarded
def simulate_cmd(settings: Settings, system, x0_path, inputs_path, zero_input, steps, verify_closed_form):
    """Simulate the state and output recursion."""
    if bool(inputs_path) == bool(zero_input):
        raise click.UsageError("give exactly one of --inputs or --zero-input")
    sysm = _load(settings, system)
    if sysm is None:
        return
    x0 = io.load_tensor(x0_path)
    inputs = None if zero_input else io.load_inputs(inputs_path)
    traj = simulate(sysm, x0, inputs, steps)
    doc = io.trajectory_to_dict(traj)
    if verify_closed_form:
        dev = 0.0
        for k, x in enumerate(traj.states):
            closed = solution_at(sysm, x0, traj.inputs, k)
            scale = max(1.0, frobenius_norm(x))
            dev = max(dev, frobenius_norm(closed - x) / scale)
        doc["closed_form_max_deviation"] = dev
    _emit(settings, doc)


@main.command()
@click.argument("system", type=click.Path(exists=True, dir_okay=False))
@click.option("--horizon", "-T", type=click.IntRange(min=1), help="Finite horizon length.")
@click.option("--infinite", is_flag=True, help="Solve the tensor Lyapunov equation instead.")
@click.option("--which", type=click.Choice(["reach", "obs"]), default="reach", show_default=True)
@click.pass_obj
@_guarded
def gramian(settings: Settings, system, horizon, infinite, which):
    """Reachability or observability Gramian."""
    if (horizon is None) == (not infinite):
        raise click.UsageError("give exactly one of --horizon or --infinite")
    started = time.perf_counter()
    sysm = _load(settings, system)
    if sysm is None:
        return
    tol = settings.tol
    if infinite:
        W = (reach_gramian_infinite if which == "reach" else obs_gramian_infinite)(sysm, tol)
    else:
        W = (reach_gramian_finite if which == "reach" else obs_gramian_finite)(sysm, 0, horizon)
    results = {"gramian": io.paired_to_dict(W), **_gramian_summary(W, tol)}
    args = {"system": system, "which": which, "horizon": "infinite" if infinite else horizon}
    _emit(settings, _report("gramian", args, settings, results, started))


@main.command()
@click.argument("system", type=click.Path(exists=True, dir_okay=False))
@click.option("--x0", "x0_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--x1", "x1_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--horizon", "-T", required=True, type=click.IntRange(min=1))
@click.option("--inputs-out", type=click.Path(dir_okay=False), help="Write the input sequence file here.")
@click.pass_obj
@_guarded
def steer(settings: Settings, system, x0_path, x1_path, horizon, inputs_out):
    """Minimum-energy inputs driving x0 to x1 in a given horizon."""
    started = time.perf_counter()
    sysm = _load(settings, system)
    if sysm is None:
        return
    x0, x1 = io.load_tensor(x0_path), io.load_tensor(x1_path)
    inputs = min_energy_input(sysm, x0, x1, horizon, settings.tol)
    final = simulate(sysm, x0, inputs, horizon).states[-1]
    results = {
        "terminal_error": frobenius_norm(final - x1),
        "input_energy": float(sum(frobenius_norm(u) ** 2 for u in inputs)),
    }
    if inputs_out:
        io.write_json(inputs_out, io.inputs_to_dict(inputs))
        results["inputs_file"] = inputs_out
    else:
        results["inputs"] = [io.tensor_to_dict(u) for u in inputs]
    args = {"system": system, "x0": x0_path, "x1": x1_path, "horizon": horizon}
    _emit(settings, _report("steer", args, settings, results, started))


if __name__ == "__main__":
    main()
