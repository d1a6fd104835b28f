"""Experiment runner: config parsing, CSV/manifest emission, exit codes.

Configs are a single YAML key-value tree.  Parsing is strict: unknown keys
are rejected with their path, and every field is validated before any
computation starts.  CSV output uses a header row, 17-significant-digit
floats, UTF-8 and LF newlines; a JSON manifest sits next to each CSV with
the full config, seed, code version and wall time.  Identical master seeds
give byte-identical CSVs for any thread count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version

import numpy as np
import yaml

from .channel import averaged_step_superop, hoeffding_bound
from .duality import HubbardRequest, dual_hamiltonian, simulate_hubbard_wavefunction
from .errors import DephasimError, ExperimentConfigError
from .fock import SpinfulBasis, basis_state, config_to_mask, evolve_dense
from .landscape import ComplexCoupling, variance_probe
from .lattice import BipartiteLattice, build_lattice

THREADS_ENV = "DEPHASIM_THREADS"

EXPERIMENT_KINDS = ("fig1", "hubbard", "oracle", "landscape-probe", "samples")

FIG1_DEFAULTS = {
    "gamma": 1.0,
    "tau": 0.01,
    "samples": 200,
    "time_grid": {"start": 0.0, "stop": 10.0, "points": 21},
    "initial": {"up": [0], "down": [1]},
    "seed": 20,
}


def _code_version() -> str:
    try:
        return version("dephasim")
    except PackageNotFoundError:
        return "unknown"


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    payload: dict
    output: str | None
    seed: int


_MISSING = object()


class _Tree:
    """Strict reader over a nested mapping: tracks paths, rejects leftovers."""

    def __init__(self, data: dict, path: str = ""):
        if not isinstance(data, dict):
            raise ExperimentConfigError(f"{path or 'config'}: expected a mapping")
        self.data = dict(data)
        self.path = path

    def _at(self, key: str) -> str:
        return f"{self.path}.{key}" if self.path else key

    def take(self, key: str, kind, default=_MISSING):
        if key not in self.data:
            if default is _MISSING:
                raise ExperimentConfigError(f"missing required key {self._at(key)}")
            return default
        value = self.data.pop(key)
        return _coerce(value, kind, self._at(key))

    def subtree(self, key: str, default=None) -> "_Tree | None":
        if key not in self.data:
            return _Tree(default, self._at(key)) if default is not None else None
        return _Tree(self.data.pop(key), self._at(key))

    def done(self):
        if self.data:
            extra = ", ".join(sorted(self._at(k) for k in self.data))
            raise ExperimentConfigError(f"unknown config keys: {extra}")


def _coerce(value, kind, path: str):
    if kind is bool:
        if not isinstance(value, bool):
            raise ExperimentConfigError(f"{path}: expected true/false, got {value!r}")
        return value
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ExperimentConfigError(f"{path}: expected a number, got {value!r}")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ExperimentConfigError(f"{path}: expected an integer, got {value!r}")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ExperimentConfigError(f"{path}: expected a string, got {value!r}")
        return value
    if kind is list:
        if not isinstance(value, list):
            raise ExperimentConfigError(f"{path}: expected a list, got {value!r}")
        return value
    if kind is complex:
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return complex(value)
        if isinstance(value, str):
            try:
                return complex(value.replace(" ", ""))
            except ValueError:
                raise ExperimentConfigError(f"{path}: cannot parse complex number {value!r}")
        raise ExperimentConfigError(f"{path}: expected a number, got {value!r}")
    raise AssertionError(f"unhandled coercion {kind}")


def _site_list(values, path: str, n_sites: int) -> tuple[int, ...]:
    if not isinstance(values, list) or not all(
        isinstance(v, int) and not isinstance(v, bool) for v in values
    ):
        raise ExperimentConfigError(f"{path}: expected a list of site indices")
    sites = tuple(values)
    if len(set(sites)) != len(sites):
        raise ExperimentConfigError(f"{path}: repeated site indices")
    if sites and not (0 <= min(sites) and max(sites) < n_sites):
        raise ExperimentConfigError(f"{path}: site index out of range for {n_sites} sites")
    return sites


def _parse_lattice(tree: _Tree | None) -> BipartiteLattice:
    if tree is None:
        raise ExperimentConfigError("missing required key lattice")
    kind = tree.take("kind", str)
    weight = tree.take("weight", float, -1.0)
    periodic = tree.take("periodic", bool, False)
    try:
        if kind == "chain":
            lat = build_lattice("chain", length=tree.take("length", int),
                                weight=weight, periodic=periodic)
        elif kind == "square":
            dims = tree.take("dims", list)
            if len(dims) != 2:
                raise ExperimentConfigError(f"{tree.path}.dims: expected [rows, cols]")
            lat = build_lattice("square", dims=(int(dims[0]), int(dims[1])),
                                weight=weight, periodic=periodic)
        elif kind == "custom":
            edges = tree.take("edges", list, [])
            partition = tree.take("partition", list, None)
            triples = []
            for k, e in enumerate(edges):
                if not isinstance(e, list) or len(e) != 3:
                    raise ExperimentConfigError(
                        f"{tree.path}.edges[{k}]: expected [i, j, weight]"
                    )
                triples.append((int(e[0]), int(e[1]), float(e[2])))
            lat = build_lattice("custom", edges=triples, partition=partition)
        else:
            raise ExperimentConfigError(f"{tree.path}.kind: unknown lattice kind {kind!r}")
    except DephasimError as exc:
        if isinstance(exc, ExperimentConfigError):
            raise
        raise ExperimentConfigError(f"{tree.path}: {exc}") from exc
    tree.done()
    return lat


def _parse_grid(tree: _Tree | None, default=None) -> np.ndarray:
    if tree is None:
        if default is None:
            raise ExperimentConfigError("missing required key time_grid")
        tree = _Tree(dict(default), "time_grid")
    start = tree.take("start", float)
    stop = tree.take("stop", float)
    points = tree.take("points", int)
    tree.done()
    if points < 1 or stop < start or start < 0:
        raise ExperimentConfigError("time_grid: need 0 <= start <= stop and points >= 1")
    return np.linspace(start, stop, points)


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except FileNotFoundError:
        raise ExperimentConfigError(f"config file not found: {path}")
    except yaml.YAMLError as exc:
        raise ExperimentConfigError(f"{path}: {exc}")
    if not isinstance(data, dict):
        raise ExperimentConfigError(f"{path}: top level must be a mapping")
    kind = data.get("experiment")
    if kind not in EXPERIMENT_KINDS:
        raise ExperimentConfigError(
            f"experiment: expected one of {', '.join(EXPERIMENT_KINDS)}, got {kind!r}"
        )
    tree = _Tree(data)
    tree.take("experiment", str)
    output = tree.take("output", str, None)
    seed = tree.take("seed", int, 0)
    return ExperimentConfig(kind, tree.data, output, seed)


def _format_value(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    if isinstance(v, int):
        return str(v)
    return str(v)


def write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_format_value(v) for v in row) + "\n")


def write_manifest(path: str, config: dict, seed: int, threads: int, wall: float) -> None:
    manifest = {
        "config": config,
        "seed": seed,
        "threads": threads,
        "code_version": _code_version(),
        "wall_time_s": wall,
        "created_utc": datetime.now(timezone.utc).isoformat(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, default=str)
        fh.write("\n")


def _config_label(config) -> str:
    return ";".join(str(s) for s in config)


# -- experiment bodies ---------------------------------------------------------


def run_fig1(payload: dict, seed: int, threads: int):
    tree = _Tree(payload)
    lattice = (
        _parse_lattice(tree.subtree("lattice"))
        if "lattice" in tree.data
        else build_lattice("chain", length=2)
    )
    gamma = tree.take("gamma", float, FIG1_DEFAULTS["gamma"])
    tau = tree.take("tau", float, FIG1_DEFAULTS["tau"])
    n_samples = tree.take("samples", int, FIG1_DEFAULTS["samples"])
    grid = _parse_grid(tree.subtree("time_grid"), FIG1_DEFAULTS["time_grid"])
    init = tree.subtree("initial", FIG1_DEFAULTS["initial"])
    up0 = _site_list(init.take("up", list), "initial.up", lattice.n_sites)
    dn0 = _site_list(init.take("down", list), "initial.down", lattice.n_sites)
    init.done()
    tree.done()
    if tau <= 0:
        raise ExperimentConfigError("tau must be positive")

    # primary read-out: the initial configuration; alternative read-out when
    # it differs: both particles on the first up site (double occupancy)
    alt = (up0, dn0)
    if len(up0) == 1 and len(dn0) == 1 and dn0 != up0:
        alt = ((up0[0],), (up0[0],))
    configs = ((up0, dn0), alt) if alt != (up0, dn0) else ((up0, dn0),)
    sector = (len(up0), len(dn0))
    basis = SpinfulBasis.build(lattice.n_sites, sector)
    H = dual_hamiltonian(lattice, gamma, sector)
    psi0 = basis_state(basis, up0, dn0)
    key = basis.index[(config_to_mask(up0), config_to_mask(dn0))]
    key_alt = basis.index[(config_to_mask(alt[0]), config_to_mask(alt[1]))]

    header = [
        "t", "re_mean", "im_mean", "stderr", "re_exact", "im_exact",
        "re_exact_avg", "im_exact_avg", "r_steps",
        "re_mean_alt", "im_mean_alt", "stderr_alt", "re_exact_alt", "im_exact_alt",
    ]
    rows = []
    for t in grid:
        t = float(t)
        R = max(1, round(t / tau))
        req = HubbardRequest(lattice, gamma, up0, dn0, t, R, n_samples, configs, seed)
        ests = simulate_hubbard_wavefunction(req, threads)
        est, est_alt = ests[0], ests[-1]
        exact = evolve_dense(psi0, H, t).amplitudes
        avg = _averaged_reference(lattice, gamma, t, R, up0, dn0, configs)
        rows.append([
            t, est.mean.real, est.mean.imag, est.stderr,
            float(exact[key].real), float(exact[key].imag),
            avg[0].real, avg[0].imag, R,
            est_alt.mean.real, est_alt.mean.imag, est_alt.stderr,
            float(exact[key_alt].real), float(exact[key_alt].imag),
        ])
    return header, rows


def _averaged_reference(lattice, gamma, t, R, up0, dn0, configs):
    """Exact mean of the sampled estimator: gauged composed-channel evolution."""
    E = averaged_step_superop(lattice, gamma, t / R if t > 0 else 0.0)
    ER = np.linalg.matrix_power(E.matrix, R if t > 0 else 0)
    dim = 1 << lattice.n_sites
    a_mask = config_to_mask(lattice.a_sites())
    g = np.array([(-1.0) ** (m & a_mask).bit_count() for m in range(dim)])
    u0, d0 = config_to_mask(up0), config_to_mask(dn0)
    rho0 = np.zeros(dim * dim, dtype=complex)
    rho0[u0 * dim + d0] = g[d0]
    rho_t = (ER @ rho0).reshape(dim, dim)
    out = []
    for n, m in configs:
        u, d = config_to_mask(n), config_to_mask(m)
        out.append(complex(g[d] * rho_t[u, d]))
    return out


def run_hubbard(payload: dict, seed: int, threads: int):
    tree = _Tree(payload)
    lattice = _parse_lattice(tree.subtree("lattice"))
    gamma = tree.take("gamma", float)
    n_samples = tree.take("samples", int)
    steps = tree.take("steps", int, 0)
    tau = tree.take("tau", float, 0.0)
    grid = _parse_grid(tree.subtree("time_grid"))
    init = tree.subtree("initial")
    if init is None:
        raise ExperimentConfigError("missing required key initial")
    up0 = _site_list(init.take("up", list), "initial.up", lattice.n_sites)
    dn0 = _site_list(init.take("down", list), "initial.down", lattice.n_sites)
    init.done()
    configs_raw = tree.take("configs", list, None)
    tree.done()
    if (steps <= 0) == (tau <= 0):
        raise ExperimentConfigError("give exactly one of steps (R) or tau (t/R)")
    if n_samples < 1:
        raise ExperimentConfigError("samples must be >= 1")
    configs = _parse_configs(configs_raw, lattice.n_sites) if configs_raw else ((up0, dn0),)

    header = ["t", "up", "down", "re_mean", "im_mean", "stderr", "r_steps"]
    rows = []
    for t in grid:
        t = float(t)
        R = steps if steps > 0 else max(1, round(t / tau))
        req = HubbardRequest(lattice, gamma, up0, dn0, t, R, n_samples, configs, seed)
        for est in simulate_hubbard_wavefunction(req, threads):
            rows.append([
                t, _config_label(est.n_config), _config_label(est.m_config),
                est.mean.real, est.mean.imag, est.stderr, R,
            ])
    return header, rows


def _parse_configs(raw, n_sites):
    configs = []
    for k, entry in enumerate(raw):
        tree = _Tree(entry, f"configs[{k}]")
        up = _site_list(tree.take("up", list), f"configs[{k}].up", n_sites)
        down = _site_list(tree.take("down", list), f"configs[{k}].down", n_sites)
        tree.done()
        configs.append((up, down))
    return tuple(configs)


def run_oracle(payload: dict, seed: int, threads: int):
    tree = _Tree(payload)
    lattice = _parse_lattice(tree.subtree("lattice"))
    gamma = tree.take("gamma", float)
    grid = _parse_grid(tree.subtree("time_grid"))
    init = tree.subtree("initial")
    if init is None:
        raise ExperimentConfigError("missing required key initial")
    up0 = _site_list(init.take("up", list), "initial.up", lattice.n_sites)
    dn0 = _site_list(init.take("down", list), "initial.down", lattice.n_sites)
    init.done()
    configs_raw = tree.take("configs", list, None)
    tree.done()
    configs = _parse_configs(configs_raw, lattice.n_sites) if configs_raw else ((up0, dn0),)

    sector = (len(up0), len(dn0))
    basis = SpinfulBasis.build(lattice.n_sites, sector)
    H = dual_hamiltonian(lattice, gamma, sector)
    psi0 = basis_state(basis, up0, dn0)
    header = ["t", "up", "down", "re_exact", "im_exact"]
    rows = []
    for t in grid:
        amps = evolve_dense(psi0, H, float(t)).amplitudes
        for n, m in configs:
            key = basis.index.get((config_to_mask(n), config_to_mask(m)))
            value = complex(amps[key]) if key is not None else 0j
            rows.append([float(t), _config_label(n), _config_label(m),
                         value.real, value.imag])
    return header, rows


def run_landscape_probe(payload: dict, seed: int, threads: int):
    tree = _Tree(payload)
    lattice = _parse_lattice(tree.subtree("lattice"))
    J = tree.take("j", complex, 1.0 + 0j)
    U = tree.take("u", complex, 1j)
    tau = tree.take("tau", float, 0.05)
    n_samples = tree.take("samples", int, 64)
    grid = _parse_grid(tree.subtree("time_grid"))
    init = tree.subtree("initial")
    if init is None:
        raise ExperimentConfigError("missing required key initial")
    up0 = _site_list(init.take("up", list), "initial.up", lattice.n_sites)
    dn0 = _site_list(init.take("down", list), "initial.down", lattice.n_sites)
    init.done()
    tree.done()
    if tau <= 0:
        raise ExperimentConfigError("tau must be positive")
    if n_samples < 2:
        raise ExperimentConfigError("samples must be >= 2 for variance estimates")

    coupling = ComplexCoupling(J, U)
    result = variance_probe(lattice, coupling, up0, dn0, grid, tau, n_samples, seed)
    torus = result.torus
    header = ["t", "arg_J", "arg_U", "s", "max_abs_X", "var_re", "var_im", "bound"]
    rows = [
        [r.t, torus.arg_j, torus.arg_u, torus.s, r.max_abs, r.var_re, r.var_im, r.bound]
        for r in result.rows
    ]
    return header, rows


def run_samples(payload: dict, seed: int, threads: int):
    tree = _Tree(payload)
    width = tree.take("range_width", float, 2.0)
    epsilon = tree.take("epsilon", float, 0.1)
    delta = tree.take("delta", float, 0.05)
    tree.done()
    n = hoeffding_bound(width, epsilon, delta)
    header = ["range_width", "epsilon", "delta", "samples"]
    return header, [[width, epsilon, delta, n]], n


def run_experiment(cfg: ExperimentConfig, seed: int | None = None,
                   output: str | None = None, threads: int = 1) -> str | None:
    """Execute one experiment; returns the CSV path when one is written."""
    final_seed = cfg.seed if seed is None else seed
    out_path = output or cfg.output
    started = time.perf_counter()
    if cfg.kind == "fig1":
        header, rows = run_fig1(cfg.payload, final_seed, threads)
    elif cfg.kind == "hubbard":
        header, rows = run_hubbard(cfg.payload, final_seed, threads)
    elif cfg.kind == "oracle":
        header, rows = run_oracle(cfg.payload, final_seed, threads)
    elif cfg.kind == "landscape-probe":
        header, rows = run_landscape_probe(cfg.payload, final_seed, threads)
    elif cfg.kind == "samples":
        header, rows, n = run_samples(cfg.payload, final_seed, threads)
        print(n)
    else:  # pragma: no cover - load_config already filtered
        raise ExperimentConfigError(f"unknown experiment kind {cfg.kind}")
    if out_path is None and cfg.kind != "samples":
        raise ExperimentConfigError("missing required key output")
    if out_path is not None:
        write_csv(out_path, header, rows)
        wall = time.perf_counter() - started
        manifest_config = {"experiment": cfg.kind, **cfg.payload,
                           "output": out_path}
        write_manifest(out_path + ".manifest.json", manifest_config, final_seed,
                       threads, wall)
    return out_path


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if raw:
        try:
            n = int(raw)
            if n >= 1:
                return n
        except ValueError:
            pass
    return 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="Run a dephasing/Hubbard simulation experiment from a config file.",
    )
    parser.add_argument("config", help="path to a YAML experiment config")
    parser.add_argument("--seed", type=int, default=None, help="override the master seed")
    parser.add_argument("--output", default=None, help="override the CSV output path")
    parser.add_argument("--threads", type=int, default=None,
                        help=f"worker threads (default ${THREADS_ENV} or 1)")
    args = parser.parse_args(argv)
    threads = args.threads if args.threads and args.threads >= 1 else default_threads()
    try:
        cfg = load_config(args.config)
        run_experiment(cfg, seed=args.seed, output=args.output, threads=threads)
    except ExperimentConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DephasimError as exc:
        print(f"numerical guard: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
