"""Command-line interface.

    infosens generate   run the evolution strategy and write a run CSV
    infosens planted    write the planted benchmark as CSV
    infosens select     forward CMI feature selection
    infosens pid        pairwise synergy of selected features
    infosens baselines  greedy rankings by MI criteria
    infosens compare    k-NN holdout MAE of the feature sets of several methods
    infosens report     select, pid, baselines and compare in one go, plus figures

Every command writes a ``<out>.manifest`` file of ``key=value`` lines next
to its main output with the resolved configuration. Outputs are written only
after all computation succeeded.

Exit codes: 0 success, 2 usage error, 3 data error, 4 internal error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
import tempfile
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import CRITERIA, rank
from .data import DEFAULT_N_BINS, DataError, Dataset, bin_dataset, emit_csv, load_csv
from .datagen import EsConfig, GridSpec, planted_benchmark, records_to_dataset, run_es
from .datagen.surrogate import DEFAULT_CONSTANTS
from .estimators import KsgConfig
from .pid import synergy_matrix
from .selection import DEFAULT_MAX_SET_SIZE, SelectionResult, select_features
from .stats import PermTestConfig
from .validation import CMI_METHOD, HoldoutProtocol, compare_selectors

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 2, 3, 4
NO_FEATURES_MESSAGE = "no significant features"

log = logging.getLogger("infosens")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- output helpers

@contextmanager
def _atomic(path):
    """Yield a temporary path that replaces ``path`` only if the block succeeds."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent if str(path.parent) else ".", prefix=f".{path.name}.")
    os.close(fd)
    try:
        yield Path(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_rows(path, header, rows):
    with _atomic(path) as tmp, open(tmp, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def manifest_path(out) -> Path:
    return Path(f"{out}.manifest")


def write_manifest(out, command: str, entries: dict) -> Path:
    lines = [f"command={command}", f"version={__version__}"]
    for key, val in entries.items():
        if isinstance(val, (list, tuple)):
            val = ",".join(str(v) for v in val)
        lines.append(f"{key}={val}")
    lines.append(f"timestamp={time.strftime('%Y-%m-%dT%H:%M:%S%z')}")
    path = manifest_path(out)
    with _atomic(path) as tmp:
        tmp.write_text("\n".join(lines) + "\n")
    return path


def read_manifest(path) -> dict:
    out = {}
    for line in Path(path).read_text().splitlines():
        if "=" in line:
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _out_dir_ok(out):
    parent = Path(out).parent
    if not parent.is_dir():
        raise UsageError(f"output directory {parent} does not exist")


def _load(path) -> Dataset:
    return load_csv(path)


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _resolve_features(data: Dataset, text: str) -> list[int]:
    out = []
    for tok in _csv_list(text):
        if tok in data.names:
            out.append(data.index_of(tok))
        elif tok.isdigit() and int(tok) < data.n_features:
            out.append(int(tok))
        else:
            raise DataError(f"unknown feature {tok!r}")
    return out


# ---------------------------------------------------------------- commands

def _es_config(a) -> tuple[EsConfig, GridSpec]:
    try:
        cfg = EsConfig(lam=a.lam, mu=a.mu, generations=a.generations, sigma0=a.sigma0, seed=a.seed)
        grid = GridSpec(a.sections, a.points)
    except ValueError as err:
        raise UsageError(str(err)) from None
    if a.n_hh < 1:
        raise UsageError("n-hh must be >= 1")
    if a.sections < 1 or a.points < 1:
        raise UsageError("sections and points must be >= 1")
    return cfg, grid


def cmd_generate(a) -> int:
    cfg, grid = _es_config(a)
    _out_dir_ok(a.out)
    records = run_es(cfg, a.n_hh, grid=grid, threads=a.threads)
    data = records_to_dataset(records, grid)
    with _atomic(a.out) as tmp:
        emit_csv(data, tmp)
    entries = {"seed": cfg.seed, "n_hh": a.n_hh, "generations": cfg.generations, "lambda": cfg.lam,
               "mu": cfg.mu, "sigma0": cfg.sigma0, "sections": grid.n_sections, "points": grid.n_points,
               "stations": grid.n_stations, "threads": a.threads, "out": a.out, "rows": data.n_samples,
               "features": data.n_features}
    entries.update({f"surrogate.{k}": v for k, v in DEFAULT_CONSTANTS.as_dict().items()})
    write_manifest(a.out, "generate", entries)
    print(f"wrote {data.n_samples} evaluations x {data.n_features} features to {a.out}")
    return EXIT_OK


def cmd_planted(a) -> int:
    if a.n < 100:
        raise UsageError("n must be >= 100")
    _out_dir_ok(a.out)
    data = planted_benchmark(a.n, a.seed)
    with _atomic(a.out) as tmp:
        emit_csv(data, tmp)
    write_manifest(a.out, "planted", {"n": a.n, "seed": a.seed, "out": a.out})
    print(f"wrote planted benchmark ({a.n} samples) to {a.out}")
    return EXIT_OK


def _selection_configs(a) -> tuple[KsgConfig, PermTestConfig]:
    try:
        ksg, test = KsgConfig(k=a.k, seed=a.seed), PermTestConfig(n_perm=a.n_perm, alpha_crit=a.alpha, seed=a.seed)
    except ValueError as err:
        raise UsageError(str(err)) from None
    return ksg, test


def _selection_rows(res: SelectionResult):
    return [[i + 1, name, _fmt(c), _fmt(p)] for i, (name, c, p) in enumerate(zip(res.names, res.cmi_values, res.p_values))]


def _selection_entries(a, ksg, test, res):
    return {"in": a.input, "out": a.out, "alpha": test.alpha_crit, "k": ksg.k, "n_perm": test.n_perm,
            "max_size": a.max_size, "seed": a.seed, "noise_amplitude": ksg.noise_amplitude,
            "selected": res.names, "terminated": res.terminated,
            "status": NO_FEATURES_MESSAGE if not res.selected else "ok"}


def _run_selection(a, data):
    ksg, test = _selection_configs(a)
    if a.max_size < 1:
        raise UsageError("max-size must be >= 1")
    if 1.0 / (test.n_perm + 1) >= test.alpha_crit:
        log.warning("with %d permutations no p-value can fall below alpha=%g", test.n_perm, test.alpha_crit)
    return ksg, test, select_features(data, ksg, test, max_set_size=a.max_size)


def cmd_select(a) -> int:
    _selection_configs(a)
    _out_dir_ok(a.out)
    data = _load(a.input)
    ksg, test, res = _run_selection(a, data)
    _write_rows(a.out, ["step", "feature", "cmi", "p_value"], _selection_rows(res))
    write_manifest(a.out, "select", _selection_entries(a, ksg, test, res))
    if not res.selected:
        print(NO_FEATURES_MESSAGE)
    else:
        for i, (n, c, p) in enumerate(zip(res.names, res.cmi_values, res.p_values), 1):
            print(f"{i:2d}  {n:<12s} cmi={c:.4f} nats  p={p:.4f}")
    return EXIT_OK


def _pid_rows(data, sm):
    rows = []
    order = {pair: i + 1 for i, pair in enumerate(sm.top_pairs)}
    for (i, j), r in sorted(sm.results.items()):
        rows.append([data.names[i], data.names[j], _fmt(r.unique_x), _fmt(r.unique_z), _fmt(r.redundancy),
                     _fmt(r.synergy), _fmt(r.joint_mi), order.get((i, j), "")])
    return rows


PID_HEADER = ["feature_a", "feature_b", "unique_a", "unique_b", "redundancy", "synergy", "joint_mi", "top_rank"]


def cmd_pid(a) -> int:
    if a.bins < 2:
        raise UsageError("bins must be >= 2")
    _out_dir_ok(a.out)
    data = _load(a.input)
    feats = _resolve_features(data, a.selected)
    if len(feats) < 2:
        raise UsageError("need at least 2 selected features")
    sm = synergy_matrix(data, feats, a.bins)
    _write_rows(a.out, PID_HEADER, _pid_rows(data, sm))
    write_manifest(a.out, "pid", {"in": a.input, "out": a.out, "selected": [data.names[f] for f in feats],
                                  "bins": a.bins})
    for k, (i, j) in enumerate(sm.top_pairs, 1):
        print(f"{k}. ({data.names[i]}, {data.names[j]}) synergy={sm.results[(i, j)].synergy:.4f} bits")
    return EXIT_OK


def _criteria(text) -> list[str]:
    crit = [c.upper() for c in _csv_list(text)]
    bad = [c for c in crit if c not in CRITERIA]
    if bad or not crit:
        raise UsageError(f"unknown criteria {bad}; choose from {','.join(CRITERIA)}")
    return crit


def cmd_baselines(a) -> int:
    crit = _criteria(a.criteria)
    if a.bins < 2 or a.sizes < 1:
        raise UsageError("bins must be >= 2 and sizes >= 1")
    _out_dir_ok(a.out)
    data = _load(a.input)
    binned = bin_dataset(data, a.bins)
    rows = []
    for c in crit:
        res = rank(c, binned, a.sizes)
        rows += [[c, r + 1, data.names[f], _fmt(s)] for r, (f, s) in enumerate(zip(res.ordered, res.scores))]
    _write_rows(a.out, ["criterion", "rank", "feature", "score"], rows)
    write_manifest(a.out, "baselines", {"in": a.input, "out": a.out, "criteria": crit, "bins": a.bins,
                                        "sizes": a.sizes})
    print(f"wrote rankings for {len(crit)} criteria to {a.out}")
    return EXIT_OK


def series_path(out) -> Path:
    p = Path(out)
    return p.with_name(p.stem + "_series" + (p.suffix or ".csv"))


def _compare(a, data, selection=None):
    methods = [m.upper() for m in _csv_list(a.methods)]
    bad = [m for m in methods if m != CMI_METHOD and m not in CRITERIA]
    if bad or not methods:
        raise UsageError(f"unknown methods {bad}")
    try:
        protocol = HoldoutProtocol(holdout=a.holdout, n_repeats=a.repeats, seed=a.seed)
    except ValueError as err:
        raise UsageError(str(err)) from None
    if not 1 <= a.max_size <= data.n_features:
        raise UsageError(f"max-size must lie in [1, {data.n_features}]")
    if CMI_METHOD in methods and selection is None:
        _, _, selection = _run_selection(a, data)
    return compare_selectors(data, methods, a.max_size, protocol, selection=selection, n_bins=a.bins)


def _write_compare(a, table):
    with _atomic(a.out) as tmp:
        table.write_csv(tmp)
    with _atomic(series_path(a.out)) as tmp:
        table.write_series(tmp)


def cmd_compare(a) -> int:
    _selection_configs(a)
    _out_dir_ok(a.out)
    data = _load(a.input)
    table = _compare(a, data)
    _write_compare(a, table)
    write_manifest(a.out, "compare", {"in": a.input, "out": a.out, "series": series_path(a.out),
                                      "methods": a.methods, "max_size": a.max_size, "holdout": a.holdout,
                                      "repeats": a.repeats, "seed": a.seed, "bins": a.bins, "alpha": a.alpha,
                                      "k": a.k, "n_perm": a.n_perm})
    for method, pts in table.series().items():
        print(f"{method:<10s} " + " ".join(f"{s}:{m:.4g}" for s, m in pts))
    return EXIT_OK


def cmd_report(a) -> int:
    from . import plotting

    _selection_configs(a)
    crit = _criteria(a.criteria)
    out = Path(a.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    data = _load(a.input)
    max_size = min(a.max_size, data.n_features)
    ksg, test, sel = _run_selection(a, data)
    a.out = str(out / "selection.csv")
    _write_rows(a.out, ["step", "feature", "cmi", "p_value"], _selection_rows(sel))
    write_manifest(a.out, "report:select", _selection_entries(a, ksg, test, sel))
    figures = []

    feats = list(sel.feature_set)
    if len(feats) >= 2:
        sm = synergy_matrix(data, feats, a.bins)
        _write_rows(out / "synergy.csv", PID_HEADER, _pid_rows(data, sm))
        figures.append(plotting.plot_synergy(sm.synergy(), sm.names, out / "synergy.png"))

    binned = bin_dataset(data, a.bins)
    rows = []
    for c in crit:
        res = rank(c, binned, max_size)
        rows += [[c, r + 1, data.names[f], _fmt(s)] for r, (f, s) in enumerate(zip(res.ordered, res.scores))]
    _write_rows(out / "baselines.csv", ["criterion", "rank", "feature", "score"], rows)

    a.methods = ",".join([CMI_METHOD, *crit])
    a.max_size = max_size
    table = _compare(a, data, selection=sel)
    a.out = str(out / "compare.csv")
    _write_compare(a, table)
    figures.append(plotting.plot_mae(table.series(), out / "mae.png"))

    values = np.zeros(data.n_features)
    for f, c in zip(sel.selected, sel.cmi_values):
        values[f] = c
    figures.append(plotting.plot_feature_map(data.names, np.where(values > 0, values, np.nan), out / "features.png"))

    run_manifest = manifest_path(a.input)
    if run_manifest.exists():
        lam = int(read_manifest(run_manifest).get("lambda", 0))
        if lam > 0:
            gen = np.arange(data.n_samples) // lam
            figures.append(plotting.plot_convergence(gen, data.target, out / "convergence.png"))

    write_manifest(out / "report", "report", {"in": a.input, "out_dir": out, "criteria": crit, "bins": a.bins,
                                              "alpha": a.alpha, "k": a.k, "n_perm": a.n_perm, "seed": a.seed,
                                              "max_size": max_size, "holdout": a.holdout, "repeats": a.repeats,
                                              "figures": [f.name for f in figures]})
    print(NO_FEATURES_MESSAGE if not sel.selected else f"selected: {', '.join(sel.names)}")
    print(f"report written to {out}")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _add_select_flags(p, max_size=True):
    p.add_argument("--alpha", type=float, default=0.05, help="critical level of the permutation test")
    p.add_argument("--k", type=int, default=4, help="KSG neighbour count")
    p.add_argument("--n-perm", type=int, default=200, help="surrogates per test")
    if max_size:
        p.add_argument("--max-size", type=int, default=DEFAULT_MAX_SET_SIZE)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="infosens", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    parser.add_argument("--threads", type=int, default=1, help="worker cap")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="synthetic optimization run")
    p.add_argument("--n-hh", type=int, default=3)
    p.add_argument("--generations", type=int, default=161)
    p.add_argument("--lambda", dest="lam", type=int, default=12)
    p.add_argument("--mu", type=int, default=4)
    p.add_argument("--sigma0", type=float, default=0.05)
    p.add_argument("--sections", type=int, default=3)
    p.add_argument("--points", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("planted", help="planted benchmark data")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_planted)

    p = sub.add_parser("select", help="forward CMI feature selection")
    p.add_argument("--in", dest="input", required=True)
    _add_select_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("pid", help="pairwise synergy of selected features")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--selected-features", dest="selected", required=True, help="comma-separated names or indices")
    p.add_argument("--bins", type=int, default=DEFAULT_N_BINS)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pid)

    p = sub.add_parser("baselines", help="rank features by MI criteria")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--criteria", default=",".join(CRITERIA))
    p.add_argument("--bins", type=int, default=DEFAULT_N_BINS)
    p.add_argument("--sizes", type=int, default=10, help="ranking length")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_baselines)

    p = sub.add_parser("compare", help="k-NN MAE of feature sets")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--methods", default="CMI,MIM,JMI,MRMR,CMIM")
    p.add_argument("--max-size", type=int, default=10)
    p.add_argument("--holdout", type=float, default=0.2)
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--bins", type=int, default=DEFAULT_N_BINS)
    _add_select_flags(p, max_size=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("report", help="full analysis with figures")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--criteria", default="MIM,JMI,MRMR,CMIM")
    p.add_argument("--bins", type=int, default=DEFAULT_N_BINS)
    p.add_argument("--holdout", type=float, default=0.2)
    p.add_argument("--repeats", type=int, default=10)
    _add_select_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if a.threads < 1:
        print("error: threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return a.func(a)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, FileNotFoundError, IsADirectoryError, PermissionError) as err:
        print(f"data error: {err}", file=sys.stderr)
        return EXIT_DATA
    except Exception as err:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        print(f"internal error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
