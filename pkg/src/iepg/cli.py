"""Command-line front end: JSON in, JSON (or CSV) out.

Exit status: 0 certified success, 1 certified negative, 2 numeric failure,
3 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import joinbuild, multiplicity, symmat
from ._newton import ConvergenceError
from .certificate import CertificationError, certify, verify
from .graphcore import Graph, GraphError, classify, make_family
from .realize import (RealizationError, NowhereZeroError, complete_realize, cycle_realize,
                      cycle_spectrum_check, decay_ratio_table, exponent_schedule,
                      generic_realize, jacobi_from_spectrum)
from .ssp import ssp_check

EXIT_OK, EXIT_NEGATIVE, EXIT_NUMERIC, EXIT_INPUT = 0, 1, 2, 3

NUMERIC_ERRORS = (ConvergenceError, RealizationError, NowhereZeroError, CertificationError,
                  joinbuild.JoinError)


class InputError(ValueError):
    pass


def _field(data: dict, name: str, conv=lambda x: x, default=...):
    if not isinstance(data, dict):
        raise InputError("input must be a JSON object")
    if name not in data:
        if default is ...:
            raise InputError(f"missing field {name!r}")
        return default
    try:
        return conv(data[name])
    except (TypeError, ValueError, KeyError) as exc:
        raise InputError(f"field {name!r}: {exc}") from exc


def _floats(x):
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or not np.all(np.isfinite(arr)):
        raise ValueError("expected a list of finite numbers")
    return arr


def _ints(x):
    if not isinstance(x, list) or not all(isinstance(i, int) for i in x):
        raise ValueError("expected a list of integers")
    return x


def _graph(x) -> Graph:
    if isinstance(x, dict) and "family" in x:
        return make_family(x["family"], x.get("params", []))
    return Graph.from_json(x)


def _matrix(x) -> np.ndarray:
    if isinstance(x, dict):
        return symmat.from_json(x)
    m = np.asarray(x, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    return symmat.symmetric(m)


def _cert_out(cert) -> dict:
    return cert.to_json()


# commands -----------------------------------------------------------------

def cmd_realize(data, cfg):
    g = _field(data, "graph", _graph)
    spectrum = _field(data, "spectrum", _floats)
    tests = _field(data, "test_vectors", lambda x: [list(map(float, y)) for y in x], None)
    method = _field(data, "method", str, "auto")
    if method == "auto":
        method = {"path": "jacobi", "cycle": "cycle", "complete": "complete"}.get(classify(g), "generic")
        if method in ("jacobi", "cycle") and tests is not None:
            method = "generic"
    if method == "jacobi":
        if classify(g) != "path":
            raise InputError("field 'method': jacobi needs a path")
        a = jacobi_from_spectrum(np.sort(spectrum))
        cert = certify("jacobi", a, g, spectrum, check_ssp=True, spectral_tol=cfg.spectral_tol,
                       params={"seed": cfg.seed})
    elif method == "cycle":
        a, cert = cycle_realize(spectrum, seed=cfg.seed, gap_tol=cfg.gap_tol)
    elif method == "complete":
        _, _, cert = complete_realize(g.n, spectrum, tests, seed=cfg.seed)
    elif method == "generic":
        _, _, cert = generic_realize(g, spectrum, tests, seed=cfg.seed)
    else:
        raise InputError(f"field 'method': unknown method {method!r}")
    return EXIT_OK, _cert_out(cert)


def cmd_ssp(data, cfg):
    m = _field(data, "matrix", _matrix)
    rep = ssp_check(m, zero_tol=cfg.zero_tol)
    return (EXIT_OK if rep.holds else EXIT_NEGATIVE), rep.to_json()


def cmd_compat(data, cfg):
    v = _field(data, "V", multiplicity.as_matrix)
    w = _field(data, "W", multiplicity.as_matrix)
    rep = multiplicity.compatible(v, w)
    return (EXIT_OK if rep.compatible else EXIT_NEGATIVE), rep.to_json()


def cmd_search01(data, cfg):
    og = _field(data, "orders_g", _ints)
    oh = _field(data, "orders_h", _ints)
    r_max = _field(data, "r_max", int, None)
    res = multiplicity.search_compatible_01(og, oh, r_max)
    return (EXIT_OK if res.found else EXIT_NEGATIVE), res.to_json()


def cmd_join2(data, cfg):
    g = _field(data, "G", _graph)
    h = _field(data, "H", _graph)
    mu = _field(data, "mu", float, 0.0)
    nu = _field(data, "nu", float, 2.0)
    if "V" in data or "W" in data:
        v = _field(data, "V", multiplicity.as_matrix)
        w = _field(data, "W", multiplicity.as_matrix)
    else:
        from .graphcore import components
        res = multiplicity.search_compatible_01([c.n for c, _ in components(g)],
                                                [c.n for c, _ in components(h)])
        if not res.found:
            return EXIT_NEGATIVE, res.to_json()
        v, w = res.v, res.w
    cert = joinbuild.join_two_eigenvalues(g, h, v, w, mu, nu, seed=cfg.seed)
    return EXIT_OK, _cert_out(cert)


def cmd_partialjoin(data, cfg):
    m = _field(data, "matrix", _matrix)
    g = _field(data, "G", _graph)
    v1 = _field(data, "V1", _ints)
    v2 = _field(data, "V2", _ints)
    h = _field(data, "H", _graph)
    if "sigma_extra" in data:
        extra = _field(data, "sigma_extra", _floats)
        cert, _ = joinbuild.partial_join_extend(m, g, v1, v2, h, extra, seed=cfg.seed,
                                                gap_tol=cfg.gap_tol)
    else:
        cert, _ = joinbuild.partial_join_distinct(m, g, v1, v2, h, seed=cfg.seed, gap_tol=cfg.gap_tol)
    return EXIT_OK, _cert_out(cert)


def cmd_cycles(data, cfg):
    spectrum = _field(data, "spectrum", _floats)
    if spectrum.size < 3:
        raise InputError("field 'spectrum': cycles need at least 3 values")
    if not cycle_spectrum_check(spectrum, cfg.gap_tol):
        return EXIT_NEGATIVE, {"accepted": False}
    _, cert = cycle_realize(spectrum, seed=cfg.seed, gap_tol=cfg.gap_tol)
    return EXIT_OK, _cert_out(cert)


def cmd_scenario(data, cfg):
    name = cfg.scenario or _field(data, "name", str)
    if name not in joinbuild.SCENARIOS:
        raise InputError(f"field 'scenario': unknown scenario {name!r}")
    kwargs = {k: v for k, v in (data or {}).items() if k != "name"}
    try:
        cert = joinbuild.SCENARIOS[name](**kwargs, seed=cfg.seed)
    except TypeError as exc:
        raise InputError(f"scenario {name!r}: {exc}") from exc
    return EXIT_OK, _cert_out(cert)


def cmd_verify(data, cfg):
    rep = verify(data, spectral_tol=cfg.spectral_tol, zero_tol=cfg.zero_tol)
    return (EXIT_OK if rep.ok else EXIT_NEGATIVE), rep.to_json()


def cmd_decay(data, cfg):
    tree = _field(data, "graph", _graph)
    spectrum = _field(data, "spectrum", _floats)
    mode = _field(data, "mode", str, "injective")
    ts = _field(data, "t_values", _floats, None)
    sched = exponent_schedule(tree, mode)
    table = decay_ratio_table(sched, spectrum) if ts is None else decay_ratio_table(sched, spectrum, ts)
    return EXIT_OK, table.to_csv()


COMMANDS = {"realize": cmd_realize, "ssp": cmd_ssp, "compat": cmd_compat, "search01": cmd_search01,
            "join2": cmd_join2, "partialjoin": cmd_partialjoin, "cycles": cmd_cycles,
            "scenario": cmd_scenario, "verify": cmd_verify, "decay": cmd_decay}


def _positive(x: str) -> float:
    v = float(x)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerances must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="iepg", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("input", nargs="?", default="-",
                   help="JSON input file, '-' for stdin (default)")
    p.add_argument("--json", dest="inline", help="inline JSON input instead of a file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--zero-tol", type=_positive)
    p.add_argument("--gap-tol", type=_positive)
    p.add_argument("--spectral-tol", type=_positive)
    p.add_argument("--out", help="write the artifact here instead of stdout")
    p.add_argument("--scenario", choices=sorted(joinbuild.SCENARIOS))
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


def _read_input(args):
    if args.inline is not None:
        text = args.inline
    elif args.command == "scenario" and args.input == "-" and sys.stdin.isatty():
        text = "{}"
    elif args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input) as fh:
            text = fh.read()
    if args.command == "scenario" and not text.strip():
        text = "{}"
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def _emit(payload, args):
    text = payload if isinstance(payload, str) else json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(message)s")
    try:
        data = _read_input(args)
        status, payload = COMMANDS[args.command](data, args)
    except NUMERIC_ERRORS as exc:
        _emit({"error": "numeric", "message": str(exc)}, args)
        return EXIT_NUMERIC
    except (InputError, GraphError, ValueError, KeyError, TypeError) as exc:
        print(f"iepg {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(payload, args)
    return status


if __name__ == "__main__":
    sys.exit(main())
