"""Batch front end.

Usage::

    pnaive <subcommand> CONFIG.json [-o RESULT.json]

The config is a JSON object. Common keys: ``model`` (``{"kind": "free_group",
"rank": 2}``, ``{"kind": "free_product", "orders": [2, 3]}`` or
``{"kind": "half_plane", "generators": [...]}``), ``seed`` and ``bounds``.
Each subcommand adds its own keys; missing keys take the defaults listed in
``DEFAULTS``. Elements are words such as ``"aB"`` or ``"s t^2"``; ends are
``{"prefix": [...], "period": [...]}`` in tree addresses.

The result record (format ``pnaive-result/1``) is JSON with sorted keys and
embeds the fully resolved config. It carries no timestamps, paths or worker
counts, so identical configs give byte-identical records.

Exit codes: 0 pass, 1 fail with witness, 2 refusal or exhausted budget,
64 config parse/validation error, 65 capability violation.
"""
from __future__ import annotations

import argparse
import copy
import json
import sys
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple

from . import boundary, certify, isometry, partner
from .errors import (
    CapabilityError,
    CertificateFailure,
    DomainError,
    NeedsEllipticization,
    PnaiveError,
    Refusal,
    SearchFailure,
    SubgroupTooLarge,
    UnsupportedModel,
)
from .models import model_from_description
from .points import EndPoint

RESULT_FORMAT = "pnaive-result/1"

EXIT_PASS, EXIT_FAIL, EXIT_REFUSAL, EXIT_PARSE, EXIT_CAPABILITY = 0, 1, 2, 64, 65

BOUND_DEFAULTS = {
    "region_radius": 6,
    "depth": 3,
    "syllable_bound": 8,
    "exponent_bound": 3,
    "max_exp": 6,
    "max_candidates": 400,
    "max_length": 8,
    "conjugator_length": 2,
}

DEFAULTS: Dict[str, dict] = {
    "classify": {"elements": []},
    "find-partner": {"subgroups": []},
    "certify-free": {"gammaN": None, "subgroup": []},
    "check-star": {"M": [], "ms": [2, 3], "u": None, "N": None, "triple": None},
    "check-noloops": {"u": None, "gs": [], "N": None, "exp_bound": None},
    "boundary-demo": {
        "zeta": None,
        "measures": None,
        "tol": "1/100",
        "budget": 20,
        "freeness_length": 3,
        "freeness_depth": 3,
        "minimality_depth": 2,
        "minimality_ends": 10,
        "minimality_budget": 8,
    },
    "probe-acylindricity": {"epsilon": 0, "M": 4, "word_length_cap": 4},
}


class ConfigError(Exception):
    """Config could not be parsed or validated; ``where`` locates the problem."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


class Outcome(Exception):
    def __init__(self, status: int, result: dict):
        self.status = status
        self.result = result


# -- config -----------------------------------------------------------------

def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(path, str(exc))
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg)
    if not isinstance(cfg, dict):
        raise ConfigError(path, "top level must be an object")
    return cfg


def resolve_config(cfg: dict, subcommand: str) -> dict:
    """Fill defaults and validate; the result is what gets embedded in records."""
    cfg = copy.deepcopy(cfg)
    named = cfg.pop("subcommand", subcommand)
    if named != subcommand:
        raise ConfigError("subcommand", f"config is for {named!r}, invoked as {subcommand!r}")
    cfg.pop("output", None)
    if "model" not in cfg or not isinstance(cfg["model"], dict):
        raise ConfigError("model", "a model description object is required")
    if "seed" not in cfg:
        raise ConfigError("seed", "seed is mandatory")
    if not isinstance(cfg["seed"], int):
        raise ConfigError("seed", "must be an integer")
    bounds = dict(BOUND_DEFAULTS)
    for k, v in cfg.get("bounds", {}).items():
        if k not in bounds:
            raise ConfigError(f"bounds.{k}", "unknown bound")
        bounds[k] = v
    for k, v in bounds.items():
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ConfigError(f"bounds.{k}", "must be a positive integer")
    cfg["bounds"] = bounds
    for k, v in DEFAULTS[subcommand].items():
        cfg.setdefault(k, v)
    known = {"model", "seed", "bounds"} | set(DEFAULTS[subcommand])
    for k in cfg:
        if k not in known:
            raise ConfigError(k, f"unknown key for {subcommand}")
    cfg["subcommand"] = subcommand
    return cfg


def _model(cfg):
    try:
        return model_from_description(cfg["model"])
    except (DomainError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError("model", str(exc))


def _element(model, text, where):
    try:
        return model.parse(text)
    except (DomainError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(where, f"cannot parse {text!r}: {exc}")


def _elements(model, items, where):
    if not isinstance(items, list):
        raise ConfigError(where, "must be a list")
    return [_element(model, x, f"{where}[{i}]") for i, x in enumerate(items)]


def _end(model, obj, where) -> EndPoint:
    try:
        xi = EndPoint.make(tuple(obj["prefix"]), tuple(obj["period"]))
    except (KeyError, TypeError, ValueError, DomainError) as exc:
        raise ConfigError(where, f"bad end: {exc}")
    if not model.valid_address(xi.prefix + xi.period * 3):
        raise ConfigError(where, "not a valid end of this tree")
    return xi


def _end_record(xi: EndPoint) -> dict:
    return {"prefix": list(xi.prefix), "period": list(xi.period)}


# -- subcommands --------------------------------------------------------------

def cmd_classify(cfg) -> Tuple[int, dict]:
    model = _model(cfg)
    out = []
    for g in _elements(model, cfg["elements"], "elements"):
        rep = isometry.classify(g)
        rec = {"element": str(g), "kind": rep.kind.value, "translation_length": str(rep.translation_length),
               "approximate": rep.approximate}
        if rep.ends:
            rec["attracting_end"], rec["repelling_end"] = map(_end_record, rep.ends)
        out.append(rec)
    return EXIT_PASS, {"classifications": out}


def cmd_find_partner(cfg) -> Tuple[int, dict]:
    model = _model(cfg)
    subs = cfg["subgroups"]
    if not isinstance(subs, list):
        raise ConfigError("subgroups", "must be a list of generator lists")
    subgroups = [_elements(model, gens if isinstance(gens, list) else [gens], f"subgroups[{i}]")
                 for i, gens in enumerate(subs)]
    b = cfg["bounds"]
    params = partner.PipelineParams(
        region_radius=b["region_radius"], depth=b["depth"], syllable_bound=b["syllable_bound"],
        exponent_bound=b["exponent_bound"], seed=cfg["seed"],
        budget=partner.SearchBudget(b["max_exp"], b["max_candidates"], b["max_length"], b["conjugator_length"]),
    )
    try:
        res = partner.pnaive_pipeline(model, subgroups, params)
    except CertificateFailure as exc:
        cert = exc.certificate
        return EXIT_FAIL, {"error": str(exc), "certificate": cert.to_record() if cert else None}
    return EXIT_PASS, {
        "partner": res.partner.to_record(),
        "escape": {"construction": res.escape.construction},
        "certificates": [c.to_record() for c in res.certificates],
    }


def cmd_certify_free(cfg) -> Tuple[int, dict]:
    model = _model(cfg)
    if cfg["gammaN"] is None:
        raise ConfigError("gammaN", "required")
    g = _element(model, cfg["gammaN"], "gammaN")
    H = _elements(model, cfg["subgroup"], "subgroup")
    b = cfg["bounds"]
    cert = certify.freeness_certificate(g, H, b["syllable_bound"], b["exponent_bound"])
    return (EXIT_PASS if cert.passed else EXIT_FAIL), {"certificate": cert.to_record()}


def cmd_check_star(cfg) -> Tuple[int, dict]:
    model = _model(cfg)
    M = _elements(model, cfg["M"], "M")
    if not M:
        raise ConfigError("M", "must be nonempty")
    ms = cfg["ms"]
    if not isinstance(ms, list) or not all(isinstance(m, int) and m >= 1 for m in ms):
        raise ConfigError("ms", "must be a list of positive integers")
    if cfg["triple"] is not None:
        triple = _elements(model, cfg["triple"], "triple")
        results = [(m, certify.star_property_check(M, m, triple=triple)) for m in ms]
        head = {"triple": [str(x) for x in triple]}
    else:
        u = _element(model, cfg["u"], "u") if cfg["u"] is not None else None
        run = certify.star_run(M, ms, u, cfg["N"])
        results = list(run.results)
        head = {"u": str(run.u), "N": run.N, "triple": [str(run.u ** (run.N * j)) for j in (1, 2, 3)]}
    ok = all(r.passed for _, r in results)
    head["checks"] = [dict(r.to_record(), m=m) for m, r in results]
    return (EXIT_PASS if ok else EXIT_FAIL), head


def cmd_check_noloops(cfg) -> Tuple[int, dict]:
    model = _model(cfg)
    if cfg["u"] is None:
        raise ConfigError("u", "required")
    u = _element(model, cfg["u"], "u")
    gs = _elements(model, cfg["gs"], "gs")
    N = cfg["N"] if cfg["N"] is not None else certify.noloops_bound(u, gs, max(1, len(gs))) if gs else 1
    exp_bound = cfg["exp_bound"] if cfg["exp_bound"] is not None else 3 * N
    res = certify.noloops_check(u, gs, N, exp_bound)
    return (EXIT_PASS if res.passed else EXIT_FAIL), {"N": N, "exp_bound": exp_bound, "check": res.to_record()}


def _seeded_measures(model, seed):
    out = []
    for k in range(2):
        ends = []
        i = 0
        while len(ends) < 3:
            xi = boundary.random_end(model, (seed, "measure", k, i))
            i += 1
            if xi not in ends:
                ends.append(xi)
        out.append(boundary.EndMeasure.make(zip(ends, (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)))))
    return out


def cmd_boundary_demo(cfg) -> Tuple[int, dict]:
    model = _model(cfg)
    if not model.is_tree:
        raise UnsupportedModel("the boundary demo runs on tree models")
    seed = cfg["seed"]
    if cfg["measures"] is None:
        mu1, mu2 = _seeded_measures(model, seed)
    else:
        if not isinstance(cfg["measures"], list) or len(cfg["measures"]) != 2:
            raise ConfigError("measures", "need exactly two measures")
        mus = []
        for i, atoms in enumerate(cfg["measures"]):
            try:
                mus.append(boundary.EndMeasure.make(
                    (_end(model, a, f"measures[{i}]"), Fraction(a["weight"])) for a in atoms))
            except (KeyError, TypeError, ValueError, DomainError) as exc:
                raise ConfigError(f"measures[{i}]", str(exc))
        mu1, mu2 = mus
    zeta = (_end(model, cfg["zeta"], "zeta") if cfg["zeta"] is not None
            else boundary.random_end(model, (seed, "target")))
    try:
        tol = Fraction(cfg["tol"])
    except (TypeError, ValueError) as exc:
        raise ConfigError("tol", str(exc))
    depth = cfg["bounds"]["depth"]
    ok = True
    try:
        trace = boundary.proximality_run(model, mu1, mu2, zeta, depth, tol, cfg["budget"])
        prox = dict(trace.to_record(), status="pass")
    except SearchFailure as exc:
        prox = {"status": "budget", "error": str(exc)}
        ok = None
    free = []
    for g in model.elements(cfg["freeness_length"], 1):
        rep = boundary.topological_freeness_check(g, cfg["freeness_depth"])
        ok = ok and rep.passed if ok is not None else None
        free.append({"element": str(g), "status": "pass" if rep.passed else "fail",
                     "interior_cylinders": [list(c.prefix) for c in rep.interior_cylinders]})
    mins = []
    for i in range(cfg["minimality_ends"]):
        xi = boundary.random_end(model, (seed, "minimality", i))
        rep = boundary.minimality_check(model, xi, cfg["minimality_depth"], cfg["minimality_budget"])
        ok = ok and rep.passed if ok is not None else None
        mins.append({"end": _end_record(xi), "status": "pass" if rep.passed else "fail",
                     "uncovered": [list(c.prefix) for c in rep.uncovered]})
    status = EXIT_REFUSAL if ok is None else EXIT_PASS if ok else EXIT_FAIL
    return status, {
        "measures": [mu1.to_record(), mu2.to_record()],
        "zeta": _end_record(zeta),
        "proximality": prox,
        "topological_freeness": free,
        "minimality": mins,
    }


def cmd_probe_acylindricity(cfg) -> Tuple[int, dict]:
    model = _model(cfg)
    n = isometry.acylindricity_probe(model, cfg["epsilon"], cfg["M"], cfg["bounds"]["region_radius"],
                                     cfg["word_length_cap"])
    return EXIT_PASS, {"N_lower_bound": n, "note": "lower bound from a finite ball, not a proof"}


COMMANDS: Dict[str, Callable[[dict], Tuple[int, dict]]] = {
    "classify": cmd_classify,
    "find-partner": cmd_find_partner,
    "certify-free": cmd_certify_free,
    "check-star": cmd_check_star,
    "check-noloops": cmd_check_noloops,
    "boundary-demo": cmd_boundary_demo,
    "probe-acylindricity": cmd_probe_acylindricity,
}

STATUS_NAMES = {EXIT_PASS: "pass", EXIT_FAIL: "fail", EXIT_REFUSAL: "refused",
                EXIT_PARSE: "config_error", EXIT_CAPABILITY: "capability_error"}


def run(cfg: dict, subcommand: str) -> Tuple[int, dict]:
    """Execute one subcommand on a parsed config; returns ``(exit status, record)``."""
    record = {"format": RESULT_FORMAT, "subcommand": subcommand}
    try:
        resolved = resolve_config(cfg, subcommand)
        record["config"] = resolved
        status, result = COMMANDS[subcommand](resolved)
    except ConfigError as exc:
        status, result = EXIT_PARSE, {"error": str(exc), "location": exc.where}
    except (CapabilityError, UnsupportedModel) as exc:
        status, result = EXIT_CAPABILITY, {"error": str(exc)}
    except Refusal as exc:
        status, result = EXIT_REFUSAL, {"error": str(exc), "estimate": exc.estimate}
    except (SearchFailure, NeedsEllipticization) as exc:
        status, result = EXIT_REFUSAL, {"error": str(exc)}
    except (SubgroupTooLarge, DomainError) as exc:
        status, result = EXIT_PARSE, {"error": str(exc), "location": "input"}
    except PnaiveError as exc:
        status, result = EXIT_FAIL, {"error": str(exc)}
    record["status"] = STATUS_NAMES[status]
    record["result"] = result
    return status, record


def dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def main(argv: Optional[list] = None) -> int:
    ap = argparse.ArgumentParser(prog="pnaive", description="Ping-pong partners with brute-force certificates.")
    ap.add_argument("subcommand", choices=sorted(COMMANDS))
    ap.add_argument("config", help="JSON config file")
    ap.add_argument("-o", "--output", help="result record path (default: the config's 'output', else stdout)")
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"pnaive: {exc}", file=sys.stderr)
        return EXIT_PARSE
    out = args.output or cfg.get("output")
    status, record = run(cfg, args.subcommand)
    text = dumps(record)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if status:
        print(f"pnaive: {record['status']}: {record['result'].get('error', '')}".rstrip(": "), file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
