"""Job files, the analysis pipeline, and the corpus runner."""

from __future__ import annotations

import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import __version__
from .errors import ChernError, InputError
from .filtration import DEFAULT_MAX_INDEX, DEFAULT_WINDOW, Filtration, check_equigenerated
from .groebner import Ideal
from .local import CyclicModule, make_ring
from .parser import parse_polynomial
from .poly import DEFAULT_PRIME, FieldSpec
from .theorems import CHECKS, INCONSISTENT, Analysis, Settings, run_checks

SEED_ENV = "CHERN_SEED"
REPORT_SCHEMA = 1
WINDOW_KEYS = ("stab", "superficial", "vv")
KNOWN_KEYS = {"name", "field", "variables", "ring_relations", "module_relations", "q",
              "filtration_head", "J", "seed", "windows", "max_index", "checks", "description"}


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 42
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {raw!r}", "E_SEED") from None


def _engine() -> dict:
    return {"name": "chern", "version": __version__, "report_schema": REPORT_SCHEMA}


@dataclass
class Job:
    variables: List[str]
    ring_relations: List[str]
    q: List[str]
    field: Optional[int] = DEFAULT_PRIME
    module_relations: List[str] = dataclasses.field(default_factory=list)
    filtration_head: List[List[str]] = dataclasses.field(default_factory=list)
    J: Optional[List[str]] = None
    seed: int = 42
    windows: Dict[str, int] = dataclasses.field(default_factory=lambda: {k: DEFAULT_WINDOW for k in WINDOW_KEYS})
    max_index: int = DEFAULT_MAX_INDEX
    checks: Optional[List[str]] = None
    name: str = "job"

    def echo(self) -> dict:
        return {
            "name": self.name, "field": "QQ" if self.field is None else self.field,
            "variables": self.variables, "ring_relations": self.ring_relations,
            "module_relations": self.module_relations, "q": self.q,
            "filtration_head": self.filtration_head, "J": self.J, "seed": self.seed,
            "windows": self.windows, "max_index": self.max_index, "checks": self.checks,
        }


def _str_list(data: dict, key: str, required: bool = False) -> List[str]:
    if key not in data:
        if required:
            raise InputError(f"job is missing the field {key!r}", "E_MISSING_FIELD")
        return []
    value = data[key]
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise InputError(f"field {key!r} must be a list of strings", "E_FIELD_TYPE")
    return list(value)


def _int(data: dict, key: str, default: int, least: int = 0) -> int:
    value = data.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int) or value < least:
        raise InputError(f"field {key!r} must be an integer >= {least}", "E_FIELD_TYPE")
    return value


def _field(value) -> Optional[int]:
    if value is None:
        return DEFAULT_PRIME
    if isinstance(value, str) and value.upper() in ("QQ", "Q", "RATIONALS"):
        return None
    if isinstance(value, int) and not isinstance(value, bool):
        FieldSpec(value)
        return value
    raise InputError(f"field must be a prime or 'QQ', got {value!r}", "E_FIELD")


def job_from_dict(data: dict, name: str = "job") -> Job:
    """Validate the raw JSON structure and fill defaults (no algebra yet)."""
    if not isinstance(data, dict):
        raise InputError("a job must be a JSON object", "E_FIELD_TYPE")
    unknown = sorted(set(data) - KNOWN_KEYS)
    if unknown:
        raise InputError(f"unknown job field(s): {', '.join(unknown)}", "E_UNKNOWN_FIELD")
    variables = _str_list(data, "variables", required=True)
    if not variables or len(set(variables)) != len(variables):
        raise InputError("variables must be a nonempty list of distinct names", "E_VARIABLES")
    for v in variables:
        if not (v[:1].isalpha() and v.isalnum()):
            raise InputError(f"invalid variable name {v!r}", "E_VARIABLES")
    head = data.get("filtration_head", [])
    if not isinstance(head, list) or not all(
            isinstance(t, list) and all(isinstance(g, str) for g in t) for t in head):
        raise InputError("filtration_head must be a list of generator lists", "E_FIELD_TYPE")
    windows = {k: DEFAULT_WINDOW for k in WINDOW_KEYS}
    raw_windows = data.get("windows", {})
    if not isinstance(raw_windows, dict) or set(raw_windows) - set(WINDOW_KEYS):
        raise InputError(f"windows must be an object with keys {WINDOW_KEYS}", "E_FIELD_TYPE")
    for k in WINDOW_KEYS:
        windows[k] = _int(raw_windows, k, DEFAULT_WINDOW, least=1)
    checks = data.get("checks")
    if checks is not None:
        checks = _str_list(data, "checks")
        bad = [c for c in checks if c not in CHECKS]
        if bad:
            raise InputError(f"unknown check id(s): {', '.join(bad)}", "E_CHECKS")
    J = data.get("J")
    if J is not None:
        J = _str_list(data, "J")
    return Job(
        variables=variables,
        ring_relations=_str_list(data, "ring_relations"),
        module_relations=_str_list(data, "module_relations"),
        q=_str_list(data, "q") or list(variables),
        field=_field(data.get("field")),
        filtration_head=[list(t) for t in head],
        J=J,
        seed=_int(data, "seed", default_seed()),
        windows=windows,
        max_index=_int(data, "max_index", DEFAULT_MAX_INDEX, least=1),
        checks=checks,
        name=str(data.get("name", name)),
    )


def load_job(path) -> Job:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as ex:
        raise InputError(f"cannot read job file {path}: {ex.strerror}", "E_FILE") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as ex:
        raise InputError(f"malformed JSON in {path}: {ex.msg} at line {ex.lineno}, "
                         f"column {ex.colno}", "E_JSON") from None
    job = job_from_dict(data, name=path.stem)
    build(job)  # algebraic validation happens at load time
    return job


@dataclass
class Built:
    filtration: Filtration
    J_elements: Optional[list]


def build(job: Job) -> Built:
    """Parse the polynomials and construct the filtration."""
    field_ = FieldSpec(job.field)
    ring = make_ring(job.variables, job.ring_relations, field_)
    S = ring.ambient

    def polys(texts: Sequence[str], what: str):
        out = []
        for t in texts:
            try:
                out.append(parse_polynomial(t, S))
            except InputError as ex:
                raise InputError(f"{what} {t!r}: {ex}", ex.code) from None
        return out

    rel = polys(job.module_relations, "module relation")
    for f in rel:
        if not f.is_homogeneous():
            raise InputError(f"module relation {f} is not homogeneous", "E_NONHOMOGENEOUS")
    M = ring.module(rel)
    q_polys = polys(job.q, "q")
    for f in q_polys:
        if not f.is_homogeneous():
            raise InputError(f"q generator {f} is not homogeneous", "E_Q_NOT_EQUIGENERATED")
    q = Ideal(S, q_polys)
    check_equigenerated(q)
    head = []
    for j, gens in enumerate(job.filtration_head, start=1):
        ps = polys(gens, f"filtration term {j}")
        for f in ps:
            if not f.is_homogeneous():
                raise InputError(f"filtration term {j} is not homogeneous", "E_NONHOMOGENEOUS")
        head.append(Ideal(S, ps))
    F = Filtration(M, q, head)
    J_elements = polys(job.J, "J") if job.J is not None else None
    return Built(F, J_elements)


@dataclass
class Report:
    data: dict
    exit_code: int
    timings: Dict[str, float] = dataclasses.field(default_factory=dict)

    def to_json(self, include_timings: bool = True) -> str:
        out = dict(self.data)
        if include_timings:
            out["timings"] = {k: round(v, 4) for k, v in self.timings.items()}
        return json.dumps(out, indent=2) + "\n"


def run_job(job: Job) -> Report:
    """Full pipeline; the exit code is 0 (consistent), 2, 3 or 4."""
    timings: Dict[str, float] = {}
    t0 = time.perf_counter()
    data: dict = {"engine": _engine(), "job": job.echo(),
                  "seed": job.seed}
    try:
        built = build(job)
        timings["build"] = time.perf_counter() - t0
        settings = Settings(seed=job.seed, stab_window=job.windows["stab"],
                            superficial_window=job.windows["superficial"],
                            vv_window=job.windows["vv"], max_index=job.max_index)
        an = Analysis(built.filtration, settings, built.J_elements)
        data["filtration"] = built.filtration.describe()
        data["hilbert"] = {"M": an.hd.as_dict()}
        if an.d >= 1:
            data["superficial"] = an.seq.as_dict()
            data["J"] = [str(a) for a in an.elements]
            data["hilbert"].update(N=an.hdN.as_dict(), E=an.hdE.as_dict())
            if an.hd_sat is not None:
                data["hilbert"]["sat"] = an.hd_sat.as_dict()
            data["v"] = an.v
            data["u"] = an.u if an.d == 1 else None
        data["ring"] = an.summary()
        timings["hilbert"] = time.perf_counter() - t0
        reports = run_checks(an, job.checks)
        data["theorems"] = [r.as_dict() for r in reports]
        if an.d >= 1 and (job.checks is None or "sally_analysis" in job.checks):
            data["sally"] = an.sally.as_dict()
        bad = [r.id for r in reports if r.verdict == INCONSISTENT]
        data["status"] = {"exit_code": 4 if bad else 0,
                          "outcome": "inconsistent" if bad else "consistent",
                          "inconsistent_checks": bad}
    except ChernError as ex:
        data["status"] = {"exit_code": ex.exit_code, "outcome": "error",
                          "error": {"code": ex.code, "message": str(ex)}}
    timings["total"] = time.perf_counter() - t0
    return Report(data, data["status"]["exit_code"], timings)


def run_job_file(path) -> Report:
    """Load and run one job file; load failures become error reports."""
    t0 = time.perf_counter()
    try:
        job = load_job(path)
    except ChernError as ex:
        data = {"engine": _engine(), "job": {"name": Path(path).stem},
                "status": {"exit_code": ex.exit_code, "outcome": "error",
                           "error": {"code": ex.code, "message": str(ex)}}}
        return Report(data, ex.exit_code, {"total": time.perf_counter() - t0})
    return run_job(job)


# -- corpus ------------------------------------------------------------------

SNAPSHOT_SUFFIX = ".expected.json"


def job_files(directory) -> List[Path]:
    d = Path(directory)
    if not d.is_dir():
        raise InputError(f"{d} is not a directory", "E_FILE")
    return sorted(p for p in d.glob("*.json") if not p.name.endswith(SNAPSHOT_SUFFIX))


def _run_for_corpus(path: str) -> tuple:
    r = run_job_file(path)
    return path, r.to_json(include_timings=False), r.exit_code, r.timings.get("total", 0.0)


@dataclass
class CorpusSummary:
    results: List[dict]
    warnings: List[str]
    elapsed: float

    @property
    def passed(self) -> bool:
        return all(r["ok"] for r in self.results)

    def as_dict(self) -> dict:
        return {"passed": self.passed, "jobs": len(self.results), "warnings": self.warnings,
                "results": self.results}


def corpus_run(directory, jobs: int = 1, out_dir=None, update_snapshots: bool = False) -> CorpusSummary:
    """Run every job in ``directory``; a job fails on exit status 4 or on a
    difference from its snapshot ``<name>.expected.json`` (timings excluded)."""
    t0 = time.perf_counter()
    files = [str(p) for p in job_files(directory)]
    warnings = [] if files else [f"no job files in {directory}"]
    if jobs > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outputs = list(pool.map(_run_for_corpus, files))
    else:
        outputs = [_run_for_corpus(f) for f in files]
    results = []
    for path, text, code, seconds in sorted(outputs):
        p = Path(path)
        snap = p.with_name(p.stem + SNAPSHOT_SUFFIX)
        entry = {"job": p.name, "exit_code": code, "seconds": round(seconds, 3)}
        if update_snapshots and code != 4:
            snap.write_text(text)
            entry["snapshot"] = "written"
        elif snap.exists():
            entry["snapshot"] = "match" if snap.read_text() == text else "differs"
        else:
            entry["snapshot"] = "absent"
        entry["ok"] = code != 4 and entry["snapshot"] != "differs"
        if out_dir is not None:
            Path(out_dir).mkdir(parents=True, exist_ok=True)
            (Path(out_dir) / (p.stem + ".report.json")).write_text(text)
        results.append(entry)
    return CorpusSummary(results, warnings, time.perf_counter() - t0)


# -- random monomial quotients -------------------------------------------------

def random_monomial_job(rng: random.Random, max_vars: int = 3, max_degree: int = 4,
                        max_gens: int = 3, name: str = "random") -> Optional[Job]:
    """A seeded monomial quotient k[x..]/I with the m-adic filtration, or None
    when the draw has dimension zero."""
    names = ["x", "y", "z", "w"][:max_vars]
    n = rng.randint(1, max_vars)
    variables = names[:n]
    gens = []
    for _ in range(rng.randint(1, max_gens)):
        deg = rng.randint(2, max_degree)
        e = [0] * n
        for _ in range(deg):
            e[rng.randrange(n)] += 1
        gens.append("*".join(f"{v}^{k}" if k > 1 else v for v, k in zip(variables, e) if k))
    gens = sorted(set(gens))
    ring = make_ring(variables, gens)
    if ring.dim < 1:
        return None
    return Job(variables=variables, ring_relations=gens, q=list(variables), name=name)


def random_monomial_jobs(count: int, seed: int = 0, **kw) -> List[Job]:
    rng = random.Random(seed)
    out: List[Job] = []
    while len(out) < count:
        job = random_monomial_job(rng, name=f"random-{len(out):03d}", **kw)
        if job is not None:
            out.append(job)
    return out
