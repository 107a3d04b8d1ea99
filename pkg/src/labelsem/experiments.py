"""Seeded sweeps of the language game over reliability values."""

from __future__ import annotations

import csv
import io
import json
from collections import defaultdict
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .errors import ConfigError, InputError
from .game import DEFAULT_LEARNING_RATE, SCHEDULES, ElementDistribution, GameWorld, advance

CSV_HEADER = ("w", "replicate", "timestep", "mean_lambda", "sd_lambda")


@dataclass(frozen=True)
class ExperimentConfig:
    reliability_values: tuple = (0.6, 0.75, 0.9, 1.0)
    element_distribution: tuple = ((0.0, 1.0), (0.0, 0.5))
    population_size: int = 10
    timesteps: int = 2000
    replicates: int = 25
    learning_rate: float = DEFAULT_LEARNING_RATE
    master_seed: int = 0
    schedule: str = "all-pairs"

    def __post_init__(self):
        set_ = lambda name, value: object.__setattr__(self, name, value)  # noqa: E731
        for name, low in (("population_size", 2), ("timesteps", 0), ("replicates", 1)):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < low:
                raise ConfigError(name, f"must be an integer >= {low}, got {value!r}")
            set_(name, int(value))
        try:
            ws = tuple(float(w) for w in self.reliability_values)
        except (TypeError, ValueError):
            raise ConfigError("reliability_values", "must be a list of numbers") from None
        if not ws or not all(0.0 <= w <= 1.0 for w in ws):
            raise ConfigError("reliability_values", f"need a nonempty list in [0, 1], got {ws}")
        set_("reliability_values", ws)
        try:
            dist = ElementDistribution(tuple(tuple(b) for b in self.element_distribution))
        except (TypeError, ValueError) as exc:
            raise ConfigError("element_distribution", str(exc)) from None
        set_("element_distribution", dist.bounds)
        h = self.learning_rate
        if isinstance(h, bool) or not isinstance(h, (int, float)) or not 0.0 <= h <= 1.0:
            raise ConfigError("learning_rate", f"must lie in [0, 1], got {h!r}")
        set_("learning_rate", float(h))
        seed = self.master_seed
        if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed < 2**64:
            raise ConfigError("master_seed", f"must be an unsigned 64-bit integer, got {seed!r}")
        set_("master_seed", int(seed))
        if self.schedule not in SCHEDULES:
            raise ConfigError("schedule", f"must be one of {SCHEDULES}, got {self.schedule!r}")

    @property
    def distribution(self) -> ElementDistribution:
        return ElementDistribution(self.element_distribution)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("<root>", "config must be a JSON object")
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(key, "unknown field")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError("<root>", f"invalid JSON: {exc}") from None
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["reliability_values"] = list(self.reliability_values)
        d["element_distribution"] = [list(b) for b in self.element_distribution]
        return d


@dataclass(frozen=True, order=True)
class RunRecord:
    w: float
    replicate: int
    timestep: int
    mean_lambda: float
    sd_lambda: float


@dataclass(frozen=True)
class Summary:
    w: float
    mean_lambda: float
    mean_sd: float
    replicates: int
    timestep: int = field(default=0)


def replicate_seed(master_seed: int, w_index: int, replicate: int) -> np.random.SeedSequence:
    """Child seed for one replicate.

    SeedSequence hashes the master seed together with the spawn key
    ``(w_index, replicate)``, so every replicate owns an independent stream.
    """
    return np.random.SeedSequence(master_seed, spawn_key=(w_index, replicate))


def _record_times(timesteps, thin):
    times = list(range(0, timesteps + 1, thin))
    if times[-1] != timesteps:
        times.append(timesteps)
    return times


def run_sweep(cfg: ExperimentConfig, thin: int = 10) -> list:
    """Run every (reliability, replicate) pair and record population stats.

    Stats are recorded at timestep 0, every ``thin`` timesteps and at the
    final timestep. Output order is (w index, replicate, timestep).
    """
    if thin < 1:
        raise ConfigError("thin", f"must be >= 1, got {thin}")
    times = _record_times(cfg.timesteps, thin)
    records = []
    for wi, w in enumerate(cfg.reliability_values):
        worlds = [
            GameWorld.random(
                cfg.population_size,
                w,
                cfg.distribution,
                learning_rate=cfg.learning_rate,
                rng=np.random.default_rng(replicate_seed(cfg.master_seed, wi, r)),
                schedule=cfg.schedule,
            )
            for r in range(cfg.replicates)
        ]
        rows = [[] for _ in worlds]
        now = 0
        for t in times:
            advance(worlds, t - now)
            now = t
            for r, world in enumerate(worlds):
                mean, sd = world.stats()
                rows[r].append(RunRecord(w, r, t, mean, sd))
        for r_rows in rows:
            records.extend(r_rows)
    return records


def summarize(records) -> list:
    """Average the final-timestep stats over replicates, per reliability value."""
    records = list(records)
    if not records:
        raise InputError("cannot summarize an empty record set")
    finals = {}
    for rec in records:
        key = (rec.w, rec.replicate)
        if key not in finals or rec.timestep > finals[key].timestep:
            finals[key] = rec
    by_w = defaultdict(list)
    for (w, _), rec in sorted(finals.items()):
        by_w[w].append(rec)
    return [
        Summary(
            w=w,
            mean_lambda=float(np.mean([r.mean_lambda for r in recs])),
            mean_sd=float(np.mean([r.sd_lambda for r in recs])),
            replicates=len(recs),
            timestep=max(r.timestep for r in recs),
        )
        for w, recs in sorted(by_w.items())
    ]


def _fmt(x) -> str:
    return format(float(x), ".17g")


def write_csv(records, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow((_fmt(rec.w), rec.replicate, rec.timestep, _fmt(rec.mean_lambda), _fmt(rec.sd_lambda)))


def records_to_csv(records) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def read_csv(stream) -> list:
    reader = csv.DictReader(stream)
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise InputError(f"unexpected CSV header {reader.fieldnames}")
    return [
        RunRecord(float(row["w"]), int(row["replicate"]), int(row["timestep"]),
                  float(row["mean_lambda"]), float(row["sd_lambda"]))
        for row in reader
    ]
