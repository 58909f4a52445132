"""TOML run configuration with command-line overrides."""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import DataError


def parse_k(value) -> int | None:
    """``"all"``/None -> None, else a positive int."""
    if value is None or (isinstance(value, str) and value.strip().lower() == "all"):
        return None
    k = int(value)
    if k < 1:
        raise ValueError(f"snippet count must be >= 1 or 'all', got {value!r}")
    return k


@dataclass
class PipelineConfig:
    facts: Path
    types: Path
    labels: Path | None
    schemas: Path
    corpus: Path | None
    out_dir: Path
    max_per_question: int = 50
    filter_k: int | None = 10
    ap_mode: str = "standard"
    workers: int = 1
    n_train: int = 30
    n_test: int = 10
    sample_seed: int = 7
    train_seed: int = 0
    live: dict = field(default_factory=dict)

    @property
    def templates_dir(self) -> Path:
        return self.out_dir / "templates"

    @property
    def models_dir(self) -> Path:
        return self.out_dir / "models"

    @property
    def reports_dir(self) -> Path:
        return self.out_dir / "reports"

    def template_path(self, relation: str) -> Path:
        return self.templates_dir / f"{relation}.json"

    def model_paths(self, relation: str) -> tuple[Path, Path]:
        return (self.models_dir / f"{relation}.filter.json",
                self.models_dir / f"{relation}.ranker.json")

    def check_inputs(self, need_corpus: bool = True) -> None:
        paths = [self.facts, self.types, self.schemas] + ([self.labels] if self.labels else [])
        if need_corpus and self.corpus is not None:
            paths.append(self.corpus)
        missing = [str(p) for p in paths if not p.is_file()]
        if missing:
            raise DataError(f"missing input files: {', '.join(missing)}")

    @classmethod
    def load(cls, path, out_dir=None, **overrides) -> "PipelineConfig":
        path = Path(path)
        try:
            with open(path, "rb") as fh:
                raw = tomllib.load(fh)
        except FileNotFoundError:
            raise DataError(f"config file not found: {path}") from None
        except tomllib.TOMLDecodeError as exc:
            raise DataError(f"{path}: {exc}") from None
        base = path.resolve().parent

        def rel(p):
            return None if p is None else (base / p)

        kb = raw.get("kb", {})
        for key in ("facts", "types", "schemas"):
            if key not in kb:
                raise DataError(f"{path}: [kb].{key} is required")
        run = raw.get("run", {})
        seeds = raw.get("seeds", {})
        cfg = cls(
            facts=rel(kb["facts"]), types=rel(kb["types"]), labels=rel(kb.get("labels")),
            schemas=rel(kb["schemas"]), corpus=rel(raw.get("corpus", {}).get("path")),
            out_dir=Path(out_dir) if out_dir else rel(raw.get("output", {}).get("dir", "webqa_out")),
            max_per_question=int(run.get("max_per_question", 50)),
            filter_k=parse_k(run.get("filter_k", 10)),
            ap_mode=run.get("ap_mode", "standard"),
            workers=int(run.get("workers", 1)),
            n_train=int(run.get("n_train", 30)),
            n_test=int(run.get("n_test", 10)),
            sample_seed=int(seeds.get("sample", 7)),
            train_seed=int(seeds.get("train", 0)),
            live=raw.get("live", {}),
        )
        for key, value in overrides.items():
            if value is not None:
                setattr(cfg, key, value)
        return cfg
