from dataclasses import asdict, dataclass, field
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from .clustering.config import (
    DEFAULT_DISTANCE,
    DEFAULT_EXHAUSTIVE_THRESHOLD,
    DEFAULT_HEIGHTS,
    DEFAULT_LOADINGS,
)
from .exceptions import InputFormatError
from .models.bench import Design, DesignSpec

DISTANCES = ('rv', 'average', 'single')
HEIGHTS = ('split', 'reliability')
OUTPUT_FORMATS = ('json', 'newick', 'csv')
BENCH_METHODS = ('hcsvd', 'diana')


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or value.strip() == '':
        return default
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {value!r}") from None


def _check_loadings(value: str) -> str:
    value = str(value).strip().lower()
    if value in ('kaiser', 'all'):
        return value
    if value.isdigit() and int(value) >= 1:
        return value
    raise ValueError(f"Loadings must be kaiser, all or a positive integer, got {value!r}")


@dataclass
class RunConfig:
    """Settings of one `cluster` run. CLI flags override the environment."""
    input_kind: str = 'data'
    distance: str = DEFAULT_DISTANCE
    heights: str = DEFAULT_HEIGHTS
    loadings: str = DEFAULT_LOADINGS
    exhaustive_threshold: int = DEFAULT_EXHAUSTIVE_THRESHOLD
    cut_counts: List[int] = field(default_factory=list)
    output_format: str = 'json'
    threads: int = 1
    seed: int = 0

    def validate(self) -> None:
        if self.input_kind not in ('data', 'correlation'):
            raise ValueError(f"Unknown input kind {self.input_kind!r}")
        if self.distance not in DISTANCES:
            raise ValueError(f"Unknown distance {self.distance!r} (expected one of: {', '.join(DISTANCES)})")
        if self.heights not in HEIGHTS:
            raise ValueError(f"Unknown height mode {self.heights!r} (expected one of: {', '.join(HEIGHTS)})")
        self.loadings = _check_loadings(self.loadings)
        if self.exhaustive_threshold < 1:
            raise ValueError(f"Exhaustive threshold must be positive, got {self.exhaustive_threshold}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"Unknown output format {self.output_format!r}")
        if self.threads < 1:
            raise ValueError(f"Threads must be positive, got {self.threads}")
        if any(k < 1 for k in self.cut_counts):
            raise ValueError(f"Cut counts must be positive, got {self.cut_counts}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def echo(self) -> Dict[str, Any]:
        """Settings recorded in output metadata, without the worker count."""
        settings = self.to_dict()
        settings.pop('threads')
        return settings

    @classmethod
    def from_env(cls) -> 'RunConfig':
        return cls(
            distance=os.getenv('HCSVD_DISTANCE', DEFAULT_DISTANCE).lower(),
            heights=os.getenv('HCSVD_HEIGHTS', DEFAULT_HEIGHTS).lower(),
            loadings=os.getenv('HCSVD_LOADINGS', DEFAULT_LOADINGS).lower(),
            exhaustive_threshold=_env_int('HCSVD_EXHAUSTIVE_THRESHOLD', DEFAULT_EXHAUSTIVE_THRESHOLD),
            threads=_env_int('HCSVD_THREADS', 1),
            seed=_env_int('HCSVD_SEED', 0),
        )


@dataclass
class BenchConfig:
    """A benchmark study: design parameters plus methods, kinds and workers."""
    design: str = 'b'
    p: int = 60
    n: Optional[int] = None
    seed: int = 0
    replications: int = 1
    methods: List[str] = field(default_factory=lambda: list(BENCH_METHODS))
    kinds: List[str] = field(default_factory=lambda: list(DISTANCES))
    threads: int = 1
    loadings: str = DEFAULT_LOADINGS
    exhaustive_threshold: int = DEFAULT_EXHAUSTIVE_THRESHOLD

    def validate(self) -> None:
        unknown = [m for m in self.methods if m not in BENCH_METHODS]
        if unknown:
            raise ValueError(f"Unknown methods: {', '.join(unknown)}")
        unknown = [k for k in self.kinds if k not in DISTANCES]
        if unknown:
            raise ValueError(f"Unknown distance kinds: {', '.join(unknown)}")
        if not self.methods:
            raise ValueError("At least one method is required")
        if 'hcsvd' in self.methods and not self.kinds:
            raise ValueError("HC-SVD needs at least one distance kind")
        if self.threads < 1:
            raise ValueError(f"Threads must be positive, got {self.threads}")
        self.loadings = _check_loadings(self.loadings)
        self.to_design_spec().validate()

    def to_design_spec(self) -> DesignSpec:
        return DesignSpec(
            design=Design(self.design),
            p=self.p,
            n=self.n,
            seed=self.seed,
            replications=self.replications,
        )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_env(cls) -> 'BenchConfig':
        return cls(
            seed=_env_int('HCSVD_SEED', 0),
            threads=_env_int('HCSVD_THREADS', 1),
            loadings=os.getenv('HCSVD_LOADINGS', DEFAULT_LOADINGS).lower(),
            exhaustive_threshold=_env_int('HCSVD_EXHAUSTIVE_THRESHOLD', DEFAULT_EXHAUSTIVE_THRESHOLD),
        )

    @classmethod
    def from_spec_file(cls, path: Union[str, Path]) -> 'BenchConfig':
        """
        Parse a `key = value` bench spec.

        Required keys: design (a|b), p. Optional: n (omit for the population
        matrix), seed, replications, methods and kinds (comma lists), threads,
        loadings, exhaustive_threshold. Blank lines and `#` comments are ignored.
        Unset keys fall back to from_env().

        Raises:
            InputFormatError: unreadable file, malformed line, unknown key,
                bad value or missing required key
        """
        try:
            lines = Path(path).read_text(encoding='utf-8').splitlines()
        except OSError as e:
            raise InputFormatError(f"Cannot read bench spec {path}: {e}") from None

        values: Dict[str, str] = {}
        for number, raw in enumerate(lines, start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise InputFormatError("Expected 'key = value'", row=number)
            key, value = (part.strip() for part in line.split('=', 1))
            key = key.lower()
            if key not in _SPEC_PARSERS:
                raise InputFormatError(f"Unknown key {key!r}", row=number, column=key)
            if key in values:
                raise InputFormatError(f"Duplicate key {key!r}", row=number, column=key)
            values[key] = value
            try:
                _SPEC_PARSERS[key](value)
            except ValueError as e:
                raise InputFormatError(f"Invalid value {value!r}: {e}", row=number, column=key) from None

        for required in ('design', 'p'):
            if required not in values:
                raise InputFormatError(f"Bench spec {path} is missing required key {required!r}")

        config = cls.from_env()
        for key, value in values.items():
            setattr(config, key, _SPEC_PARSERS[key](value))
        return config


def _parse_design(value: str) -> str:
    value = value.strip().lower()
    if value not in ('a', 'b'):
        raise ValueError("design must be a or b")
    return value


def _parse_optional_int(value: str) -> Optional[int]:
    return None if value.strip().lower() in ('', 'none', 'population') else int(value)


def _parse_list(value: str) -> List[str]:
    return [item.strip().lower() for item in value.split(',') if item.strip()]


_SPEC_PARSERS = {
    'design': _parse_design,
    'p': int,
    'n': _parse_optional_int,
    'seed': int,
    'replications': int,
    'methods': _parse_list,
    'kinds': _parse_list,
    'threads': int,
    'loadings': _check_loadings,
    'exhaustive_threshold': int,
}
