"""
Shared data models: experiment configuration and input documents
"""

from dataclasses import dataclass, field, fields, replace
from typing import List, Dict, Any, Optional, Union
from pathlib import Path
import json

import numpy as np

from .cplx_geom import Flag, IllConditionedError, ProjectivePoint
from .utils import complex_from_json, complex_to_json, matrix_from_json, matrix_to_json


class DocumentError(ValueError):
    """Input document violates the schema"""

    code = "invalid_document"


OUTPUT_FORMATS = ("csv", "table")


@dataclass
class ExperimentConfig:
    """Experiment parameters (global.json, the document "config" block, CLI flags)"""

    seed: int = 0
    tol: float = 1e-6
    K: int = 30
    L: int = 4
    n: int = 3
    eps_schedule: str = "2^-k"
    drift: Union[float, List[List[Any]]] = 0.1
    budget: int = 20000
    starts: int = 8
    delta: bool = True
    format: str = "csv"

    def __post_init__(self):
        self.validate()

    def validate(self):
        """
        Check field types and ranges

        Raises:
            DocumentError: naming the offending field
        """
        for name in ("seed", "K", "L", "n", "budget", "starts"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise DocumentError(f"config.{name} must be an integer, got {value!r}")
        for name in ("K", "n", "budget", "starts"):
            if getattr(self, name) < 1:
                raise DocumentError(f"config.{name} must be positive")
        if self.L < 0:
            raise DocumentError("config.L must be non-negative")
        if isinstance(self.tol, bool) or not isinstance(self.tol, (int, float)) or not self.tol > 0:
            raise DocumentError(f"config.tol must be a positive number, got {self.tol!r}")
        if not isinstance(self.eps_schedule, str):
            raise DocumentError("config.eps_schedule must be a string")
        if not isinstance(self.delta, bool):
            raise DocumentError("config.delta must be true or false")
        if self.format not in OUTPUT_FORMATS:
            raise DocumentError(f"config.format must be one of {OUTPUT_FORMATS}")
        if isinstance(self.drift, bool):
            raise DocumentError("config.drift must be a number or a matrix")
        if not isinstance(self.drift, (int, float)):
            try:
                matrix_from_json(self.drift)
            except ValueError as e:
                raise DocumentError(f"config.drift: {e}")

    def drift_value(self) -> Union[float, np.ndarray]:
        """Scalar drift scale or the drift generator matrix"""
        if isinstance(self.drift, (int, float)):
            return float(self.drift)
        return matrix_from_json(self.drift)

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        """
        Build a config from a mapping, unknown keys rejected

        Raises:
            DocumentError: On unknown keys or invalid values
        """
        if not isinstance(data, dict):
            raise DocumentError("config must be an object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise DocumentError(f"Unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    def merged(self, overrides: Dict[str, Any]) -> "ExperimentConfig":
        """New config with the non-None overrides applied"""
        values = {key: value for key, value in overrides.items() if value is not None}
        unknown = sorted(set(values) - {f.name for f in fields(self)})
        if unknown:
            raise DocumentError(f"Unknown config keys: {', '.join(unknown)}")
        return replace(self, **values)

    def save(self, path: Path):
        """Save configuration to file"""
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2)

    @classmethod
    def load(cls, path: Path) -> "ExperimentConfig":
        """Load configuration from file, defaults if it does not exist"""
        if path.exists():
            with open(path, "r") as f:
                try:
                    data = json.load(f)
                except json.JSONDecodeError as e:
                    raise DocumentError(f"{path}: invalid JSON: {e}")
                return cls.from_dict(data)
        return cls()


def point_from_json(data: Any) -> ProjectivePoint:
    return ProjectivePoint.from_complex(complex_from_json(data))


def point_to_json(point: ProjectivePoint) -> Any:
    return complex_to_json(point.to_complex())


@dataclass
class InputDocument:
    """
    JSON input document

    {"n": 3, "points": [[0, 0], [1, 0], [0.5, 0.866], "inf"],
     "flags": [[[re, im], ...], ...], "config": {...}}

    Flags are n x n matrices whose first i columns span F^i.
    """

    n: Optional[int] = None
    points: List[ProjectivePoint] = field(default_factory=list)
    flags: List[Flag] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {}
        if self.n is not None:
            result["n"] = self.n
        if self.points:
            result["points"] = [point_to_json(point) for point in self.points]
        if self.flags:
            result["flags"] = [matrix_to_json(flag.basis) for flag in self.flags]
        if self.config:
            result["config"] = self.config
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "InputDocument":
        """
        Validate and decode a document

        Raises:
            DocumentError: naming the offending field
        """
        if not isinstance(data, dict):
            raise DocumentError("Document must be a JSON object")
        unknown = sorted(set(data) - {"n", "points", "flags", "config"})
        if unknown:
            raise DocumentError(f"Unknown document fields: {', '.join(unknown)}")

        n = data.get("n")
        if n is not None and (isinstance(n, bool) or not isinstance(n, int) or n < 1):
            raise DocumentError(f"n must be a positive integer, got {n!r}")

        raw_points = data.get("points", [])
        if not isinstance(raw_points, list):
            raise DocumentError("points must be a list")
        points = []
        for index, raw in enumerate(raw_points):
            try:
                points.append(point_from_json(raw))
            except ValueError as e:
                raise DocumentError(f"points[{index}]: {e}")

        raw_flags = data.get("flags", [])
        if not isinstance(raw_flags, list):
            raise DocumentError("flags must be a list")
        flags = []
        for index, raw in enumerate(raw_flags):
            try:
                matrix = matrix_from_json(raw)
                flag = Flag(matrix)
            except (ValueError, IllConditionedError) as e:
                raise DocumentError(f"flags[{index}]: {e}")
            if n is not None and flag.n != n:
                raise DocumentError(f"flags[{index}]: expected a {n} x {n} matrix, got {flag.n} x {flag.n}")
            flags.append(flag)
        if flags and len({flag.n for flag in flags}) != 1:
            raise DocumentError("flags: all flags must have the same size")

        config = data.get("config", {})
        ExperimentConfig.from_dict(config)
        return cls(n=n, points=points, flags=flags, config=dict(config))

    def dimension(self, default: Optional[int] = None) -> Optional[int]:
        """n from the document, else from its flags, else the default"""
        if self.n is not None:
            return self.n
        if self.flags:
            return self.flags[0].n
        return default

    def save(self, path: Path):
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2)

    @classmethod
    def loads(cls, text: str) -> "InputDocument":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise DocumentError(f"Invalid JSON: {e}")
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: Path) -> "InputDocument":
        with open(path, "r") as f:
            return cls.loads(f.read())
