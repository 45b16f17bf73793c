import json
import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class TestOutcome:
    """Result of one global test on one graph.

    ``standardized`` and ``p_value`` are ``None`` for tests without a
    reference distribution (scan, EST).
    """

    __test__ = False  # keep pytest from collecting this class

    test_name: str
    statistic: float
    reject: bool
    level: float = None
    standardized: float = None
    p_value: float = None
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "test": self.test_name,
            "statistic": _num(self.statistic),
            "standardized": _num(self.standardized),
            "p_value": _num(self.p_value),
            "reject": bool(self.reject),
            "level": _num(self.level),
            "diagnostics": {k: _jsonable(self.diagnostics[k]) for k in sorted(self.diagnostics)},
        }

    def to_json(self, **extra):
        d = self.to_dict()
        d.update(extra)
        return json.dumps(d, allow_nan=False)


def _num(x):
    if x is None:
        return None
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    x = float(x)
    return x if math.isfinite(x) else None


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(x[k]) for k in sorted(x)}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "tolist"):
        return _jsonable(x.tolist())
    if isinstance(x, str) or x is None:
        return x
    return _num(x)
