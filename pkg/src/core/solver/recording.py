"""A solver wrapper that remembers every query it answered."""

from typing import List, Tuple

from .base import SatQuery, SatResult, SolverBackend


class RecordingSolver(SolverBackend):
    """Delegates to ``inner`` and keeps (query, result) pairs."""

    def __init__(self, inner: SolverBackend):
        super().__init__()
        self.inner = inner
        self.name = f"recording({inner.name})"
        self.log: List[Tuple[SatQuery, SatResult]] = []

    def check(self, query: SatQuery) -> SatResult:
        result = self.inner.check(query)
        self.stats.queries += 1
        self.stats.record(result.verdict)
        self.log.append((query, result))
        return result

    def _check(self, query: SatQuery) -> SatResult:
        return self.inner.check(query)

    def close(self) -> None:
        self.inner.close()
