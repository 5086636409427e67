"""SMT-LIB solver running as a child process, one incremental session per handle."""

import queue
import subprocess
import threading
from pathlib import Path
from typing import List, Optional, Sequence, Union

from models.errors import SolverProcessError
from utils.logging import LogEvent, LogRecord, error, info, warning

from .base import SatQuery, SatResult, SolverBackend, Verdict
from .smtlib import LOGIC, query_body

_VERDICTS = {"sat": Verdict.SAT, "unsat": Verdict.UNSAT, "unknown": Verdict.UNKNOWN}


class ExternalSolver(SolverBackend):
    """Talks SMT-LIB over stdin/stdout; every query is framed by push/pop.

    A query that does not answer within ``timeout_s`` yields Unknown and the
    process is restarted. With a ``fallback`` backend, the first process error
    marks the binary unavailable and this and every later query go to the
    fallback instead.
    """

    name = "external"

    def __init__(
        self,
        path: str = "z3",
        args: Sequence[str] = ("-smt2", "-in"),
        timeout_s: float = 5.0,
        dump_dir: Optional[Union[str, Path]] = None,
        fallback: Optional[SolverBackend] = None,
    ):
        super().__init__(dump_dir)
        self.command: List[str] = [path, *args]
        self.timeout_s = timeout_s
        self.fallback = fallback
        self.unavailable = False
        self._process: Optional[subprocess.Popen[str]] = None
        self._lines: "queue.Queue[Optional[str]]" = queue.Queue()

    def _spawn(self) -> subprocess.Popen[str]:
        try:
            process = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.STDOUT,
                universal_newlines=True,
                bufsize=1,
            )
        except OSError as e:
            raise SolverProcessError(f"Cannot start solver {self.command[0]}: {e}") from e

        self._lines = queue.Queue()
        threading.Thread(target=self._pump, args=(process, self._lines), daemon=True).start()
        self._process = process
        self._send(f"(set-option :print-success false)\n(set-logic {LOGIC})\n")
        info(LogRecord(
            event=LogEvent.SOLVER_SPAWNED.value,
            message=f"Started solver process {' '.join(self.command)}",
            data={"pid": process.pid},
        ))
        return process

    @staticmethod
    def _pump(process: "subprocess.Popen[str]", lines: "queue.Queue[Optional[str]]") -> None:
        assert process.stdout is not None
        for line in process.stdout:
            lines.put(line.strip())
        lines.put(None)

    def _send(self, text: str) -> None:
        assert self._process is not None and self._process.stdin is not None
        try:
            self._process.stdin.write(text)
            self._process.stdin.flush()
        except (BrokenPipeError, OSError) as e:
            self._kill()
            raise SolverProcessError(f"Solver process closed its input: {e}") from e

    def _read_line(self) -> Optional[str]:
        """Next non-empty output line; None on timeout."""
        while True:
            try:
                line = self._lines.get(timeout=self.timeout_s)
            except queue.Empty:
                return None
            if line is None:
                self._kill()
                raise SolverProcessError("Solver process exited unexpectedly")
            if line:
                return line

    def _check(self, query: SatQuery) -> SatResult:
        if self.unavailable and self.fallback is not None:
            return self.fallback.check(query)
        try:
            return self._check_in_process(query)
        except SolverProcessError as e:
            if self.fallback is None:
                raise
            self.unavailable = True
            warning(LogRecord(
                event=LogEvent.SOLVER_PROCESS_ERROR.value,
                message=f"Solver process failed, using {self.fallback.name} from now on",
                data={"command": self.command, "error": str(e)[:500], "fallback": self.fallback.name},
            ))
            return self.fallback.check(query)

    def _check_in_process(self, query: SatQuery) -> SatResult:
        if self._process is None or self._process.poll() is not None:
            self._spawn()

        self._send("(push 1)\n" + query_body(query) + "(check-sat)\n")
        line = self._read_line()
        if line is None:
            self.stats.timeouts += 1
            warning(LogRecord(
                event=LogEvent.SOLVER_TIMEOUT.value,
                message=f"Solver gave no answer within {self.timeout_s}s, restarting it",
                data={"timeout_s": self.timeout_s},
            ))
            self._kill()
            return SatResult(Verdict.UNKNOWN, backend=self.name)
        if line.startswith("(error"):
            error(LogRecord(
                event=LogEvent.SOLVER_PROCESS_ERROR.value,
                message=f"Solver rejected query: {line}",
            ))
            self._kill()
            raise SolverProcessError(line)
        verdict = _VERDICTS.get(line)
        if verdict is None:
            self._kill()
            raise SolverProcessError(f"Unexpected solver output: {line}")

        self._send("(pop 1)\n")
        return SatResult(verdict, backend=self.name)

    def _kill(self) -> None:
        if self._process is not None:
            self._process.kill()
            self._process.wait()
            self._process = None

    def close(self) -> None:
        if self._process is not None and self._process.poll() is None:
            try:
                self._send("(exit)\n")
                self._process.wait(timeout=1)
            except (SolverProcessError, subprocess.TimeoutExpired):
                pass
        self._kill()
        if self.fallback is not None:
            self.fallback.close()
