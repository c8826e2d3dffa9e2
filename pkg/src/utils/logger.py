import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional
import structlog
from structlog.stdlib import LoggerFactory

LOGGER_NAME = "dpc"

PROCESSORS = [
    structlog.stdlib.add_log_level,
    structlog.stdlib.add_logger_name,
    structlog.processors.TimeStamper(fmt="iso"),
    structlog.processors.StackInfoRenderer(),
    structlog.processors.format_exc_info,
    structlog.processors.UnicodeDecoder(),
    structlog.processors.JSONRenderer()
]


class Logger:
    """JSON event logging for experiments and solver runs.

    Library modules log through ``structlog.get_logger(__name__)``; this class
    installs the shared configuration and adds the workbench's own events.
    Console output goes to stderr so that CLI reports on stdout stay clean.
    """

    def __init__(
        self,
        log_dir: str = "logs",
        log_level: str = "INFO",
        enable_console: bool = True,
        enable_file: bool = True
    ):
        self.log_dir = Path(log_dir)
        self.log_level = getattr(logging, log_level.upper())
        self.enable_console = enable_console
        self.enable_file = enable_file
        if enable_file:
            self.log_dir.mkdir(parents=True, exist_ok=True)

        structlog.configure(
            processors=PROCESSORS,
            context_class=dict,
            logger_factory=LoggerFactory(),
            wrapper_class=structlog.stdlib.BoundLogger,
            cache_logger_on_first_use=True,
        )
        logging.basicConfig(level=self.log_level, format='%(message)s', handlers=self._handlers(), force=True)
        self.logger = structlog.get_logger(LOGGER_NAME)

    @property
    def log_file(self) -> Path:
        return self.log_dir / f"{LOGGER_NAME}-{datetime.now().strftime('%Y%m%d')}.log"

    def _handlers(self) -> List[logging.Handler]:
        handlers: List[logging.Handler] = []
        if self.enable_console:
            handlers.append(logging.StreamHandler(sys.stderr))
        if self.enable_file:
            handlers.append(logging.FileHandler(self.log_file))
        for handler in handlers:
            handler.setLevel(self.log_level)
        if not handlers:
            handlers.append(logging.NullHandler())
        return handlers

    def debug(self, event: str, **kwargs: Any) -> None:
        self.logger.debug(event, **kwargs)

    def info(self, event: str, **kwargs: Any) -> None:
        self.logger.info(event, **kwargs)

    def warning(self, event: str, **kwargs: Any) -> None:
        self.logger.warning(event, **kwargs)

    def error(self, event: str, **kwargs: Any) -> None:
        self.logger.error(event, **kwargs)

    def critical(self, event: str, **kwargs: Any) -> None:
        self.logger.critical(event, **kwargs)

    def log_experiment(
        self,
        verb: str,
        experiment: str,
        seed: int,
        success: bool,
        duration: float,
        error: Optional[str] = None
    ) -> None:
        """One CLI verb execution."""
        self.info(
            "experiment_finished",
            verb=verb,
            experiment=experiment,
            seed=seed,
            success=success,
            duration=round(duration, 4),
            error=error
        )

    def log_certificate(self, order: int, rank: int, required: int, passed: bool, n_samples: int) -> None:
        emit = self.info if passed else self.warning
        emit(
            "excitation_certificate",
            order=order,
            rank=rank,
            required=required,
            passed=passed,
            n_samples=n_samples
        )

    def log_error(self, error: Exception, context: Dict[str, Any]) -> None:
        self.error(
            "error_occurred",
            error_type=type(error).__name__,
            error_message=str(error),
            **context
        )

    def log_cache(self, operation: str, key: str, success: bool, category: str = 'dictionary') -> None:
        self.debug("cache_operation", operation=operation, key=key, success=success, category=category)

    def log_performance(self, operation: str, duration: float, context: Dict[str, Any]) -> None:
        self.info("performance_metric", operation=operation, duration=round(duration, 4), **context)

    def log_system_health(self, metrics: Dict[str, Any]) -> None:
        """Solver health summary after a closed-loop run."""
        self.info("system_health", **metrics)

    def rotate_logs(self, max_days: int = 30) -> None:
        """Delete log files older than ``max_days``."""
        if not self.enable_file:
            return
        cutoff = datetime.now().timestamp() - max_days * 86400
        try:
            for log_file in self.log_dir.glob("*.log"):
                if log_file.stat().st_mtime < cutoff:
                    log_file.unlink()
        except OSError as e:
            self.error("log_rotation_failed", error=str(e))
