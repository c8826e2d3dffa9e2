from datetime import datetime
from typing import Dict, Any, List, Optional
from collections import deque
import statistics
import structlog
from ..config import Config
from .logger import Logger

OPTIMAL = "optimal"


class SolveMonitor:
    """Tracks per-step QP solve times and statuses during closed-loop runs."""

    def __init__(
        self,
        logger: Optional[Logger] = None,
        metrics_window: int = Config.MONITOR_WINDOW,
        solve_time_alert_ms: float = Config.SOLVE_TIME_ALERT_MS,
        non_optimal_rate_alert: float = Config.NON_OPTIMAL_RATE_ALERT
    ):
        self.logger = logger if logger is not None else structlog.get_logger(__name__)
        self.metrics_window = metrics_window

        self.metrics: Dict[str, Dict[str, deque]] = {}

        self.thresholds = {
            'solve_time_ms': solve_time_alert_ms,
            'non_optimal_rate': non_optimal_rate_alert
        }

    def _series(self, controller: str) -> Dict[str, deque]:
        if controller not in self.metrics:
            self.metrics[controller] = {
                'solve_ms': deque(maxlen=self.metrics_window),
                'iterations': deque(maxlen=self.metrics_window),
                'non_optimal': deque(maxlen=self.metrics_window)
            }
        return self.metrics[controller]

    def record_solve(
        self,
        controller: str,
        status: str,
        solve_ms: float,
        iterations: int
    ) -> None:
        """Record one receding-horizon solve."""
        series = self._series(controller)
        series['solve_ms'].append(solve_ms)
        series['iterations'].append(iterations)
        series['non_optimal'].append(0 if status == OPTIMAL else 1)

    def get_current_metrics(self) -> Dict[str, Dict[str, Any]]:
        """Rolling averages per controller."""
        metrics = {}
        for controller, series in self.metrics.items():
            solve_ms = series['solve_ms']
            metrics[controller] = {
                'solves': len(solve_ms),
                'solve_ms_avg': statistics.mean(solve_ms) if solve_ms else 0.0,
                'solve_ms_max': max(solve_ms) if solve_ms else 0.0,
                'iterations_avg': statistics.mean(series['iterations'])
                if series['iterations'] else 0.0,
                'non_optimal_rate': statistics.mean(series['non_optimal'])
                if series['non_optimal'] else 0.0
            }
        return metrics

    def check_thresholds(self, metrics: Dict[str, Dict[str, Any]]) -> List[Dict[str, Any]]:
        """Return alerts for controllers whose averages exceed thresholds."""
        alerts = []

        for controller, values in metrics.items():
            if values['solve_ms_avg'] > self.thresholds['solve_time_ms']:
                alerts.append({
                    'controller': controller,
                    'type': 'solve_time_ms',
                    'value': values['solve_ms_avg'],
                    'threshold': self.thresholds['solve_time_ms'],
                    'severity': 'medium'
                })

            if values['non_optimal_rate'] > self.thresholds['non_optimal_rate']:
                alerts.append({
                    'controller': controller,
                    'type': 'non_optimal_rate',
                    'value': values['non_optimal_rate'],
                    'threshold': self.thresholds['non_optimal_rate'],
                    'severity': 'high'
                })

        return alerts

    def handle_alerts(self, alerts: List[Dict[str, Any]]) -> None:
        for alert in alerts:
            self.logger.warning(
                "solver_alert",
                controller=alert['controller'],
                alert_type=alert['type'],
                value=alert['value'],
                threshold=alert['threshold'],
                severity=alert['severity']
            )

    def get_health_status(self) -> Dict[str, Any]:
        """Summarize solver health; alerts are logged as a side effect."""
        metrics = self.get_current_metrics()
        alerts = self.check_thresholds(metrics)
        if alerts:
            self.handle_alerts(alerts)

        status = {
            'status': 'degraded' if alerts else 'healthy',
            'timestamp': datetime.now().isoformat(),
            'metrics': metrics,
            'alerts': alerts
        }
        return status
