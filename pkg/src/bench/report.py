"""Plain-text metrics table written as ``metrics.txt``."""
from typing import Any, Dict, Optional
from ..control import TrackingMetrics
from ..signals import PeCertificate

METRIC_ROWS = (
    ('rmse', 'RMSE y-r'),
    ('max_violation_u', 'max violation u'),
    ('max_violation_y', 'max violation y'),
    ('total_cost', 'total cost'),
)


def _number(value: float) -> str:
    return f"{value:.6e}"


def format_metrics(
    experiment: str,
    seed: int,
    metrics: Dict[str, TrackingMetrics],
    comparison: Optional[Dict[str, float]] = None,
    health: Optional[Dict[str, Any]] = None
) -> str:
    names = list(metrics)
    width = max([18] + [len(name) + 2 for name in names])
    lines = [
        f"experiment: {experiment}",
        f"seed: {seed}",
        "",
        "metric".ljust(20) + "".join(name.rjust(width) for name in names),
    ]
    for key, label in METRIC_ROWS:
        values = [getattr(metrics[name], key) for name in names]
        lines.append(label.ljust(20) + "".join(_number(v).rjust(width) for v in values))

    if comparison is not None:
        lines += [
            "",
            f"steps compared: {comparison['steps']}",
            f"max |y gap|: {_number(comparison['max_y_gap'])}",
            f"max |u gap|: {_number(comparison['max_u_gap'])}",
        ]
        if len(names) == 2 and metrics[names[1]].total_cost > 0.0:
            ratio = metrics[names[0]].total_cost / metrics[names[1]].total_cost
            lines.append(f"cost ratio {names[0]}/{names[1]}: {ratio:.6f}")

    if health is not None:
        lines += ["", f"solver health: {health['status']}"]
        for name, values in health['metrics'].items():
            lines.append(
                f"  {name}: {values['solves']} solves, "
                f"avg {values['solve_ms_avg']:.3f} ms, max {values['solve_ms_max']:.3f} ms, "
                f"avg iterations {values['iterations_avg']:.1f}, "
                f"non-optimal rate {values['non_optimal_rate']:.3f}"
            )
        for alert in health['alerts']:
            lines.append(f"  alert: {alert['controller']} {alert['type']} = {alert['value']:.4g}")
    return "\n".join(lines) + "\n"


def format_certificates(certificates: Dict[str, PeCertificate], min_length: int) -> str:
    lines = [f"{label}: {certificate.summary()}" for label, certificate in certificates.items()]
    lines.append(f"minimum dictionary length: {min_length}")
    return "\n".join(lines) + "\n"
