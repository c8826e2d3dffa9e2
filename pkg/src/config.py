from typing import Dict, Any
import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

class Config:
    # Output
    OUTPUT_ROOT: str = os.getenv("DPC_OUTPUT_ROOT", "results")
    CACHE_DIR: str = os.getenv("DPC_CACHE_DIR", ".cache/dictionaries")

    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "WARNING")
    LOG_DIR: str = os.getenv("LOG_DIR", "logs")
    LOG_TO_FILE: bool = os.getenv("LOG_TO_FILE", "False").lower() == "true"

    # Reproducibility
    DEFAULT_SEED: int = int(os.getenv("DPC_SEED", "42"))

    # Linear algebra tolerances
    RANK_TOL_FACTOR: float = float(os.getenv("RANK_TOL_FACTOR", "1e-9"))
    CONSISTENCY_TOL: float = float(os.getenv("CONSISTENCY_TOL", "1e-6"))
    LSTSQ_RCOND: float = float(os.getenv("LSTSQ_RCOND", "1e-10"))

    # QP solver
    QP_TOL: float = float(os.getenv("QP_TOL", "1e-9"))
    QP_MAX_ITER: int = int(os.getenv("QP_MAX_ITER", "50000"))
    QP_RHO: float = float(os.getenv("QP_RHO", "0.1"))
    QP_SIGMA: float = float(os.getenv("QP_SIGMA", "1e-6"))
    QP_ALPHA: float = float(os.getenv("QP_ALPHA", "1.6"))
    QP_CHECK_EVERY: int = int(os.getenv("QP_CHECK_EVERY", "10"))
    QP_INFEASIBILITY_TOL: float = float(os.getenv("QP_INFEASIBILITY_TOL", "1e-6"))

    # Plant simulation
    PLANT_SUBSTEPS: int = int(os.getenv("PLANT_SUBSTEPS", "10"))

    # Solve monitoring
    SOLVE_TIME_ALERT_MS: float = float(os.getenv("SOLVE_TIME_ALERT_MS", "250"))
    NON_OPTIMAL_RATE_ALERT: float = float(os.getenv("NON_OPTIMAL_RATE_ALERT", "0.05"))
    MONITOR_WINDOW: int = int(os.getenv("MONITOR_WINDOW", "1000"))

    @classmethod
    def get_output_dir(cls, experiment: str) -> Path:
        return Path(cls.OUTPUT_ROOT) / experiment

    @classmethod
    def as_dict(cls) -> Dict[str, Any]:
        return {
            key: value for key, value in cls.__dict__.items()
            if not key.startswith("_") and isinstance(value, (str, int, bool, float))
        }
