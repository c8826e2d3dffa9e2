"""Experiment configuration: preset defaults, INI config file, CLI overrides."""
import configparser
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from ..control import Box, DpcConfig, GSpace, SchedulingPolicy
from ..coordinator.presets import get_preset
from ..errors import ConfigError
from ..plantlab import InputSpec
from ..signals import SignalSequence


class ExperimentConfig(BaseModel):
    """Fully resolved settings of one experiment; unknown keys are rejected."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    experiment: Literal['example1', 'example2', 'custom']
    plant: Literal['lpv-io', 'pendulum']
    seed: int = Field(ge=0)
    n_d: int = Field(ge=1)
    input_kind: Literal['uniform', 'multisine']
    input_amplitude: float = Field(ge=0.0)
    input_harmonics: int = Field(ge=1)
    horizon: int = Field(ge=1)
    n_ell: int = Field(ge=1)
    q: float = Field(ge=0.0)
    r: float = Field(ge=0.0)
    u_min: float
    u_max: float
    y_min: float
    y_max: float
    sched_policy: Literal['known-future', 'frozen']
    g_space: Literal['free', 'row-space']
    reg: float = Field(ge=0.0)
    qp_tol: float = Field(gt=0.0)
    qp_max_iter: int = Field(ge=1)
    reference_levels: List[float] = Field(min_length=1)
    reference_period: int = Field(ge=1)
    steps: int = Field(ge=1)
    theta0: float
    substeps: int = Field(ge=1)
    sampling_time: float = Field(gt=0.0)
    output_dir: Optional[str] = None

    @model_validator(mode='after')
    def check_boxes(self) -> "ExperimentConfig":
        if self.u_min > self.u_max or self.y_min > self.y_max:
            raise ValueError("constraint boxes must satisfy min <= max")
        return self

    def dpc_config(self, p_set: Optional[Box] = None) -> DpcConfig:
        return DpcConfig(
            N_p=self.horizon,
            n_ell=self.n_ell,
            Q=np.array([[self.q]]),
            R=np.array([[self.r]]),
            u_box=Box([self.u_min], [self.u_max]),
            y_box=Box([self.y_min], [self.y_max]),
            p_set=p_set,
            sched_policy=SchedulingPolicy(self.sched_policy),
            g_space=GSpace(self.g_space),
            reg=self.reg,
            tol=self.qp_tol,
            max_iter=self.qp_max_iter
        )

    def input_spec(self) -> InputSpec:
        return InputSpec(self.input_kind, self.input_amplitude, self.input_harmonics)

    def reference(self) -> SignalSequence:
        """Piecewise-constant set-point, one level per ``reference_period`` samples, last level held."""
        k = np.arange(self.steps)
        index = np.minimum(k // self.reference_period, len(self.reference_levels) - 1)
        return SignalSequence(np.asarray(self.reference_levels)[index])

    def output_path(self, default_root: str) -> Path:
        return Path(self.output_dir) if self.output_dir else Path(default_root) / self.experiment


def _comma_list(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(',') if item.strip()]
    return value


class _Section(BaseModel):
    model_config = ConfigDict(extra='forbid')


class ExperimentSection(_Section):
    id: Optional[Literal['example1', 'example2', 'custom']] = None
    seed: Optional[int] = None
    steps: Optional[int] = None


class DictionarySection(_Section):
    n_d: Optional[int] = None
    input: Optional[Literal['uniform', 'multisine']] = None
    amplitude: Optional[float] = None
    harmonics: Optional[int] = None


class ControllerSection(_Section):
    horizon: Optional[int] = None
    n_ell: Optional[int] = None
    q: Optional[float] = None
    r: Optional[float] = None
    policy: Optional[Literal['known-future', 'frozen']] = None
    g_space: Optional[Literal['free', 'row-space']] = None
    reg: Optional[float] = None
    tol: Optional[float] = None
    max_iter: Optional[int] = None


class ConstraintsSection(_Section):
    u_min: Optional[float] = None
    u_max: Optional[float] = None
    y_min: Optional[float] = None
    y_max: Optional[float] = None


class ReferenceSection(_Section):
    levels: Optional[List[float]] = None
    period: Optional[int] = None

    @field_validator('levels', mode='before')
    @classmethod
    def split_levels(cls, value: Any) -> Any:
        return _comma_list(value)


class OutputSection(_Section):
    dir: Optional[str] = None


class PlantSection(_Section):
    kind: Optional[Literal['lpv-io', 'pendulum']] = None
    theta0: Optional[float] = None
    substeps: Optional[int] = None
    sampling_time: Optional[float] = None


class ConfigFile(_Section):
    experiment: ExperimentSection = ExperimentSection()
    dictionary: DictionarySection = DictionarySection()
    controller: ControllerSection = ControllerSection()
    constraints: ConstraintsSection = ConstraintsSection()
    reference: ReferenceSection = ReferenceSection()
    output: OutputSection = OutputSection()
    plant: PlantSection = PlantSection()


# (section, key) -> ExperimentConfig field
FILE_FIELDS: Dict[tuple, str] = {
    ('experiment', 'id'): 'experiment',
    ('experiment', 'seed'): 'seed',
    ('experiment', 'steps'): 'steps',
    ('dictionary', 'n_d'): 'n_d',
    ('dictionary', 'input'): 'input_kind',
    ('dictionary', 'amplitude'): 'input_amplitude',
    ('dictionary', 'harmonics'): 'input_harmonics',
    ('controller', 'horizon'): 'horizon',
    ('controller', 'n_ell'): 'n_ell',
    ('controller', 'q'): 'q',
    ('controller', 'r'): 'r',
    ('controller', 'policy'): 'sched_policy',
    ('controller', 'g_space'): 'g_space',
    ('controller', 'reg'): 'reg',
    ('controller', 'tol'): 'qp_tol',
    ('controller', 'max_iter'): 'qp_max_iter',
    ('constraints', 'u_min'): 'u_min',
    ('constraints', 'u_max'): 'u_max',
    ('constraints', 'y_min'): 'y_min',
    ('constraints', 'y_max'): 'y_max',
    ('reference', 'levels'): 'reference_levels',
    ('reference', 'period'): 'reference_period',
    ('output', 'dir'): 'output_dir',
    ('plant', 'kind'): 'plant',
    ('plant', 'theta0'): 'theta0',
    ('plant', 'substeps'): 'substeps',
    ('plant', 'sampling_time'): 'sampling_time',
}


def _validation_message(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = '.'.join(str(part) for part in item['loc'])
        parts.append(f"{location}: {item['msg']}")
    return '; '.join(parts)


def read_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Overrides declared in an INI experiment file, keyed by ``ExperimentConfig`` field.

    Raises:
        ConfigError: unreadable file, syntax error, unknown section or key,
            or a value of the wrong type.
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as e:
        raise ConfigError(f"{path}: {e}") from e

    raw = {section: dict(parser.items(section)) for section in parser.sections()}
    try:
        parsed = ConfigFile.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"{path}: {_validation_message(e)}") from e

    overrides: Dict[str, Any] = {}
    for (section, key), name in FILE_FIELDS.items():
        value = getattr(getattr(parsed, section), key)
        if value is not None:
            overrides[name] = value
    return overrides


def load_experiment_config(
    experiment: Optional[str] = None,
    config_path: Optional[Union[str, Path]] = None,
    overrides: Optional[Dict[str, Any]] = None
) -> ExperimentConfig:
    """Resolve settings with precedence preset < config file < ``overrides``.

    The preset is chosen by ``experiment``, else by the file's
    ``[experiment] id``, else ``example1``. ``None`` overrides are ignored.
    """
    from_file = read_config_file(config_path) if config_path is not None else {}
    cli = {key: value for key, value in (overrides or {}).items() if value is not None}
    experiment = experiment or from_file.get('experiment') or 'example1'
    merged = {**get_preset(experiment), **from_file, **cli, 'experiment': experiment}
    try:
        return ExperimentConfig.model_validate(merged)
    except ValidationError as e:
        raise ConfigError(_validation_message(e)) from e
