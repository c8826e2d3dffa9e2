from .lpv_model import (
    LpvIoModel,
    simulate_io,
    monomial_lift,
    monomial_bounds,
    example1_model,
    example1_base_scheduling,
    example1_scheduling
)
from .pendulum import (
    PendulumPlant,
    rk4_step,
    pendulum_scheduling,
    hold_input,
    pendulum_io_model,
    pendulum_model_scheduling
)
from .excitation import InputSpec, make_input
from .dictionary import (
    DataDictionary,
    LpvModelSource,
    PendulumSource,
    dictionary_recipe,
    generate_dictionary
)
from .dictionary_io import read_dictionary, write_dictionary

__all__ = [
    'LpvIoModel',
    'simulate_io',
    'monomial_lift',
    'monomial_bounds',
    'example1_model',
    'example1_base_scheduling',
    'example1_scheduling',
    'PendulumPlant',
    'rk4_step',
    'pendulum_scheduling',
    'hold_input',
    'pendulum_io_model',
    'pendulum_model_scheduling',
    'InputSpec',
    'make_input',
    'DataDictionary',
    'LpvModelSource',
    'PendulumSource',
    'dictionary_recipe',
    'generate_dictionary',
    'read_dictionary',
    'write_dictionary'
]
