from .sequence import SignalSequence, as_sequence, require_equal_length
from .hankel import HankelMatrix, hankel, hankel_split, kron_lift, blockdiag_kron, aux_io
from .excitation import (
    PeCertificate,
    persistency_of_excitation,
    certify_excitation,
    min_dictionary_length
)

__all__ = [
    'SignalSequence',
    'as_sequence',
    'require_equal_length',
    'HankelMatrix',
    'hankel',
    'hankel_split',
    'kron_lift',
    'blockdiag_kron',
    'aux_io',
    'PeCertificate',
    'persistency_of_excitation',
    'certify_excitation',
    'min_dictionary_length'
]
