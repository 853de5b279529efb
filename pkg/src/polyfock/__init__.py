"""Gabor frames with Hermite windows and sampling in polyanalytic Fock spaces."""
from .bargmann import (fock_shift, hermite_field, inverse_true_poly_bargmann, kernel_eval,
                       poly_bargmann, project, true_poly_bargmann)
from .core import (AccuracyWarning, ComplexGrid, HypothesisViolation, Lattice, NumericalQualityError,
                   PolyFockField, PolyfockError, SampleSet, Signal, TruncationWarning, adjoint_lattice,
                   make_lattice, sample_p_norm, separable_lattice, square_lattice, weighted_p_norm)
from .elliptic import SigmaContext, interpolator_eval, vector_interpolator
from .frames import biorthogonality_check, dual_window, frame_bounds
from .hermite import hermite_functions, hermite_signal, hermite_window
from .multiplex import add_noise, mux_decode, mux_encode
from .sampling import interpolate, reconstruct_from_samples, reconstruct_vector, sample_field
from .tfa import istft, stft, tf_shift

__version__ = "0.1.0"
