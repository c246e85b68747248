"""Linear time-invariant systems toolkit: simulation, stability, Gramians
and controller design."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .matrixcore import Spectrum, determinant, eigenvalues, expm, solve
from .statespace import (
    CanonicalForm,
    CharPoly,
    Domain,
    StateSpaceModel,
    characteristic_polynomial,
    controllability_matrix,
    to_phase_variable,
    transition_matrix,
)
from .simulate import (
    Constant,
    InputSignal,
    Samples,
    Sinusoid,
    Step,
    Trajectory,
    Zero,
    convolution_states,
    simulate_continuous,
    simulate_discrete,
)
from .stability import (
    BiboProfile,
    Classification,
    LyapunovVerdict,
    StabilityReport,
    bibo_integral,
    classify,
    equilibrium,
    lyapunov_check,
)
from .gramian import (
    GramianReport,
    controllability_gramian,
    min_energy_input,
    observability_gramian,
    reconstruct_initial_state,
)
from .design import (
    FeedbackGain,
    LqrSolution,
    closed_loop,
    deadbeat_gain,
    lqr,
    output_weight,
    state_feedback_gain,
)
