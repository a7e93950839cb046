"""Entanglement dynamics of independent qubits under local non-Markovian
amplitude damping: survival-probability evaluators, Kraus/tensor channel
machinery, closed-form two-qubit evolution, Wootters concurrence, and
death/revival detection.
"""

from ._accel import NUMBA_ENABLED, backend_name
from .channels import (DynamicalMap, KrausSet, apply_map, choi_matrix,
                       choi_min_eigenvalue, from_kraus, product_extend)
from .concurrence import (ConcurrenceTrace, Event, build_trace, concurrence,
                          concurrence_phi, concurrence_phi_signed,
                          concurrence_psi, concurrence_psi_signed,
                          concurrence_x, concurrence_x_signed, detect_events)
from .damping import DampingSnapshot, channel_at_time, damping_channel
from .errors import ConfigError, DimensionError, RegimeError, ValidationError
from .memory import (MemoryFunction, ReservoirSpec, correlation_kernel,
                     p_closed, p_closed_strong, p_closed_weak, p_markov,
                     p_volterra, p_zeros)
from .numerics import (EigenResult, eigenvalues, matrices_close, ode_rk4,
                       volterra_product_integration)
from .pair_dynamics import (XState, crosscheck, evolve_closed_form,
                            evolve_elements, evolve_x_state,
                            x_state_from_density)
from .states import (BASIS_LABELS, DensityMatrix, PureState, ValidationReport,
                     joint_bits, joint_index, make_phi, make_psi, make_werner,
                     pure_to_density, validate_density)

__version__ = "0.1.0"
