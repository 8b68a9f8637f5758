"""Commutative metrised algebras of cubic forms: idempotents, extremality, Peirce data."""
from .calculus import RayleighEval, eval_f, fd_check, grad_u, hess_u
from .core import (
    BilinearForm,
    CubicForm,
    FormError,
    MetrisedAlgebra,
    algebra_from_cubic,
    check_structure,
    cubic_from_algebra,
    left_mult_matrix,
    multiply,
    polarize,
)
from .fileio import dumps_algebra, load_algebra, loads_algebra
from .peirce import (
    build_restricted_algebra,
    check_subalgebra,
    corollary_unit_split,
    decide_decomposable,
    find_unit,
    peirce_spectrum,
)
from .search import (
    SearchConfig,
    certify_extremal,
    demonstrate_oddness_gap,
    find_idempotents,
    maximize_on_sphere,
    stationary_to_idempotent,
)
from .zoo import (
    CounterexampleParams,
    counterexample_oracle,
    hadamard_idempotents,
    make_counterexample,
    make_hadamard,
    make_open_peirce_algebra,
    make_random_algebra,
)

__version__ = "0.1.0"
