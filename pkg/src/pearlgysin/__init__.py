"""Pearl-complex engine over GF(2).

Builds cochain complexes from combinatorial count data, assembles the
circle-bundle short exact sequence on doubled generators, and verifies the
resulting long exact sequence, Euler class, quantum products and
positive-coefficient comparisons -- every identity checked, none assumed.
"""

from .chains import Cochain, LinearMap, format_cochain
from .complexes import (
    CohomologyTable,
    DiffTerm,
    Generator,
    PearlComplex,
    PearlData,
    build_complex,
    check_d_squared,
    check_euler_balance,
    cohomology,
    collapse_to_periodic,
)
from .bundle import (
    BundleComplex,
    ConnectingMap,
    EulerClass,
    TwistTerm,
    ambient_variant,
    build_bundle_complex,
    bundle_ses,
    classical_gysin,
    connecting_map,
    euler_class,
    long_exact_sequence,
    map_i,
    map_p,
    verify_chain_maps,
)
from .errors import (
    DegreeViolation,
    EngineError,
    NotCocycle,
    NotInvertible,
    RingMismatch,
    SchemaError,
    TwistDegreeViolation,
    TwistNotCocycle,
    UnknownGenerator,
)
from .rings import (
    LaurentElement,
    RingSpec,
    ambient_ring,
    laurent_ring,
    positive_ring,
    sigma_specialize,
    to_ambient,
)

__version__ = "0.1.0"
