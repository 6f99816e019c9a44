"""Ring-LWE lattice attack lab.

Exact negacyclic ring arithmetic, LLL basis reduction with an exact-integer
certifying engine, Kannan-style embedding attacks on two-sample RLWE
instances, a toy encryption scheme as the end-to-end success check, and a
seeded sweep harness with rank-test statistics.
"""

from .attack import (
    AttackInstance,
    AttackResult,
    EmbeddingLattice,
    attack,
    build_instance,
    build_qary_generators,
    extract_error,
    kannan_embed,
    recover_secret,
)
from .crypto import (
    Ciphertext,
    KeyPair,
    Plaintext,
    attack_succeeds,
    decrypt,
    encrypt,
    encrypt_with,
    keygen,
    random_plaintext,
)
from .experiment import (
    DEFAULT_Q,
    DEFAULT_SIGMA,
    SweepConfig,
    SweepReport,
    TrialRecord,
    aggregate,
    read_records_csv,
    run_sweep,
    run_trial,
    write_records_csv,
)
from .lattice import (
    GsoData,
    LllParams,
    ReductionBudgetError,
    extract_independent,
    gso,
    hnf,
    is_lll_reduced,
    lll_reduce,
    root_hermite_factor,
    size_reduce,
)
from .ring import (
    GaussianParams,
    RingContext,
    RingElement,
    multiplication_matrix,
    sample_error,
    sample_secret,
    sample_uniform,
)
from .stats import SampleGroup, TestOutcome, kruskal_wallis, mann_whitney_u

__version__ = "0.1.0"
