"""Erasure codes with low repair bandwidth and low repair complexity.

An (n, k) code here stacks two kinds of parity on a k x k data block:
Class A nodes (a Reed-Solomon code with piggybacks) carry the fault
tolerance, and addition-only Class B nodes let a failed data node be
rebuilt with roughly one extra read per symbol.
"""

from .class_a import (
    class_a_equations,
    encode_class_a,
    mds_coefficients,
    piggyback_submatrix,
    piggyback_system_matrix,
)
from .class_b import (
    ClassBPlan,
    build_class_b,
    designated_parity,
    init_read_costs,
    read_cost,
)
from .code import Code, build_code
from .gf import GF, CountingField
from .model import (
    CodeParams,
    ParamError,
    ParityEquation,
    SymbolPos,
    set_Dtilde,
    set_Q,
    set_R,
    set_X,
    validate,
)
from .repair import (
    ArrayReader,
    RepairReport,
    Undecodable,
    decode_erasures,
    repair_data_node,
    repair_parity_node,
    verify_fault_tolerance,
)

__version__ = "0.1.0"
