"""The full (n, k) code: Class A and Class B parities behind one encoder."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .class_a import class_a_equations, encode_class_a, mds_coefficients
from .class_b import ClassBNode, ClassBPlan, build_class_b, plan_from_nodes
from .gf import GF
from .model import CodeParams, ParityEquation, SymbolPos, make_field

MANIFEST_VERSION = 1


@dataclass(frozen=True, eq=False)
class Code:
    params: CodeParams
    field: GF
    coeffs: np.ndarray  # k x (n_a - k), column c -> parity node k + c
    class_a: tuple[ParityEquation, ...]
    plan: ClassBPlan | None

    @property
    def k(self) -> int:
        return self.params.k

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def equations(self) -> list[ParityEquation]:
        eqs = list(self.class_a)
        if self.plan is not None:
            eqs += self.plan.equations
        return eqs

    def equation(self, target: SymbolPos) -> ParityEquation:
        k, n_a = self.k, self.params.n_a
        if target.col < k:
            raise ValueError(f"{target} is a data position")
        if target.col < n_a:
            return self.class_a[(target.col - k) * k + target.row]
        return self.plan.equation_at(target)

    def node_equations(self, j: int) -> list[ParityEquation]:
        return [self.equation(SymbolPos(i, j)) for i in range(self.k)]

    def encode(self, data, field=None) -> np.ndarray:
        """Encode a k x k data block (trailing axes are stripes) into the k x n code array.

        Pass a CountingField as ``field`` to tally the arithmetic.
        """
        field = field or self.field
        data = np.asarray(data, dtype=self.field.dtype)
        k = self.k
        out = np.zeros((k, self.n) + data.shape[2:], dtype=self.field.dtype)
        out[:, :k] = data
        out[:, k : self.params.n_a] = encode_class_a(field, self.params, self.coeffs, data)
        if self.plan is not None:
            for eq in self.plan.equations:
                out[eq.target] = eq.evaluate(field, data)
        return out

    def encode_parity_node(self, data, j: int, field=None):
        field = field or self.field
        return np.stack([eq.evaluate(field, data) for eq in self.node_equations(j)])

    def punctured(self, count: int = 1) -> Code:
        """Drop the last ``count`` Class B nodes."""
        if self.plan is None or count > len(self.plan.nodes):
            raise ValueError("not enough Class B nodes to puncture")
        if count == len(self.plan.nodes):
            plan = None
        else:
            plan = self.plan.punctured(count)
        return Code(self.params.with_n(self.n - count), self.field, self.coeffs, self.class_a, plan)

    # -- manifest ---------------------------------------------------------

    def to_json(self) -> dict:
        p = self.params
        hexw = (p.width + 3) // 4
        return {
            "version": MANIFEST_VERSION,
            "params": {
                "n": p.n,
                "k": p.k,
                "n_a": p.n_a,
                "n_b": p.n_b,
                "tau": p.tau,
                "width": p.width,
                "modulus": f"{self.field.modulus:#x}",
            },
            "mds_coefficients": [
                [f"{int(v):0{hexw}x}" for v in row] for row in self.coeffs
            ],
            "class_b_nodes": [
                {"index": nd.index, "seed": nd.seed, "cols": list(nd.cols), "mirror": nd.mirror}
                for nd in (self.plan.nodes if self.plan else [])
            ],
            "equations": [eq.to_json() for eq in self.equations],
            "designated": [
                [pos.row, pos.col, tgt.row, tgt.col]
                for pos, tgt in sorted((self.plan.designated if self.plan else {}).items())
            ],
            "read_costs": (
                [[None if np.isinf(v) else int(v) for v in row] for row in self.plan.read_costs]
                if self.plan
                else None
            ),
        }

    @classmethod
    def from_json(cls, obj: dict) -> Code:
        if obj.get("version") != MANIFEST_VERSION:
            raise ValueError(f"unsupported manifest version {obj.get('version')}")
        pj = obj["params"]
        params = CodeParams(
            pj["n"], pj["k"], pj["n_a"], pj["tau"], pj["width"], int(pj["modulus"], 16), n_b=pj["n_b"]
        )
        field = make_field(params.width, params.modulus)
        coeffs = np.array(
            [[int(v, 16) for v in row] for row in obj["mds_coefficients"]], dtype=field.dtype
        ).reshape(params.k, params.n_a - params.k)
        nodes = [
            ClassBNode(nd["index"], nd["seed"], tuple(nd["cols"]), nd["mirror"])
            for nd in obj["class_b_nodes"]
        ]
        plan = plan_from_nodes(params, nodes) if nodes else None
        code = cls(params, field, coeffs, tuple(class_a_equations(params, coeffs)), plan)
        stored = [ParityEquation.from_json(e) for e in obj["equations"]]
        if stored != code.equations:
            raise ValueError("manifest equations disagree with the stored coefficients and nodes")
        return code


@lru_cache(maxsize=256)
def build_code(params: CodeParams) -> Code:
    """Construct (and cache) the code for ``params``."""
    field = params.field()
    coeffs = mds_coefficients(params, field)
    coeffs.setflags(write=False)
    plan = build_class_b(params) if params.n > params.n_a else None
    return Code(params, field, coeffs, tuple(class_a_equations(params, coeffs)), plan)
