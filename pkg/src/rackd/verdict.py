from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

TYPE_D = "TypeD"
NOT_TYPE_D = "NotTypeD"
UNKNOWN = "Unknown"

EXHAUSTIVE = "exhaustive-scan"
INVOLUTION = "involution-product-orders"
BREUER = "breuer-reduction"


@dataclass
class TypeDVerdict:
    """Outcome of a type-D decision.

    ``certificate`` is set for TypeD, ``proof_method`` for NotTypeD, and
    ``details`` carries whatever evidence backs the method (the product-order
    spectrum, a reduction tree, or diagnostics for Unknown).
    """

    status: str
    certificate: Any = None
    proof_method: str | None = None
    budget_spent: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def is_type_d(self) -> bool:
        return self.status == TYPE_D

    @classmethod
    def type_d(cls, certificate, **kw):
        return cls(TYPE_D, certificate=certificate, **kw)

    @classmethod
    def not_type_d(cls, method, **kw):
        return cls(NOT_TYPE_D, proof_method=method, **kw)

    @classmethod
    def unknown(cls, **kw):
        return cls(UNKNOWN, **kw)
