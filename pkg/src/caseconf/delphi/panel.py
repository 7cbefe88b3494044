"""Expert panel construction with round-robin role assignment."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Optional, Sequence

from ..errors import CaseConfError

DEFAULT_PANEL_SIZE = 50


@dataclass(frozen=True)
class Expert:
    index: int
    role: str


@dataclass(frozen=True)
class Panel:
    experts: tuple[Expert, ...]

    @property
    def n_experts(self) -> int:
        return len(self.experts)

    def to_dict(self) -> dict:
        return {"experts": [{"index": e.index, "role": e.role} for e in self.experts]}


@lru_cache(maxsize=1)
def default_roles() -> tuple[str, ...]:
    """The bundled 40-role list spanning forecasting-relevant domains."""
    raw = json.loads(
        resources.files("caseconf.data").joinpath("expert_roles.json").read_text("utf-8")
    )
    return tuple(raw)


def assign_roles(n_experts: int, roles: Optional[Sequence[str]] = None) -> Panel:
    """Build a panel of ``n_experts``, assigning roles round-robin.

    Expert i receives roles[i mod len(roles)], so a 50-expert panel over the
    default 40 roles reuses the first ten roles once.
    """
    if n_experts < 1:
        raise CaseConfError(f"panel needs at least one expert, got {n_experts}")
    roles = tuple(default_roles() if roles is None else roles)
    if not roles:
        raise CaseConfError("role list must not be empty")
    return Panel(
        experts=tuple(Expert(index=i, role=roles[i % len(roles)]) for i in range(n_experts))
    )
