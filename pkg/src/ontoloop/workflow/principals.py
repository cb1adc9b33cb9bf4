"""Principals and the role vocabulary used for authorization decisions."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ontoloop.errors import ValidationError


class Role(str, Enum):
    CONTRIBUTOR = "contributor"
    REVIEWER = "reviewer"
    PUBLISHER = "publisher"
    OPERATOR = "operator"


@dataclass(frozen=True)
class Principal:
    """An authenticated actor: a human or a service identity."""

    id: str
    roles: frozenset[Role] = field(default_factory=frozenset)
    display_name: str | None = None

    def __post_init__(self):
        if not self.id or not self.id.strip():
            raise ValidationError("principal id must be non-empty")
        object.__setattr__(self, "roles", frozenset(Role(r) for r in self.roles))

    def has_role(self, role: Role) -> bool:
        return role in self.roles

    @classmethod
    def parse(cls, header: str) -> "Principal":
        """Parse the wire form ``id;role,role``; roles may be empty."""
        ident, sep, role_part = header.partition(";")
        if not ident.strip():
            raise ValidationError("principal header must start with an id")
        roles = []
        if sep and role_part.strip():
            for chunk in role_part.split(","):
                chunk = chunk.strip()
                if not chunk:
                    continue
                try:
                    roles.append(Role(chunk))
                except ValueError:
                    raise ValidationError(f"unknown role {chunk!r}") from None
        return cls(id=ident.strip(), roles=frozenset(roles))

    def __str__(self) -> str:
        return f"{self.id};{','.join(sorted(r.value for r in self.roles))}"
