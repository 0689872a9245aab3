"""Verification reports: named identities with their exact residuals."""

from dataclasses import dataclass, field
from typing import List

from .linalg import Mat


@dataclass(frozen=True)
class Check:
    name: str
    identity: str
    residual: tuple  # of Mat; empty when the operator residual is zero

    @property
    def passed(self):
        return all(m.is_zero() for m in self.residual)


@dataclass
class VerificationReport:
    checks: List[Check] = field(default_factory=list)

    def add(self, name, identity, residual):
        if isinstance(residual, Mat):
            residual = (residual,)
        self.checks.append(Check(name, identity, tuple(residual)))
        return self.checks[-1]

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self):
        return [c.name for c in self.checks]

    def summary(self):
        return "\n".join("%-4s %s: %s" % ("ok" if c.passed else "FAIL", c.name, c.identity)
                         for c in self.checks)


def op_residual(a, b):
    """Coefficient matrices of ``a - b`` (empty when equal)."""
    return (a - b).coeffs


def wave_residual(a, b):
    return (a - b).residual()
