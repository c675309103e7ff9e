"This file contains the oracle delivery plan and the violations reported by the checker"

from dataclasses import dataclass

import numpy as np


@dataclass(eq=False)
class DeliveryPlan:
    """Boxes delivered per station and period, the whole decision of a plan.

    Stops, arcs and masses follow from ``z`` because the route order is fixed.

    Attributes:
        z: Integer array of shape ``(n + 1, nt + 1)`` indexed ``z[i, t]`` with
            1-based station and period, row and column 0 unused.
    """
    z: np.ndarray

    @classmethod
    def zeros(cls, n: int, nt: int) -> 'DeliveryPlan':
        "Plan delivering nothing."
        return cls(np.zeros((n + 1, nt + 1), dtype=int))

    @classmethod
    def from_rows(cls, rows) -> 'DeliveryPlan':
        """Plan from one sequence of deliveries per station.

        Examples:
            >>> DeliveryPlan.from_rows([[2, 0], [1, 1]]).z[1, 1]
            2
        """
        body = np.asarray(rows, dtype=int)
        z = np.zeros((body.shape[0] + 1, body.shape[1] + 1), dtype=int)
        z[1:, 1:] = body
        return cls(z)

    @property
    def n(self) -> int:
        "Number of stations."
        return self.z.shape[0] - 1

    @property
    def nt(self) -> int:
        "Number of periods."
        return self.z.shape[1] - 1

    def stops(self, t: int) -> list[int]:
        "Stations receiving boxes in period ``t``, in route order."
        return [i for i in range(1, self.n + 1) if self.z[i, t] > 0]

    def key(self) -> tuple[int, ...]:
        "Station-major sequence used to break ties between equal plans."
        return tuple(int(v) for v in self.z[1:, 1:].ravel())


@dataclass(frozen=True)
class Violation:
    """One constraint of a solution that does not hold.

    Attributes:
        family: Constraint family, one of ``family_list``.
        location: ``(i, j, t)``, None where the index does not apply.
        magnitude: Amount by which the constraint is violated.
    """
    family: str
    location: tuple
    magnitude: float

    def tsv(self) -> str:
        "Tab separated ``family, i, j, t, magnitude``, ``-`` for unused indices."
        idx = ['-' if k is None else str(k) for k in self.location]
        return '\t'.join([self.family, *idx, f'{self.magnitude:.9g}'])
