"""Constants claimed by the error analysis, with per-case values."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

LEMMA3_CASE_CONSTANTS = {
    1: 1.0,
    2: math.pi**4 / 2 + math.pi**2,
    3: 8.0,
    4: math.pi**4 / 2 + math.pi**2,
    5: math.pi**2,
    6: math.pi**2,
    7: 8.0,
    8: math.pi**2,
    9: 0.0,
}

# Lemma-2 Case 1 follows a sharper chain than the generic c2 bound.
LEMMA2_CASE1_CONSTANT = 0.5


@dataclass(frozen=True)
class ClaimedConstants:
    c1: float = math.pi / 2
    c3: float = math.pi**2
    per_case: dict = field(default_factory=lambda: dict(LEMMA3_CASE_CONSTANTS))

    @property
    def c2(self) -> float:
        return 8.0 * self.c1**2

    @property
    def c_lemma3(self) -> float:
        return max(self.per_case.values())

    def lemma2_case(self, case: int) -> float:
        return LEMMA2_CASE1_CONSTANT if case == 1 else self.c2

    def lemma3_case(self, case: int) -> float:
        return self.per_case[case]

    def claimed(self, inequality: str, case: int | None) -> float:
        if inequality == "lemma1":
            return self.c1
        if inequality == "lemma2":
            return self.c2 if case is None else self.lemma2_case(case)
        if inequality == "lemma3":
            return self.c_lemma3 if case is None else self.lemma3_case(case)
        raise KeyError(inequality)
