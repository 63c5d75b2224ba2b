from __future__ import annotations

import enum


class StatisticKind(str, enum.Enum):
    """Which comparison of p-1 with ord_p(a) is being counted.

    OMEGA_QUOTIENT      omega((p-1)/ord_p(a))
    BIG_OMEGA_QUOTIENT  Omega((p-1)/ord_p(a))
    OMEGA_DIFFERENCE    omega(p-1) - omega(ord_p(a))
    """

    OMEGA_QUOTIENT = "omega-quotient"
    BIG_OMEGA_QUOTIENT = "big-omega-quotient"
    OMEGA_DIFFERENCE = "omega-diff"

    @classmethod
    def parse(cls, name) -> "StatisticKind":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        aliases = {
            "omega/": cls.OMEGA_QUOTIENT,
            "omega-quotient": cls.OMEGA_QUOTIENT,
            "big-omega": cls.BIG_OMEGA_QUOTIENT,
            "big-omega-quotient": cls.BIG_OMEGA_QUOTIENT,
            "omega-difference": cls.OMEGA_DIFFERENCE,
            "omega-diff": cls.OMEGA_DIFFERENCE,
            "omega-": cls.OMEGA_DIFFERENCE,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown statistic {name!r}; expected one of {[s.value for s in cls]}") from None

    def __str__(self):
        return self.value


ALL_STATISTICS = tuple(StatisticKind)
