from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class ReliabilityData:
    """An annotator x unit matrix of binary ratings with missing entries.

    ratings maps (rater_id, unit_id) -> 0/1 (1 = biased). Units with fewer
    than two ratings contribute nothing to agreement (no pairable values) but
    are legal. Every listed unit must have at least one rating.
    """
    units: list[str]
    raters: list[str]
    ratings: dict[tuple[str, str], int] = field(default_factory=dict)

    def __post_init__(self):
        rated_units = {u for (_r, u) in self.ratings}
        missing = [u for u in self.units if u not in rated_units]
        if missing:
            raise ValueError(f"units without any rating: {missing[:5]}")
        for key, value in self.ratings.items():
            if value not in (0, 1):
                raise ValueError(f"rating for {key} must be 0 or 1, got {value!r}")

    @classmethod
    def from_rows(cls, rows: dict[str, dict[str, int]]) -> "ReliabilityData":
        """Build from {rater: {unit: value}} rows."""
        raters = list(rows)
        units: list[str] = []
        ratings: dict[tuple[str, str], int] = {}
        for rater, per_unit in rows.items():
            for unit, value in per_unit.items():
                if unit not in units:
                    units.append(unit)
                ratings[(rater, unit)] = value
        return cls(units=units, raters=raters, ratings=ratings)

    def unit_values(self) -> list[list[int]]:
        """Ratings grouped per unit, rater order, for oracle-style consumers."""
        per_unit: dict[str, list[int]] = {u: [] for u in self.units}
        for rater in self.raters:
            for unit in self.units:
                v = self.ratings.get((rater, unit))
                if v is not None:
                    per_unit[unit].append(v)
        return [per_unit[u] for u in self.units]
