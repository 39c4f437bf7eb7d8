"""Commodities, transport modes, and the site key used throughout the model."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Commodity(str, Enum):
    """Tradeable energy carrier; every price, curve and option is keyed by one."""

    AMMONIA = "ammonia"
    LIQUID_HYDROGEN = "liquid_hydrogen"
    GASEOUS_HYDROGEN = "gaseous_hydrogen"


class Product(str, Enum):
    """What a consumer actually wants delivered."""

    AMMONIA = "ammonia"
    HYDROGEN = "hydrogen"


class TransportMode(str, Enum):
    PIPELINE = "pipeline"
    RAIL = "rail"
    TRUCK = "truck"


class Technology(str, Enum):
    PV = "pv"
    WIND_ONSHORE = "wind_onshore"
    WIND_OFFSHORE_SHALLOW = "wind_offshore_shallow"
    WIND_OFFSHORE_DEEP = "wind_offshore_deep"


GENERATION_TECHNOLOGIES = (
    Technology.PV,
    Technology.WIND_ONSHORE,
    Technology.WIND_OFFSHORE_SHALLOW,
    Technology.WIND_OFFSHORE_DEEP,
)

# The six valid inland distribution modes: ammonia moves by truck, rail or
# pipeline; liquid hydrogen by truck or rail; gaseous hydrogen by pipeline.
DISTRIBUTION_MODES: tuple[tuple[Commodity, TransportMode], ...] = (
    (Commodity.AMMONIA, TransportMode.TRUCK),
    (Commodity.AMMONIA, TransportMode.RAIL),
    (Commodity.AMMONIA, TransportMode.PIPELINE),
    (Commodity.LIQUID_HYDROGEN, TransportMode.TRUCK),
    (Commodity.LIQUID_HYDROGEN, TransportMode.RAIL),
    (Commodity.GASEOUS_HYDROGEN, TransportMode.PIPELINE),
)


def is_valid_distribution(commodity: Commodity, mode: TransportMode) -> bool:
    return (commodity, mode) in DISTRIBUTION_MODES


KM_PER_SHORE_BAND = 250.0
HOURS_PER_YEAR = 8760.0


@dataclass(frozen=True, order=True)
class SiteKey:
    """One production opportunity: country, technology, resource quality class,
    and distance-to-shore band (each band is 250 km of inland pipeline)."""

    country: str
    technology: Technology
    resource_class: int
    shore_band: int

    def __post_init__(self) -> None:
        if not 1 <= self.resource_class <= 5:
            raise ValueError(f"resource_class must be 1..5, got {self.resource_class}")
        if self.shore_band < 0:
            raise ValueError(f"shore_band must be >= 0, got {self.shore_band}")

    @property
    def inland_km(self) -> float:
        return self.shore_band * KM_PER_SHORE_BAND

    def label(self) -> str:
        return f"{self.country}_{self.technology.value}_{self.resource_class}_{self.shore_band}"
