"""Transport economics: annuities, shipping, pipelines, trucks and rail.

Everything here is a pure function of its inputs.  Two cost shapes coexist:

* per-MWh rates (shipping legs and pipelines feeding the border-price model),
  continuous in distance; and
* :class:`TransportUnitEconomics` for inland distribution, where investment
  comes in integer units (one tractor-trailer, one train, one pipeline) and
  the per-unit annual cost is billed at full utilisation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .commodities import Commodity, Product, TransportMode, is_valid_distribution


class InvalidPairing(Exception):
    """Commodity/mode combination outside the six valid distribution modes."""


class PipelineScope(str, Enum):
    INTERNATIONAL_GH2 = "international_gh2"
    DOMESTIC_GH2 = "domestic_gh2"
    DOMESTIC_NH3 = "domestic_nh3"


def crf(wacc: float, lifetime_y: float) -> float:
    """Capital recovery factor; reduces to 1/lifetime at zero interest."""
    if wacc == 0.0:
        return 1.0 / lifetime_y
    return wacc / (1.0 - (1.0 + wacc) ** (-lifetime_y))


def annualize(capex: float, opex_frac: float, lifetime_y: float, wacc: float) -> float:
    """Equivalent annual cost of an asset: capex * CRF plus yearly O&M."""
    if lifetime_y < 1:
        raise ValueError(f"lifetime must be >= 1 year, got {lifetime_y}")
    if wacc < 0:
        raise ValueError(f"wacc must be non-negative, got {wacc}")
    return capex * crf(wacc, lifetime_y) + opex_frac * capex


@dataclass(frozen=True)
class ShipParams:
    """Seaborne transport of one commodity (ammonia or liquid hydrogen)."""

    commodity: Commodity
    capex_eur: float
    opex_frac: float
    lifetime_y: float
    operating_eur_per_h: float
    available_h_per_y: float
    velocity_kmh: float
    fuel_mwh_per_km: float
    fuel_eur_per_mwh: float
    payload_mwh: float
    load_time_h: float
    flash_loss_per_load: float
    boiloff_per_h: float

    def __post_init__(self) -> None:
        if self.payload_mwh <= 0 or self.velocity_kmh <= 0:
            raise ValueError("ship payload and velocity must be positive")
        if self.available_h_per_y > 8760:
            raise ValueError("ship availability cannot exceed 8760 h/a")


@dataclass(frozen=True)
class PipelineParams:
    scope: PipelineScope
    capex_eur_per_km: float
    opex_frac: float
    lifetime_y: float
    capacity_factor: float
    throughput_mwh_per_y: float
    elec_mwh_per_mwh_km: float
    elec_price_eur_per_mwh: float
    loss_per_100km: float


@dataclass(frozen=True)
class LandsideEntry:
    """Road or rail rolling stock for one commodity (one row of the input table)."""

    trailer_capex_eur: float
    motive_capex_eur: float       # truck tractor or rail locomotive
    motive_lifetime_y: float
    payload_mwh: float
    trailer_lifetime_y: float
    speed_kmh: float
    load_time_h: float
    driver_eur_per_h: float
    fuel_mwh_per_km: float
    fuel_eur_per_mwh: dict[int, float]
    freight_eur_per_km: float
    through_loss: float           # fraction of throughput lost per loading
    through_boiloff: float        # additional per-load boil-off fraction
    boiloff_per_day: float
    operating_h_per_y: float
    wagons_per_train: int = 1


@dataclass
class LandsideParams:
    """Table of road/rail entries keyed by (mode, commodity)."""

    entries: dict[tuple[TransportMode, Commodity], LandsideEntry] = field(default_factory=dict)

    def entry(self, mode: TransportMode, commodity: Commodity) -> LandsideEntry:
        try:
            return self.entries[(mode, commodity)]
        except KeyError:
            raise InvalidPairing(f"no landside parameters for {commodity.value} by {mode.value}") from None


@dataclass(frozen=True)
class TransportUnitEconomics:
    """One integer transport unit: annual cost, deliverable capacity, losses.

    ``variable_cost_per_mwh`` is zero under the default full-utilisation
    billing; it carries the motion costs instead when those are billed per
    transported MWh.
    """

    unit_cost_per_year: float
    effective_capacity: float     # MWh deliverable per unit and year
    delivery_efficiency: float    # delivered / loaded
    variable_cost_per_mwh: float = 0.0


def ship_unit_cost(p: ShipParams, distance_km: float, wacc: float) -> float:
    """Cost in EUR per MWh delivered by a dedicated ship on a fixed route.

    A round trip is two voyages plus loading and unloading; the fleet sails
    ``available_h_per_y`` hours a year.  Flash losses apply once per loading,
    boil-off compounds over the loaded voyage.  At zero distance trips are
    bounded by loading time, so the cost stays finite.
    """
    if distance_km < 0:
        raise ValueError("distance must be non-negative")
    round_trip_h = 2.0 * distance_km / p.velocity_kmh + 2.0 * p.load_time_h
    trips = p.available_h_per_y / round_trip_h
    voyage_h = distance_km / p.velocity_kmh
    delivered_per_trip = (p.payload_mwh * (1.0 - p.flash_loss_per_load)
                          * (1.0 - p.boiloff_per_h) ** voyage_h)
    annual_cost = (annualize(p.capex_eur, p.opex_frac, p.lifetime_y, wacc)
                   + p.operating_eur_per_h * p.available_h_per_y
                   + p.fuel_mwh_per_km * 2.0 * distance_km * p.fuel_eur_per_mwh * trips)
    return annual_cost / (trips * delivered_per_trip)


def pipeline_cost_per_mwh(p: PipelineParams, distance_km: float, wacc: float) -> float:
    """Cost in EUR per MWh moved through a pipeline of reference capacity."""
    if distance_km < 0:
        raise ValueError("distance must be non-negative")
    if p.throughput_mwh_per_y <= 0:
        raise ValueError("pipeline throughput must be positive")
    annual_capex = annualize(p.capex_eur_per_km * distance_km, p.opex_frac,
                             p.lifetime_y, wacc)
    capex_term = annual_capex / (p.throughput_mwh_per_y * p.capacity_factor)
    elec_term = p.elec_mwh_per_mwh_km * distance_km * p.elec_price_eur_per_mwh
    return capex_term + elec_term


def pipeline_delivery_efficiency(p: PipelineParams, distance_km: float) -> float:
    return (1.0 - p.loss_per_100km) ** (distance_km / 100.0)


def pipeline_unit(p: PipelineParams, distance_km: float, wacc: float,
                  motion_in_unit: bool = True) -> TransportUnitEconomics:
    """One pipeline of reference capacity as an integer investment unit."""
    if distance_km <= 0:
        raise ValueError("pipeline unit requires a positive distance")
    capacity = p.throughput_mwh_per_y * p.capacity_factor
    eff = pipeline_delivery_efficiency(p, distance_km)
    annual = annualize(p.capex_eur_per_km * distance_km, p.opex_frac, p.lifetime_y, wacc)
    elec_per_mwh = p.elec_mwh_per_mwh_km * distance_km * p.elec_price_eur_per_mwh
    if motion_in_unit:
        return TransportUnitEconomics(annual + elec_per_mwh * capacity,
                                      capacity * eff, eff)
    return TransportUnitEconomics(annual, capacity * eff, eff, elec_per_mwh)


def landside_unit(p: LandsideParams, mode: TransportMode, commodity: Commodity,
                  distance_km: float, wacc: float, year: int,
                  motion_in_unit: bool = True) -> TransportUnitEconomics:
    """Economics of one truck (tractor + trailer) or one train.

    A train bundles ``wagons_per_train`` trailers with one locomotive.  The
    deliverable capacity nets out per-load throughput losses and daily
    boil-off compounded over the loaded leg.  Motion costs (fuel, freight,
    driver) are billed at the unit's full yearly utilisation unless
    ``motion_in_unit`` is false.
    """
    if mode not in (TransportMode.TRUCK, TransportMode.RAIL):
        raise InvalidPairing(f"landside units exist only for truck and rail, not {mode.value}")
    if not is_valid_distribution(commodity, mode):
        raise InvalidPairing(f"{commodity.value} cannot move by {mode.value}")
    if distance_km <= 0:
        raise ValueError("distance must be positive")
    e = p.entry(mode, commodity)
    if year not in e.fuel_eur_per_mwh:
        raise KeyError(f"no fuel cost for year {year}")

    round_trip_h = 2.0 * distance_km / e.speed_kmh + 2.0 * e.load_time_h
    trips = e.operating_h_per_y / round_trip_h
    transit_days = distance_km / e.speed_kmh / 24.0
    eff = ((1.0 - e.through_loss) * (1.0 - e.through_boiloff)
           * (1.0 - e.boiloff_per_day) ** transit_days)

    if mode is TransportMode.TRUCK:
        payload = e.payload_mwh
        fixed = (annualize(e.trailer_capex_eur, 0.0, e.trailer_lifetime_y, wacc)
                 + annualize(e.motive_capex_eur, 0.0, e.motive_lifetime_y, wacc))
        motion = (e.driver_eur_per_h * e.operating_h_per_y
                  + e.fuel_mwh_per_km * 2.0 * distance_km * e.fuel_eur_per_mwh[year] * trips)
    else:
        payload = e.payload_mwh * e.wagons_per_train
        fixed = (e.wagons_per_train * annualize(e.trailer_capex_eur, 0.0, e.trailer_lifetime_y, wacc)
                 + annualize(e.motive_capex_eur, 0.0, e.motive_lifetime_y, wacc))
        motion = e.freight_eur_per_km * 2.0 * distance_km * trips

    capacity = trips * payload * eff
    if motion_in_unit:
        return TransportUnitEconomics(fixed + motion, capacity, eff)
    return TransportUnitEconomics(fixed, capacity, eff, motion / (trips * payload))


# Conversion chains between the imported commodity and the desired product.
# Each step names an entry in the conversion cost table for the run year.
_CHAIN_STEPS: dict[tuple[Commodity, Product], tuple[str, ...]] = {
    (Commodity.AMMONIA, Product.AMMONIA): (),
    (Commodity.AMMONIA, Product.HYDROGEN): ("cracking",),
    (Commodity.LIQUID_HYDROGEN, Product.HYDROGEN): ("regasification",),
    (Commodity.LIQUID_HYDROGEN, Product.AMMONIA): ("regasification", "haber_bosch"),
    (Commodity.GASEOUS_HYDROGEN, Product.HYDROGEN): (),
    (Commodity.GASEOUS_HYDROGEN, Product.AMMONIA): ("haber_bosch",),
}


def chain_efficiency(imported: Commodity, mode: TransportMode, desired: Product,
                     delivery_eff: float, conversions, elec_price: float,
                     wacc: float, utilization_h: float = 8760.0) -> tuple[float, float]:
    """Delivered-useful fraction and conversion cost for one distribution mode.

    ``conversions`` maps step names (``cracking``, ``regasification``,
    ``haber_bosch``) to technology cost records (capex in EUR/kW of output,
    opex fraction, lifetime, output-per-input efficiency, electricity demand
    per unit of output).  The returned cost is EUR per MWh *transported*:
    conversion plant is sized for flat operation over ``utilization_h`` hours
    and its electricity is bought at the average grid price.
    """
    if not is_valid_distribution(imported, mode):
        raise InvalidPairing(f"{imported.value} cannot move by {mode.value}")
    steps = _CHAIN_STEPS[(imported, desired)]
    eff = delivery_eff
    stream = delivery_eff     # MWh entering the next step per MWh transported
    cost = 0.0
    for name in steps:
        tech = conversions[name]
        annual_per_mw = annualize(tech.capex_eur_per_kw * 1000.0, tech.opex_frac,
                                  tech.lifetime_y, wacc)
        per_mwh_out = annual_per_mw / utilization_h + tech.power_demand * elec_price
        cost += stream * tech.efficiency * per_mwh_out
        stream *= tech.efficiency
        eff *= tech.efficiency
    return eff, cost
