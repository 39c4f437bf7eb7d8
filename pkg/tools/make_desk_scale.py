"""Regenerate the bundled desk-scale scenario under src/h2chain/data/desk_scale.

Deterministic (seeded): two exporting countries, PV and onshore wind in two
resource classes each, one representative 168-hour week weighted to a full
year.  Cost tables follow published techno-economic surveys for 2030/2040;
values that the model is sensitive to but that public tables do not pin down
(tank cycling, pipeline unit granularity, truck duty hours) are desk
assumptions documented in the dataset README.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from h2chain.commodities import Commodity, Product, SiteKey, Technology
from h2chain.scenario import (
    Constants,
    ConsumerSite,
    CountryFinance,
    DemandSpec,
    ResourceProfile,
    Route,
    Scenario,
    StorageKind,
    StorageTech,
    TechCost,
    save_scenario,
)
from h2chain.transport import (
    LandsideEntry,
    LandsideParams,
    PipelineParams,
    PipelineScope,
    ShipParams,
)

OUT = Path(__file__).resolve().parents[1] / "src" / "h2chain" / "data" / "desk_scale"
HOURS = 168
WEIGHT = 8760.0 / HOURS


def pv_profile(rng: np.random.Generator, peak: float) -> np.ndarray:
    cf = np.zeros(HOURS)
    for day in range(HOURS // 24):
        amp = peak * (0.80 + 0.20 * rng.random())
        for hour in range(24):
            sun = np.sin(np.pi * (hour - 6) / 12.0)
            if sun > 0:
                cf[day * 24 + hour] = amp * sun ** 1.35
    return np.clip(np.round(cf, 6), 0.0, 1.0)


def wind_profile(rng: np.random.Generator, mean: float) -> np.ndarray:
    t = np.arange(HOURS)
    phase1, phase2 = rng.uniform(0, 2 * np.pi, size=2)
    series = (mean
              + 0.45 * mean * np.sin(2 * np.pi * t / 58.0 + phase1)
              + 0.30 * mean * np.sin(2 * np.pi * t / 17.0 + phase2)
              + 0.18 * mean * rng.standard_normal(HOURS))
    return np.clip(np.round(series, 6), 0.005, 0.99)


def build_profiles() -> tuple[ResourceProfile, ...]:
    rng = np.random.default_rng(174902)
    spec = [
        ("EXA", Technology.PV, 1, 1, 5000.0, ("pv", 0.93)),
        ("EXA", Technology.PV, 2, 1, 6000.0, ("pv", 0.74)),
        ("EXA", Technology.WIND_ONSHORE, 1, 1, 5500.0, ("wind", 0.44)),
        ("EXA", Technology.WIND_ONSHORE, 2, 1, 5000.0, ("wind", 0.31)),
        ("EXB", Technology.PV, 1, 2, 4000.0, ("pv", 0.86)),
        ("EXB", Technology.PV, 2, 2, 5000.0, ("pv", 0.66)),
        ("EXB", Technology.WIND_ONSHORE, 1, 1, 3000.0, ("wind", 0.53)),
        ("EXB", Technology.WIND_ONSHORE, 2, 1, 4000.0, ("wind", 0.38)),
    ]
    profiles = []
    for country, tech, cls, band, potential, (kind, level) in spec:
        cf = pv_profile(rng, level) if kind == "pv" else wind_profile(rng, level)
        profiles.append(ResourceProfile(
            site=SiteKey(country, tech, cls, band),
            potential_mw=potential,
            hours=tuple((float(c), WEIGHT) for c in cf),
        ))
    return tuple(profiles)


def build_tech_costs() -> dict[tuple[str, int], TechCost]:
    rows = {
        # name: (capex30, capex40, opex30, opex40, life30, life40, eff30, eff40, q30, q40)
        "pv": (425, 368, 0.026, 0.027, 30, 30, 1.0, 1.0, 0.0, 0.0),
        "wind_onshore": (987, 917, 0.025, 0.024, 30, 30, 1.0, 1.0, 0.0, 0.0),
        "wind_offshore_shallow": (1849, 1620, 0.028, 0.027, 30, 30, 1.0, 1.0, 0.0, 0.0),
        "wind_offshore_deep": (2631, 2300, 0.028, 0.027, 30, 30, 1.0, 1.0, 0.0, 0.0),
        "electrolysis": (801, 640, 0.035, 0.032, 20, 23, 0.67, 0.69, 0.0, 0.0),
        "haber_bosch": (1101, 963, 0.04, 0.04, 25, 25, 0.85, 0.85, 0.29, 0.29),
        "liquefaction": (1062, 584, 0.04, 0.04, 30, 30, 0.90, 0.90, 0.20, 0.20),
        "cracking": (764, 575, 0.04, 0.04, 25, 25, 0.78, 0.78, 0.05, 0.05),
        "regasification": (812, 593, 0.04, 0.04, 30, 30, 0.90, 0.90, 0.01, 0.01),
    }
    out = {}
    for name, (c30, c40, o30, o40, l30, l40, e30, e40, q30, q40) in rows.items():
        out[(name, 2030)] = TechCost(float(c30), o30, float(l30), e30, q30)
        out[(name, 2040)] = TechCost(float(c40), o40, float(l40), e40, q40)
    return out


def build_storage() -> dict[tuple[StorageKind, int], StorageTech]:
    out = {}
    # battery capex quoted per kWh in the source survey; stored per MWh here
    battery = {2030: (190_000.0, 0.02), 2040: (143_000.0, 0.03)}
    for year, (capex, opex) in battery.items():
        out[(StorageKind.BATTERY, year)] = StorageTech(
            StorageKind.BATTERY, capex, opex, 0.98, 15.0, 6.0, 0.0)
    for year in (2030, 2040):
        out[(StorageKind.SALT_CAVERN_GH2, year)] = StorageTech(
            StorageKind.SALT_CAVERN_GH2, 1465.0, 0.02, 1.0, 30.0, 0.0, 0.0)
        # throughput rates assume terminal buffers cycling ~22x/a (ammonia)
        # and ~5x/a (cryogenic liquid hydrogen)
        out[(StorageKind.TANK_NH3, year)] = StorageTech(
            StorageKind.TANK_NH3, 414.0, 0.02, 1.0, 30.0, 0.0, 2.0)
        out[(StorageKind.TANK_LH2, year)] = StorageTech(
            StorageKind.TANK_LH2, 1051.0, 0.02, 1.0, 30.0, 0.0, 24.0)
    return out


def build_ships() -> dict[Commodity, ShipParams]:
    return {
        Commodity.LIQUID_HYDROGEN: ShipParams(
            Commodity.LIQUID_HYDROGEN, 410_687_496.0, 0.04, 25.0, 607.0, 8000.0,
            33.0, 0.0, 170.0, 366_663.0, 54.0, 0.0001, 0.0001),
        Commodity.AMMONIA: ShipParams(
            Commodity.AMMONIA, 83_835_432.0, 0.04, 25.0, 607.0, 8000.0,
            30.0, 0.69, 170.0, 311_664.0, 54.0, 0.0, 0.0),
    }


def build_pipelines() -> dict[PipelineScope, PipelineParams]:
    return {
        PipelineScope.INTERNATIONAL_GH2: PipelineParams(
            PipelineScope.INTERNATIONAL_GH2, 6_982_749.0, 0.05, 40.0, 0.90,
            172_998_270.0, 0.00002, 53.0, 0.0),
        # distribution-grade line: pricier per km than the transmission backbone
        PipelineScope.DOMESTIC_GH2: PipelineParams(
            PipelineScope.DOMESTIC_GH2, 1_800_000.0, 0.05, 40.0, 0.90,
            11_500_000.0, 0.00002, 53.0, 0.0),
        # ammonia moves as a liquid: roughly half the energy flow of a gas line
        PipelineScope.DOMESTIC_NH3: PipelineParams(
            PipelineScope.DOMESTIC_NH3, 502_084.0, 0.03, 40.0, 1.0,
            5_750_000.0, 0.0, 53.0, 0.0),
    }


def build_landside() -> LandsideParams:
    fuel = {2030: 140.0, 2040: 70.0}
    zero_fuel = {2030: 0.0, 2040: 0.0}
    params = LandsideParams()
    from h2chain.commodities import TransportMode

    params.entries[(TransportMode.TRUCK, Commodity.AMMONIA)] = LandsideEntry(
        trailer_capex_eur=212_242.0, motive_capex_eur=201_630.0, motive_lifetime_y=5.0,
        payload_mwh=87.0, trailer_lifetime_y=12.0, speed_kmh=50.0, load_time_h=1.5,
        driver_eur_per_h=38.0, fuel_mwh_per_km=0.0023, fuel_eur_per_mwh=fuel,
        freight_eur_per_km=0.0, through_loss=0.01, through_boiloff=0.0,
        boiloff_per_day=0.0, operating_h_per_y=1500.0, wagons_per_train=1)
    params.entries[(TransportMode.TRUCK, Commodity.LIQUID_HYDROGEN)] = LandsideEntry(
        trailer_capex_eur=965_699.0, motive_capex_eur=201_630.0, motive_lifetime_y=5.0,
        payload_mwh=133.0, trailer_lifetime_y=12.0, speed_kmh=50.0, load_time_h=1.5,
        driver_eur_per_h=38.0, fuel_mwh_per_km=0.0023, fuel_eur_per_mwh=fuel,
        freight_eur_per_km=0.0, through_loss=0.01, through_boiloff=0.005,
        boiloff_per_day=0.003, operating_h_per_y=1500.0, wagons_per_train=1)
    params.entries[(TransportMode.RAIL, Commodity.AMMONIA)] = LandsideEntry(
        trailer_capex_eur=212_242.0, motive_capex_eur=2_980_900.0, motive_lifetime_y=30.0,
        payload_mwh=87.0, trailer_lifetime_y=12.0, speed_kmh=50.0, load_time_h=1.5,
        driver_eur_per_h=0.0, fuel_mwh_per_km=0.0, fuel_eur_per_mwh=zero_fuel,
        freight_eur_per_km=4.75, through_loss=0.01, through_boiloff=0.0,
        boiloff_per_day=0.0, operating_h_per_y=8000.0, wagons_per_train=20)
    params.entries[(TransportMode.RAIL, Commodity.LIQUID_HYDROGEN)] = LandsideEntry(
        trailer_capex_eur=965_699.0, motive_capex_eur=2_980_900.0, motive_lifetime_y=30.0,
        payload_mwh=133.0, trailer_lifetime_y=12.0, speed_kmh=50.0, load_time_h=1.5,
        driver_eur_per_h=0.0, fuel_mwh_per_km=0.0, fuel_eur_per_mwh=zero_fuel,
        freight_eur_per_km=4.75, through_loss=0.01, through_boiloff=0.005,
        boiloff_per_day=0.003, operating_h_per_y=8000.0, wagons_per_train=20)
    return params


def build_consumers() -> tuple[ConsumerSite, ...]:
    rows = [
        ("BASF", "ammonia", 3844, 3844, 656, 678, 153, 685),
        ("INEOS Manufacturing Deutschland GmbH", "ammonia", 1163, 1163, 500, 508, 290, 490),
        ("SKW Stickstoffwerke Piesteritz GmbH", "ammonia", 6212, 6212, 444, 414, 693, 448),
        ("YARA Brunsbuettel GmbH", "ammonia", 3769, 3769, 13, 4, 763, 3),
        ("Ship Bunkering Station Ludwigshafen", "ammonia", 87, 87, 658, 678, 154, 794),
        ("Fueling Station Berlin", "hydrogen", 8, 8, 368, None, 823, 437),
        ("Fueling Station Munich", "hydrogen", 8, 8, 864, None, 290, 924),
        ("Dow Europe Holding B.V.", "hydrogen", 1730, 9062, 63, 153, 732, 52),
        ("Basell Polyolefine GmbH Werk Wesseling", "hydrogen", 3184, 16680, 516, 520, 253, 521),
        ("OMV Werk Burghausen", "hydrogen", 1486, 7783, 961, 920, 622, 959),
        ("Salzgitter Flachstahl GmbH", "hydrogen", 9.75, 5107, 302, 291, 295, 573),
        ("Power Plant Altbach/Deizisau (EnBW)", "hydrogen", 18, 222, 757, 779, 256, 806),
        ("Power Plant Leipzig Sued (Stadtwerke Leipzig)", "hydrogen", 7, 37, 487, 561, 630, 507),
        ("Power Plant Schwarze Pumpe (LEAG)", "hydrogen", 6, 30, 543, 550, 818, 770),
    ]
    consumers = []
    for name, product, d30, d40, truck, rail, gh2, nh3 in rows:
        distances = {}
        for key, value in (("truck", truck), ("rail", rail),
                           ("gh2_pipeline", gh2), ("nh3_pipeline", nh3)):
            if value is not None:
                distances[key] = float(value)
        consumers.append(ConsumerSite(
            name=name, desired_product=Product(product),
            demand_mwh={2030: d30 * 1e3, 2040: d40 * 1e3}, distances=distances))
    return tuple(consumers)


def build_scenario() -> Scenario:
    return Scenario(
        years=(2030, 2040),
        commodities=(Commodity.AMMONIA, Commodity.LIQUID_HYDROGEN,
                     Commodity.GASEOUS_HYDROGEN),
        profiles=build_profiles(),
        tech_costs=build_tech_costs(),
        storage=build_storage(),
        finance={
            "EXA": CountryFinance("EXA", 0.06, 1.00),
            "EXB": CountryFinance("EXB", 0.075, 1.08),
        },
        ship_params=build_ships(),
        pipeline_params=build_pipelines(),
        landside_params=build_landside(),
        demand={2030: DemandSpec(2030, 3.0e6), 2040: DemandSpec(2040, 8.4e6)},
        consumers=build_consumers(),
        routes={
            "EXA": Route("EXA", ship_km=2500.0, pipeline_km=5000.0),
            "EXB": Route("EXB", ship_km=13000.0),
        },
        constants=Constants(),
    )


README = """\
Desk-scale scenario
===================

Synthetic, small, and fast: two exporting countries (EXA: strong solar,
pipeline-reachable and shippable; EXB: strong wind, ship-only), PV and
onshore wind in two resource classes each, and one representative 168-hour
week whose hour weights scale it to a full year (weights sum to 8760).

Cost tables follow published 2030/2040 techno-economic surveys.  Desk
assumptions where public tables are silent or ambiguous:

* opex entries in the transport tables are annual fractions of capex
  (a ship opex of 0.04 means 4 %/a);
* truck fuel use is 0.0023 MWh/km with hydrogen at 140 (2030) and
  70 (2040) EUR/MWh -- the only dimensionally coherent reading of the
  published "km/L" / "EUR/L" figures for a fuel-cell tractor;
* tank throughput rates (EUR per MWh moved through the terminal) assume
  buffers cycling ~22x/a for ammonia and ~5x/a for cryogenic liquid
  hydrogen on top of the per-MWh-capacity capex;
* the domestic hydrogen pipeline is a distribution-grade line at
  1.8 MEUR/km, pricier per km than the international transmission backbone
  figure of ~1.15 MEUR/km commonly quoted;
* the ammonia pipeline's annual energy throughput is set to half the
  gaseous-hydrogen line (liquid flow at low velocity), with its capacity
  factor interpreted as the consumer's own load profile (1.0 here);
* trucks run 1,500 h/a (single-shift duty), trains 8,000 h/a with
  20 wagons per train and the locomotive amortised over 30 years;
* international legs: EXA ships over 2,500 km and can feed a 5,000 km
  hydrogen pipeline; EXB ships over 13,000 km and has no pipeline, so it
  cannot export gaseous hydrogen.

Regenerate with:  python tools/make_desk_scale.py
"""


def main() -> None:
    scenario = build_scenario()
    OUT.mkdir(parents=True, exist_ok=True)
    save_scenario(scenario, OUT)
    (OUT / "README.txt").write_text(README, encoding="utf-8")
    print(f"wrote desk-scale scenario to {OUT}")


if __name__ == "__main__":
    main()
