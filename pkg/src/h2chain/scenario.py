"""Scenario schema: domain types, directory ingestion, validation, round-trip.

A scenario is a directory of UTF-8 text files (``scenario.conf`` plus CSVs,
see :data:`SCENARIO_FILES`) holding every techno-economic assumption of a
run.  Loading normalises units to EUR, MWh, MW, km, hours and years (asset
capex keeps its table-native denominator, e.g. EUR/kW, spelled out in the
field name), resolves all cross-references and returns an immutable
:class:`Scenario` that is safe to share across threads.
"""

from __future__ import annotations

import configparser
import hashlib
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources
from pathlib import Path

from .commodities import (
    Commodity,
    HOURS_PER_YEAR,
    Product,
    SiteKey,
    Technology,
    TransportMode,
)
from .transport import (
    LandsideEntry,
    LandsideParams,
    PipelineParams,
    PipelineScope,
    ShipParams,
)


class ScenarioError(Exception):
    """Base class for scenario ingestion failures."""


class MissingFile(ScenarioError):
    pass


class SchemaViolation(ScenarioError):
    pass


class CrossRefError(ScenarioError):
    pass


class UnitError(ScenarioError):
    pass


class StorageKind(str, Enum):
    BATTERY = "battery"
    SALT_CAVERN_GH2 = "salt_cavern_gh2"
    TANK_NH3 = "tank_nh3"
    TANK_LH2 = "tank_lh2"


CONVERSION_STEPS = ("haber_bosch", "liquefaction", "cracking", "regasification")
KNOWN_TECH_NAMES = tuple(t.value for t in Technology) + ("electrolysis",) + CONVERSION_STEPS

# Conversion step applied on the export side for each commodity.
EXPORT_CONVERSION: dict[Commodity, str | None] = {
    Commodity.AMMONIA: "haber_bosch",
    Commodity.LIQUID_HYDROGEN: "liquefaction",
    Commodity.GASEOUS_HYDROGEN: None,
}

TANK_KIND: dict[Commodity, StorageKind | None] = {
    Commodity.AMMONIA: StorageKind.TANK_NH3,
    Commodity.LIQUID_HYDROGEN: StorageKind.TANK_LH2,
    Commodity.GASEOUS_HYDROGEN: None,
}

SCENARIO_FILES = {
    "conf": "scenario.conf",
    "technologies": "technologies.csv",
    "storage": "storage.csv",
    "countries": "countries.csv",
    "potentials": "potentials.csv",
    "profiles_dir": "profiles",
    "transport_ship": "transport_ship.csv",
    "transport_pipeline": "transport_pipeline.csv",
    "transport_landside": "transport_landside.csv",
    "consumers": "consumers.csv",
    "demand": "demand.csv",
}

DISTANCE_KEYS = ("truck", "rail", "gh2_pipeline", "nh3_pipeline")


@dataclass(frozen=True)
class TechCost:
    """Capex/opex/efficiency record for one technology in one year.

    ``efficiency`` is always output per input; ``power_demand`` is
    electricity per unit of the process output (zero where not applicable).
    """

    capex_eur_per_kw: float
    opex_frac: float
    lifetime_y: float
    efficiency: float
    power_demand: float


@dataclass(frozen=True)
class StorageTech:
    kind: StorageKind
    capex_eur_per_mwh: float
    opex_frac: float
    efficiency: float
    lifetime_y: float
    e2p_hours: float              # battery energy-to-power ratio
    tank_eur_per_mwh: float       # throughput rate for tanks, zero otherwise


@dataclass(frozen=True)
class CountryFinance:
    country: str
    wacc: float
    capex_index: float


@dataclass(frozen=True)
class ResourceProfile:
    site: SiteKey
    potential_mw: float
    hours: tuple[tuple[float, float], ...]   # (capacity factor, weight)

    @property
    def weight_sum(self) -> float:
        return sum(w for _, w in self.hours)


@dataclass(frozen=True)
class DemandSpec:
    year: int
    annual_demand_mwh: float


@dataclass(frozen=True)
class ConsumerSite:
    name: str
    desired_product: Product
    demand_mwh: dict[int, float]
    distances: dict[str, float]   # keys from DISTANCE_KEYS; absent = unavailable

    def __post_init__(self) -> None:
        for key in self.distances:
            if key not in DISTANCE_KEYS:
                raise SchemaViolation(f"consumer {self.name!r}: unknown distance key {key!r}")


@dataclass(frozen=True)
class Route:
    """International transport geometry for one exporting country."""

    country: str
    ship_km: float | None = None
    pipeline_km: float | None = None


@dataclass(frozen=True)
class Constants:
    desalination_eur_per_mwh: float = 1.0
    avg_elec_price_eur_per_mwh: float = 53.0
    importer_wacc: float = 0.08
    curve_extent_twh: float | None = None
    electrolyzer_cap_uses_eta_conv: bool = False
    variable_motion_costs_per_mwh: bool = False


@dataclass(frozen=True)
class Scenario:
    years: tuple[int, ...]
    commodities: tuple[Commodity, ...]
    profiles: tuple[ResourceProfile, ...]
    tech_costs: dict[tuple[str, int], TechCost]
    storage: dict[tuple[StorageKind, int], StorageTech]
    finance: dict[str, CountryFinance]
    ship_params: dict[Commodity, ShipParams]
    pipeline_params: dict[PipelineScope, PipelineParams]
    landside_params: LandsideParams
    demand: dict[int, DemandSpec]
    consumers: tuple[ConsumerSite, ...]
    routes: dict[str, Route]
    constants: Constants
    fingerprint: str = field(default="", compare=False)

    def tech(self, name: str, year: int) -> TechCost:
        return self.tech_costs[(name, year)]

    def storage_tech(self, kind: StorageKind, year: int) -> StorageTech:
        return self.storage[(kind, year)]

    def tank_rate(self, commodity: Commodity, year: int) -> float:
        kind = TANK_KIND[commodity]
        if kind is None:
            return 0.0
        return self.storage[(kind, year)].tank_eur_per_mwh

    def conversions(self, year: int) -> dict[str, TechCost]:
        return {name: self.tech_costs[(name, year)] for name in CONVERSION_STEPS
                if (name, year) in self.tech_costs}


@dataclass(frozen=True)
class Finding:
    severity: str                 # "error" or "warning"
    kind: str                     # "schema" | "unit" | "crossref" | "consistency"
    message: str


def desk_scale_path() -> Path:
    """Directory of the bundled desk-scale scenario."""
    return Path(str(resources.files("h2chain") / "data" / "desk_scale"))


# ---------------------------------------------------------------------------
# parsing


def _read_rows(path: Path, required: tuple[str, ...]) -> list[dict[str, str]]:
    import csv

    if not path.is_file():
        raise MissingFile(str(path))
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        for col in required:
            if col not in header:
                raise SchemaViolation(f"{path.name}: missing column {col!r}")
        return [dict(row) for row in reader]


def _num(row: dict[str, str], col: str, path: str, line: int,
         optional: bool = False) -> float:
    raw = (row.get(col) or "").strip()
    if raw in ("", "-"):
        if optional:
            return math.nan
        raise SchemaViolation(f"{path} row {line}: column {col!r} is empty")
    try:
        return float(raw)
    except ValueError:
        raise SchemaViolation(
            f"{path} row {line}: column {col!r} is not a number: {raw!r}") from None


def _load_conf(root: Path) -> configparser.ConfigParser:
    conf_path = root / SCENARIO_FILES["conf"]
    if not conf_path.is_file():
        raise MissingFile(str(conf_path))
    parser = configparser.ConfigParser()
    parser.optionxform = str  # country codes are case sensitive
    parser.read(conf_path, encoding="utf-8")
    if not parser.has_section("scenario"):
        raise SchemaViolation(f"{conf_path.name}: missing [scenario] section")
    return parser


def _parse_commodity(raw: str, where: str) -> Commodity:
    try:
        return Commodity(raw.strip())
    except ValueError:
        raise SchemaViolation(f"{where}: unknown commodity {raw!r}") from None


def fingerprint_directory(root: Path) -> str:
    """SHA-256 over the scenario files, stable across machines."""
    digest = hashlib.sha256()
    paths = sorted(p for p in Path(root).rglob("*") if p.is_file())
    for path in paths:
        digest.update(str(path.relative_to(root)).replace("\\", "/").encode())
        digest.update(b"\0")
        digest.update(path.read_bytes())
        digest.update(b"\0")
    return digest.hexdigest()


def load_scenario(root: str | Path) -> Scenario:
    """Parse and validate a scenario directory.

    Raises :class:`MissingFile` / :class:`SchemaViolation` on structural
    problems and :class:`UnitError` / :class:`CrossRefError` when a parsed
    value violates a typed invariant.  Use :func:`parse_scenario` +
    :func:`validate_scenario` to collect findings without raising.
    """
    scenario = parse_scenario(root)
    findings = validate_scenario(scenario)
    for finding in findings:
        if finding.severity != "error":
            continue
        if finding.kind == "unit":
            raise UnitError(finding.message)
        if finding.kind == "crossref":
            raise CrossRefError(finding.message)
        raise SchemaViolation(finding.message)
    return scenario


def parse_scenario(root: str | Path) -> Scenario:
    """Structural parse of a scenario directory (no semantic validation)."""
    root = Path(root)
    if not root.is_dir():
        raise MissingFile(str(root))
    conf = _load_conf(root)

    try:
        years = tuple(int(tok) for tok in conf.get("scenario", "years").split())
    except (configparser.NoOptionError, ValueError):
        raise SchemaViolation("scenario.conf: [scenario] years must list integers") from None
    commodities = tuple(
        _parse_commodity(tok, "scenario.conf commodities")
        for tok in conf.get("scenario", "commodities", fallback=" ".join(c.value for c in Commodity)).split())

    constants = _parse_constants(conf)
    routes = _parse_routes(conf)
    tech_costs = _parse_technologies(root / SCENARIO_FILES["technologies"])
    storage = _parse_storage(root / SCENARIO_FILES["storage"])
    finance = _parse_countries(root / SCENARIO_FILES["countries"])
    profiles = _parse_profiles(root, conf)
    ships = _parse_ships(root / SCENARIO_FILES["transport_ship"])
    pipelines = _parse_pipelines(root / SCENARIO_FILES["transport_pipeline"])
    landside = _parse_landside(root / SCENARIO_FILES["transport_landside"], years)
    demand = _parse_demand(root / SCENARIO_FILES["demand"])
    consumers = _parse_consumers(root / SCENARIO_FILES["consumers"], years)

    return Scenario(
        years=years,
        commodities=commodities,
        profiles=profiles,
        tech_costs=tech_costs,
        storage=storage,
        finance=finance,
        ship_params=ships,
        pipeline_params=pipelines,
        landside_params=landside,
        demand=demand,
        consumers=consumers,
        routes=routes,
        constants=constants,
        fingerprint=fingerprint_directory(root),
    )


def _parse_constants(conf: configparser.ConfigParser) -> Constants:
    if not conf.has_section("constants"):
        return Constants()
    section = conf["constants"]
    extent = section.get("curve_extent_twh", "").strip()
    return Constants(
        desalination_eur_per_mwh=section.getfloat("desalination_eur_per_mwh", 1.0),
        avg_elec_price_eur_per_mwh=section.getfloat("avg_electricity_price_eur_per_mwh", 53.0),
        importer_wacc=section.getfloat("importer_wacc", 0.08),
        curve_extent_twh=float(extent) if extent else None,
        electrolyzer_cap_uses_eta_conv=section.getboolean("electrolyzer_cap_uses_eta_conv", False),
        variable_motion_costs_per_mwh=section.getboolean("variable_motion_costs_per_mwh", False),
    )


def _parse_routes(conf: configparser.ConfigParser) -> dict[str, Route]:
    routes: dict[str, Route] = {}
    if not conf.has_section("routes"):
        return routes
    for country, raw in conf["routes"].items():
        ship_km = pipeline_km = None
        for token in raw.split():
            if ":" not in token:
                raise SchemaViolation(
                    f"scenario.conf routes.{country}: expected mode:km tokens, got {token!r}")
            mode, _, dist = token.partition(":")
            try:
                value = float(dist)
            except ValueError:
                raise SchemaViolation(
                    f"scenario.conf routes.{country}: bad distance {dist!r}") from None
            if mode == "ship":
                ship_km = value
            elif mode == "pipeline":
                pipeline_km = value
            else:
                raise SchemaViolation(
                    f"scenario.conf routes.{country}: unknown leg {mode!r}")
        routes[country] = Route(country, ship_km, pipeline_km)
    return routes


def _parse_technologies(path: Path) -> dict[tuple[str, int], TechCost]:
    rows = _read_rows(path, ("technology", "year", "capex_eur_per_kw", "opex_frac",
                             "lifetime_y", "efficiency", "power_demand"))
    out: dict[tuple[str, int], TechCost] = {}
    for line, row in enumerate(rows, start=2):
        name = row["technology"].strip()
        if name not in KNOWN_TECH_NAMES:
            raise SchemaViolation(f"{path.name} row {line}: unknown technology {name!r}")
        year = int(_num(row, "year", path.name, line))
        out[(name, year)] = TechCost(
            capex_eur_per_kw=_num(row, "capex_eur_per_kw", path.name, line),
            opex_frac=_num(row, "opex_frac", path.name, line),
            lifetime_y=_num(row, "lifetime_y", path.name, line),
            efficiency=_num(row, "efficiency", path.name, line),
            power_demand=_num(row, "power_demand", path.name, line),
        )
    return out


def _parse_storage(path: Path) -> dict[tuple[StorageKind, int], StorageTech]:
    rows = _read_rows(path, ("kind", "year", "capex_eur_per_mwh", "opex_frac",
                             "efficiency", "lifetime_y", "e2p_hours", "tank_eur_per_mwh"))
    out: dict[tuple[StorageKind, int], StorageTech] = {}
    for line, row in enumerate(rows, start=2):
        try:
            kind = StorageKind(row["kind"].strip())
        except ValueError:
            raise SchemaViolation(f"{path.name} row {line}: unknown storage kind {row['kind']!r}") from None
        year = int(_num(row, "year", path.name, line))
        out[(kind, year)] = StorageTech(
            kind=kind,
            capex_eur_per_mwh=_num(row, "capex_eur_per_mwh", path.name, line),
            opex_frac=_num(row, "opex_frac", path.name, line),
            efficiency=_num(row, "efficiency", path.name, line),
            lifetime_y=_num(row, "lifetime_y", path.name, line),
            e2p_hours=_num(row, "e2p_hours", path.name, line),
            tank_eur_per_mwh=_num(row, "tank_eur_per_mwh", path.name, line),
        )
    return out


def _parse_countries(path: Path) -> dict[str, CountryFinance]:
    rows = _read_rows(path, ("country", "wacc", "capex_index"))
    out: dict[str, CountryFinance] = {}
    for line, row in enumerate(rows, start=2):
        country = row["country"].strip()
        if not country or "_" in country:
            raise SchemaViolation(
                f"{path.name} row {line}: country code must be non-empty without underscores")
        out[country] = CountryFinance(
            country=country,
            wacc=_num(row, "wacc", path.name, line),
            capex_index=_num(row, "capex_index", path.name, line),
        )
    return out


def _parse_profiles(root: Path, conf: configparser.ConfigParser) -> tuple[ResourceProfile, ...]:
    potentials_path = root / SCENARIO_FILES["potentials"]
    rows = _read_rows(potentials_path, ("country", "tech", "class", "band", "potential_mw"))
    profiles_dir = root / conf.get("files", "profiles_dir", fallback=SCENARIO_FILES["profiles_dir"])
    if not profiles_dir.is_dir():
        raise MissingFile(str(profiles_dir))
    profiles = []
    for line, row in enumerate(rows, start=2):
        try:
            tech = Technology(row["tech"].strip())
        except ValueError:
            raise SchemaViolation(
                f"{potentials_path.name} row {line}: unknown technology {row['tech']!r}") from None
        try:
            site = SiteKey(
                country=row["country"].strip(),
                technology=tech,
                resource_class=int(_num(row, "class", potentials_path.name, line)),
                shore_band=int(_num(row, "band", potentials_path.name, line)),
            )
        except ValueError as exc:
            raise SchemaViolation(f"{potentials_path.name} row {line}: {exc}") from None
        potential = _num(row, "potential_mw", potentials_path.name, line)
        profile_path = profiles_dir / f"{site.label()}.csv"
        hour_rows = _read_rows(profile_path, ("hour", "cf", "weight"))
        hours = tuple(
            (_num(h, "cf", profile_path.name, i), _num(h, "weight", profile_path.name, i))
            for i, h in enumerate(hour_rows, start=2))
        if not hours:
            raise SchemaViolation(f"{profile_path.name}: profile has no hours")
        profiles.append(ResourceProfile(site=site, potential_mw=potential, hours=hours))
    return tuple(sorted(profiles, key=lambda p: p.site))


def _parse_ships(path: Path) -> dict[Commodity, ShipParams]:
    rows = _read_rows(path, ("commodity", "capex_eur", "opex_frac", "lifetime_y",
                             "operating_eur_per_h", "available_h_per_y", "velocity_kmh",
                             "fuel_mwh_per_km", "fuel_eur_per_mwh", "payload_mwh",
                             "load_time_h", "flash_loss_per_load", "boiloff_per_h"))
    out: dict[Commodity, ShipParams] = {}
    for line, row in enumerate(rows, start=2):
        commodity = _parse_commodity(row["commodity"], f"{path.name} row {line}")
        try:
            out[commodity] = ShipParams(
                commodity=commodity,
                capex_eur=_num(row, "capex_eur", path.name, line),
                opex_frac=_num(row, "opex_frac", path.name, line),
                lifetime_y=_num(row, "lifetime_y", path.name, line),
                operating_eur_per_h=_num(row, "operating_eur_per_h", path.name, line),
                available_h_per_y=_num(row, "available_h_per_y", path.name, line),
                velocity_kmh=_num(row, "velocity_kmh", path.name, line),
                fuel_mwh_per_km=_num(row, "fuel_mwh_per_km", path.name, line),
                fuel_eur_per_mwh=_num(row, "fuel_eur_per_mwh", path.name, line),
                payload_mwh=_num(row, "payload_mwh", path.name, line),
                load_time_h=_num(row, "load_time_h", path.name, line),
                flash_loss_per_load=_num(row, "flash_loss_per_load", path.name, line),
                boiloff_per_h=_num(row, "boiloff_per_h", path.name, line),
            )
        except ValueError as exc:
            raise UnitError(f"{path.name} row {line}: {exc}") from None
    return out


def _parse_pipelines(path: Path) -> dict[PipelineScope, PipelineParams]:
    rows = _read_rows(path, ("scope", "capex_eur_per_km", "opex_frac", "lifetime_y",
                             "capacity_factor", "throughput_mwh_per_y",
                             "elec_mwh_per_mwh_km", "elec_price_eur_per_mwh",
                             "loss_per_100km"))
    out: dict[PipelineScope, PipelineParams] = {}
    for line, row in enumerate(rows, start=2):
        try:
            scope = PipelineScope(row["scope"].strip())
        except ValueError:
            raise SchemaViolation(f"{path.name} row {line}: unknown scope {row['scope']!r}") from None
        out[scope] = PipelineParams(
            scope=scope,
            capex_eur_per_km=_num(row, "capex_eur_per_km", path.name, line),
            opex_frac=_num(row, "opex_frac", path.name, line),
            lifetime_y=_num(row, "lifetime_y", path.name, line),
            capacity_factor=_num(row, "capacity_factor", path.name, line),
            throughput_mwh_per_y=_num(row, "throughput_mwh_per_y", path.name, line),
            elec_mwh_per_mwh_km=_num(row, "elec_mwh_per_mwh_km", path.name, line),
            elec_price_eur_per_mwh=_num(row, "elec_price_eur_per_mwh", path.name, line),
            loss_per_100km=_num(row, "loss_per_100km", path.name, line),
        )
    return out


def _parse_landside(path: Path, years: tuple[int, ...]) -> LandsideParams:
    required = ("mode", "commodity", "trailer_capex_eur", "motive_capex_eur",
                "motive_lifetime_y", "payload_mwh", "trailer_lifetime_y", "speed_kmh",
                "load_time_h", "driver_eur_per_h", "fuel_mwh_per_km",
                "freight_eur_per_km", "through_loss_frac", "through_boiloff_frac",
                "boiloff_frac_per_day", "operating_h_per_y", "wagons_per_train")
    rows = _read_rows(path, required)
    params = LandsideParams()
    for line, row in enumerate(rows, start=2):
        try:
            mode = TransportMode(row["mode"].strip())
        except ValueError:
            raise SchemaViolation(f"{path.name} row {line}: unknown mode {row['mode']!r}") from None
        commodity = _parse_commodity(row["commodity"], f"{path.name} row {line}")
        fuel_costs = {}
        for year in years:
            col = f"fuel_cost_{year}_eur_per_mwh"
            if col not in row:
                raise SchemaViolation(f"{path.name}: missing column {col!r}")
            fuel_costs[year] = _num(row, col, path.name, line)
        wagons = _num(row, "wagons_per_train", path.name, line, optional=True)
        params.entries[(mode, commodity)] = LandsideEntry(
            trailer_capex_eur=_num(row, "trailer_capex_eur", path.name, line),
            motive_capex_eur=_num(row, "motive_capex_eur", path.name, line),
            motive_lifetime_y=_num(row, "motive_lifetime_y", path.name, line),
            payload_mwh=_num(row, "payload_mwh", path.name, line),
            trailer_lifetime_y=_num(row, "trailer_lifetime_y", path.name, line),
            speed_kmh=_num(row, "speed_kmh", path.name, line),
            load_time_h=_num(row, "load_time_h", path.name, line),
            driver_eur_per_h=_num(row, "driver_eur_per_h", path.name, line),
            fuel_mwh_per_km=_num(row, "fuel_mwh_per_km", path.name, line),
            fuel_eur_per_mwh=fuel_costs,
            freight_eur_per_km=_num(row, "freight_eur_per_km", path.name, line),
            through_loss=_num(row, "through_loss_frac", path.name, line),
            through_boiloff=_num(row, "through_boiloff_frac", path.name, line),
            boiloff_per_day=_num(row, "boiloff_frac_per_day", path.name, line),
            operating_h_per_y=_num(row, "operating_h_per_y", path.name, line),
            wagons_per_train=1 if math.isnan(wagons) else int(wagons),
        )
    return params


def _parse_demand(path: Path) -> dict[int, DemandSpec]:
    rows = _read_rows(path, ("year", "demand_twh"))
    out: dict[int, DemandSpec] = {}
    for line, row in enumerate(rows, start=2):
        year = int(_num(row, "year", path.name, line))
        out[year] = DemandSpec(year=year,
                               annual_demand_mwh=_num(row, "demand_twh", path.name, line) * 1e6)
    return out


def _parse_consumers(path: Path, years: tuple[int, ...]) -> tuple[ConsumerSite, ...]:
    required = ("name", "product", "dist_truck_km", "dist_rail_km",
                "dist_gh2pipe_km", "dist_nh3pipe_km")
    rows = _read_rows(path, required)
    consumers = []
    for line, row in enumerate(rows, start=2):
        try:
            product = Product(row["product"].strip())
        except ValueError:
            raise SchemaViolation(f"{path.name} row {line}: unknown product {row['product']!r}") from None
        demand = {}
        for year in years:
            col = f"demand_{year}_gwh"
            if col not in row:
                raise SchemaViolation(f"{path.name}: missing column {col!r}")
            demand[year] = _num(row, col, path.name, line) * 1e3
        distances = {}
        for key, col in zip(DISTANCE_KEYS, ("dist_truck_km", "dist_rail_km",
                                            "dist_gh2pipe_km", "dist_nh3pipe_km")):
            value = _num(row, col, path.name, line, optional=True)
            if not math.isnan(value):
                distances[key] = value
        consumers.append(ConsumerSite(name=row["name"].strip(), desired_product=product,
                                      demand_mwh=demand, distances=distances))
    return tuple(consumers)


# ---------------------------------------------------------------------------
# validation


def validate_scenario(scenario: Scenario) -> list[Finding]:
    """All invariant checks as a deterministic list of findings.

    An empty list means the scenario is fully valid.  The traversal order is
    fixed, so repeated runs produce identical output.
    """
    findings: list[Finding] = []

    def err(kind: str, msg: str) -> None:
        findings.append(Finding("error", kind, msg))

    def warn(kind: str, msg: str) -> None:
        findings.append(Finding("warning", kind, msg))

    if not scenario.years:
        err("schema", "scenario declares no years")
    if not scenario.commodities:
        err("schema", "scenario declares no commodities")

    for (name, year), tech in sorted(scenario.tech_costs.items()):
        where = f"technology {name}/{year}"
        if tech.capex_eur_per_kw < 0:
            err("unit", f"{where}: capex must be non-negative")
        if not 0.0 <= tech.opex_frac <= 1.0:
            err("unit", f"{where}: opex fraction outside [0, 1]")
        if tech.lifetime_y < 1:
            err("unit", f"{where}: lifetime must be at least one year")
        if not 0.0 < tech.efficiency <= 1.01:
            err("unit", f"{where}: efficiency outside (0, 1.01]")
        if tech.power_demand < 0:
            err("unit", f"{where}: power demand must be non-negative")

    for (kind, year), st in sorted(scenario.storage.items()):
        where = f"storage {kind.value}/{year}"
        if st.capex_eur_per_mwh < 0 or st.tank_eur_per_mwh < 0:
            err("unit", f"{where}: costs must be non-negative")
        if not 0.0 <= st.opex_frac <= 1.0:
            err("unit", f"{where}: opex fraction outside [0, 1]")
        if st.lifetime_y < 1:
            err("unit", f"{where}: lifetime must be at least one year")
        if kind is StorageKind.BATTERY:
            if not 0.0 < st.efficiency <= 1.0:
                err("unit", f"{where}: battery efficiency outside (0, 1]")
            elif st.efficiency != 0.98:
                warn("consistency", f"{where}: battery efficiency {st.efficiency} deviates "
                     "from the reference value 0.98")
            if st.e2p_hours <= 0:
                err("unit", f"{where}: battery energy-to-power ratio must be positive")
            elif st.e2p_hours != 6:
                warn("consistency", f"{where}: energy-to-power ratio {st.e2p_hours} deviates "
                     "from the reference value 6")
        elif st.efficiency != 1.0:
            err("unit", f"{where}: non-battery storage efficiency must be 1")

    for country, fin in sorted(scenario.finance.items()):
        if not 0.0 <= fin.wacc < 1.0:
            err("unit", f"country {country}: wacc outside [0, 1)")
        if fin.capex_index <= 0:
            err("unit", f"country {country}: capex index must be positive")

    for profile in scenario.profiles:
        label = profile.site.label()
        if profile.potential_mw < 0:
            err("unit", f"profile {label}: potential must be non-negative")
        bad_cf = [cf for cf, _ in profile.hours if not 0.0 <= cf <= 1.0]
        if bad_cf:
            err("unit", f"profile {label}: capacity factor outside [0, 1]: {bad_cf[0]}")
        if any(w < 0 for _, w in profile.hours):
            err("unit", f"profile {label}: negative hour weight")
        if abs(profile.weight_sum - HOURS_PER_YEAR) > 1e-6:
            err("unit", f"profile {label}: hour weights sum to {profile.weight_sum}, "
                f"expected {HOURS_PER_YEAR}")
        if profile.site.country not in scenario.finance:
            err("crossref", f"profile {label}: country {profile.site.country} has no "
                "finance entry (wacc, capex index)")

    used_techs = sorted({p.site.technology.value for p in scenario.profiles})
    needed = list(used_techs) + ["electrolysis"]
    for commodity in scenario.commodities:
        step = EXPORT_CONVERSION[commodity]
        if step is not None:
            needed.append(step)
    for name in dict.fromkeys(needed):
        for year in scenario.years:
            if (name, year) not in scenario.tech_costs:
                err("crossref", f"no technology cost entry for {name}/{year}")

    for commodity in scenario.commodities:
        kind = TANK_KIND[commodity]
        if kind is None:
            continue
        for year in scenario.years:
            if (kind, year) not in scenario.storage:
                err("crossref", f"no storage entry {kind.value}/{year} required by "
                    f"{commodity.value}")
    if StorageKind.BATTERY not in {k for k, _ in scenario.storage}:
        err("crossref", "no battery storage entry")
    else:
        for year in scenario.years:
            if (StorageKind.BATTERY, year) not in scenario.storage:
                err("crossref", f"no battery storage entry for year {year}")

    ship_commodities = [c for c in scenario.commodities if c in
                        (Commodity.AMMONIA, Commodity.LIQUID_HYDROGEN)]
    for commodity in ship_commodities:
        if commodity not in scenario.ship_params:
            err("crossref", f"no ship parameters for {commodity.value}")
    for scope in PipelineScope:
        if scope not in scenario.pipeline_params:
            err("crossref", f"no pipeline parameters for scope {scope.value}")

    countries = sorted({p.site.country for p in scenario.profiles})
    for country in countries:
        route = scenario.routes.get(country)
        if route is None:
            err("crossref", f"country {country}: no international route in scenario.conf")
            continue
        # a country may be ship-only or pipeline-only; having neither leg
        # makes all its sites unusable
        if route.ship_km is None and route.pipeline_km is None:
            err("crossref", f"country {country}: route has neither ship nor pipeline leg")

    for year in scenario.years:
        spec = scenario.demand.get(year)
        if spec is None:
            err("crossref", f"no demand entry for year {year}")
        elif spec.annual_demand_mwh <= 0:
            err("unit", f"demand for {year} must be positive")

    for consumer in scenario.consumers:
        for year, value in sorted(consumer.demand_mwh.items()):
            if value < 0:
                err("unit", f"consumer {consumer.name}: negative demand in {year}")
        for key, value in sorted(consumer.distances.items()):
            if value < 0:
                err("unit", f"consumer {consumer.name}: negative distance for {key}")
        if not consumer.distances:
            err("crossref", f"consumer {consumer.name}: no available distribution mode "
                "(all mode distances missing)")

    constants = scenario.constants
    if constants.desalination_eur_per_mwh < 0:
        err("unit", "desalination cost must be non-negative")
    if constants.avg_elec_price_eur_per_mwh < 0:
        err("unit", "average electricity price must be non-negative")
    if not 0.0 <= constants.importer_wacc < 1.0:
        err("unit", "importer wacc outside [0, 1)")
    return findings


# ---------------------------------------------------------------------------
# canonical serialization


def save_scenario(scenario: Scenario, root: str | Path) -> None:
    """Write a scenario back to a directory in the canonical file layout.

    The output parses back into an identical :class:`Scenario`, which is the
    round-trip contract the tests check.
    """
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    (root / SCENARIO_FILES["profiles_dir"]).mkdir(exist_ok=True)

    lines = ["[scenario]",
             "years = " + " ".join(str(y) for y in scenario.years),
             "commodities = " + " ".join(c.value for c in scenario.commodities),
             "",
             "[constants]",
             f"desalination_eur_per_mwh = {scenario.constants.desalination_eur_per_mwh!r}",
             f"avg_electricity_price_eur_per_mwh = {scenario.constants.avg_elec_price_eur_per_mwh!r}",
             f"importer_wacc = {scenario.constants.importer_wacc!r}"]
    if scenario.constants.curve_extent_twh is not None:
        lines.append(f"curve_extent_twh = {scenario.constants.curve_extent_twh!r}")
    lines.append(f"electrolyzer_cap_uses_eta_conv = {str(scenario.constants.electrolyzer_cap_uses_eta_conv).lower()}")
    lines.append(f"variable_motion_costs_per_mwh = {str(scenario.constants.variable_motion_costs_per_mwh).lower()}")
    lines += ["", "[routes]"]
    for country, route in sorted(scenario.routes.items()):
        legs = []
        if route.ship_km is not None:
            legs.append(f"ship:{route.ship_km!r}")
        if route.pipeline_km is not None:
            legs.append(f"pipeline:{route.pipeline_km!r}")
        lines.append(f"{country} = {' '.join(legs)}")
    (root / SCENARIO_FILES["conf"]).write_text("\n".join(lines) + "\n", encoding="utf-8")

    def write_csv(name: str, header: list[str], rows: list[list]) -> None:
        body = [",".join(header)]
        body += [",".join(_cell(v) for v in row) for row in rows]
        (root / name).write_text("\n".join(body) + "\n", encoding="utf-8")

    write_csv(SCENARIO_FILES["technologies"],
              ["technology", "year", "capex_eur_per_kw", "opex_frac", "lifetime_y",
               "efficiency", "power_demand"],
              [[name, year, t.capex_eur_per_kw, t.opex_frac, t.lifetime_y,
                t.efficiency, t.power_demand]
               for (name, year), t in sorted(scenario.tech_costs.items())])
    write_csv(SCENARIO_FILES["storage"],
              ["kind", "year", "capex_eur_per_mwh", "opex_frac", "efficiency",
               "lifetime_y", "e2p_hours", "tank_eur_per_mwh"],
              [[kind.value, year, s.capex_eur_per_mwh, s.opex_frac, s.efficiency,
                s.lifetime_y, s.e2p_hours, s.tank_eur_per_mwh]
               for (kind, year), s in sorted(scenario.storage.items())])
    write_csv(SCENARIO_FILES["countries"],
              ["country", "wacc", "capex_index"],
              [[c, f.wacc, f.capex_index] for c, f in sorted(scenario.finance.items())])
    write_csv(SCENARIO_FILES["potentials"],
              ["country", "tech", "class", "band", "potential_mw"],
              [[p.site.country, p.site.technology.value, p.site.resource_class,
                p.site.shore_band, p.potential_mw] for p in scenario.profiles])
    for profile in scenario.profiles:
        rows = [[i + 1, cf, w] for i, (cf, w) in enumerate(profile.hours)]
        body = ["hour,cf,weight"] + [",".join(_cell(v) for v in row) for row in rows]
        path = root / SCENARIO_FILES["profiles_dir"] / f"{profile.site.label()}.csv"
        path.write_text("\n".join(body) + "\n", encoding="utf-8")
    write_csv(SCENARIO_FILES["transport_ship"],
              ["commodity", "capex_eur", "opex_frac", "lifetime_y", "operating_eur_per_h",
               "available_h_per_y", "velocity_kmh", "fuel_mwh_per_km", "fuel_eur_per_mwh",
               "payload_mwh", "load_time_h", "flash_loss_per_load", "boiloff_per_h"],
              [[c.value, s.capex_eur, s.opex_frac, s.lifetime_y, s.operating_eur_per_h,
                s.available_h_per_y, s.velocity_kmh, s.fuel_mwh_per_km, s.fuel_eur_per_mwh,
                s.payload_mwh, s.load_time_h, s.flash_loss_per_load, s.boiloff_per_h]
               for c, s in sorted(scenario.ship_params.items())])
    write_csv(SCENARIO_FILES["transport_pipeline"],
              ["scope", "capex_eur_per_km", "opex_frac", "lifetime_y", "capacity_factor",
               "throughput_mwh_per_y", "elec_mwh_per_mwh_km", "elec_price_eur_per_mwh",
               "loss_per_100km"],
              [[s.value, p.capex_eur_per_km, p.opex_frac, p.lifetime_y, p.capacity_factor,
                p.throughput_mwh_per_y, p.elec_mwh_per_mwh_km, p.elec_price_eur_per_mwh,
                p.loss_per_100km]
               for s, p in sorted(scenario.pipeline_params.items())])
    fuel_cols = [f"fuel_cost_{year}_eur_per_mwh" for year in scenario.years]
    write_csv(SCENARIO_FILES["transport_landside"],
              ["mode", "commodity", "trailer_capex_eur", "motive_capex_eur",
               "motive_lifetime_y", "payload_mwh", "trailer_lifetime_y", "speed_kmh",
               "load_time_h", "driver_eur_per_h", "fuel_mwh_per_km", *fuel_cols,
               "freight_eur_per_km", "through_loss_frac", "through_boiloff_frac",
               "boiloff_frac_per_day", "operating_h_per_y", "wagons_per_train"],
              [[mode.value, commodity.value, e.trailer_capex_eur, e.motive_capex_eur,
                e.motive_lifetime_y, e.payload_mwh, e.trailer_lifetime_y, e.speed_kmh,
                e.load_time_h, e.driver_eur_per_h, e.fuel_mwh_per_km,
                *[e.fuel_eur_per_mwh[y] for y in scenario.years], e.freight_eur_per_km,
                e.through_loss, e.through_boiloff, e.boiloff_per_day, e.operating_h_per_y,
                e.wagons_per_train]
               for (mode, commodity), e in sorted(scenario.landside_params.entries.items())])
    write_csv(SCENARIO_FILES["demand"],
              ["year", "demand_twh"],
              [[year, spec.annual_demand_mwh / 1e6]
               for year, spec in sorted(scenario.demand.items())])
    demand_cols = [f"demand_{year}_gwh" for year in scenario.years]
    write_csv(SCENARIO_FILES["consumers"],
              ["name", "product", *demand_cols, "dist_truck_km", "dist_rail_km",
               "dist_gh2pipe_km", "dist_nh3pipe_km"],
              [[c.name, c.desired_product.value,
                *[c.demand_mwh[y] / 1e3 for y in scenario.years],
                *[c.distances.get(k, "") for k in DISTANCE_KEYS]]
               for c in scenario.consumers])


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def with_fingerprint(scenario: Scenario, root: str | Path) -> Scenario:
    return replace(scenario, fingerprint=fingerprint_directory(Path(root)))
