"""Border import prices from per-site plant sizing and merit-order dispatch.

Every production site (country, technology, resource class, shore band) gets
a plant-sizing LP normalised to 1 MW of renewable capacity.  All constraints
are homogeneous of degree one, so the resulting unit cost is scale free and
the border price at any demand level equals the dual of the demand row of the
single large LP over all sites.  The decomposition (size each site, sort by
unit cost, read the marginal step) is the production path; the monolithic LP
is kept as a validation oracle and for dual extraction on small instances.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import lp
from .commodities import Commodity, SiteKey
from .scenario import EXPORT_CONVERSION, ResourceProfile, Scenario, StorageKind
from .transport import PipelineScope, annualize, pipeline_cost_per_mwh, ship_unit_cost

# Tiny cost on battery charge/discharge flows.  It breaks the degeneracy
# between curtailing surplus renewables and burning them in a simultaneous
# charge/discharge cycle, so solutions never show both directions active in
# the same hour.  Excluded from all reported costs.
BATTERY_FLOW_EPS = 1e-6

COMPONENT_KEYS = (
    "electricity",
    "battery",
    "electrolysis",
    "conversion",
    "desalination",
    "inland_transport",
    "international_transport",
    "storage_tank",
)


class DegenerateSite(Exception):
    """Site produces nothing (all-zero capacity factors)."""


class DemandExceedsSupply(Exception):
    """Requested demand is beyond the total potential of the supply curve."""


def combined_conversion_efficiency(eta_el: float, eta_conv: float,
                                   q_conv: float) -> float:
    """Conversion efficiency net of the conversion process's own power draw.

    Derived so that commodity output per MWh of total plant electricity is
    ``eta_el * combined`` when the conversion step's electricity demand
    (``q_conv`` MWh_el per MWh of commodity) is supplied by the same plant:
    with E the electricity reaching the electrolyser and C = E*eta_el*eta_conv,
    total draw is E + q_conv*C, hence C/total = eta_el * eta_conv /
    (1 + q_conv*eta_conv*eta_el).
    """
    if eta_el <= 0 or eta_conv <= 0:
        raise ValueError("efficiencies must be positive")
    return eta_conv / (1.0 + q_conv * eta_conv * eta_el)


@dataclass(frozen=True)
class SiteCosts:
    """Annualised cost coefficients for one (site, commodity, year)."""

    res_eur_per_mw_y: float
    battery_eur_per_mw_y: float
    electrolyzer_eur_per_mw_y: float
    conversion_eur_per_mw_y: float
    eta_el: float
    eta_conv: float
    q_conv: float
    eta_conv_new: float
    eta_batt: float
    e2p_hours: float
    desal_eur_per_mwh: float
    inland_eur_per_mwh: float
    international_eur_per_mwh: float
    tank_eur_per_mwh: float
    electrolyzer_cap_uses_eta_conv: bool = False

    @property
    def variable_rate(self) -> float:
        """EUR per MWh of commodity: desalination and inland transport are
        billed on the hydrogen-equivalent quantity, the international leg and
        tank storage on the commodity itself."""
        return ((self.desal_eur_per_mwh + self.inland_eur_per_mwh) / self.eta_conv_new
                + self.international_eur_per_mwh + self.tank_eur_per_mwh)


def site_costs(scenario: Scenario, site: SiteKey, commodity: Commodity,
               year: int) -> SiteCosts | None:
    """Cost bundle for one site, or None when the commodity cannot leave the
    country (no matching international transport leg)."""
    route = scenario.routes.get(site.country)
    if route is None:
        return None
    fin = scenario.finance[site.country]
    importer_wacc = scenario.constants.importer_wacc

    if commodity is Commodity.GASEOUS_HYDROGEN:
        if route.pipeline_km is None:
            return None
        international = pipeline_cost_per_mwh(
            scenario.pipeline_params[PipelineScope.INTERNATIONAL_GH2],
            route.pipeline_km, importer_wacc)
    else:
        if route.ship_km is None:
            return None
        international = ship_unit_cost(scenario.ship_params[commodity],
                                       route.ship_km, importer_wacc)

    gen = scenario.tech(site.technology.value, year)
    res_cost = annualize(gen.capex_eur_per_kw * 1000.0 * fin.capex_index,
                         gen.opex_frac, gen.lifetime_y, fin.wacc)

    batt = scenario.storage_tech(StorageKind.BATTERY, year)
    battery_cost = annualize(batt.capex_eur_per_mwh * batt.e2p_hours,
                             batt.opex_frac, batt.lifetime_y, fin.wacc)

    el = scenario.tech("electrolysis", year)
    el_cost = annualize(el.capex_eur_per_kw * 1000.0, el.opex_frac,
                        el.lifetime_y, fin.wacc)

    step = EXPORT_CONVERSION[commodity]
    if step is None:
        conv_cost, eta_conv, q_conv = 0.0, 1.0, 0.0
    else:
        conv = scenario.tech(step, year)
        conv_cost = annualize(conv.capex_eur_per_kw * 1000.0, conv.opex_frac,
                              conv.lifetime_y, fin.wacc)
        eta_conv, q_conv = conv.efficiency, conv.power_demand

    inland = pipeline_cost_per_mwh(
        scenario.pipeline_params[PipelineScope.DOMESTIC_GH2],
        site.inland_km, fin.wacc)

    return SiteCosts(
        res_eur_per_mw_y=res_cost,
        battery_eur_per_mw_y=battery_cost,
        electrolyzer_eur_per_mw_y=el_cost,
        conversion_eur_per_mw_y=conv_cost,
        eta_el=el.efficiency,
        eta_conv=eta_conv,
        q_conv=q_conv,
        eta_conv_new=combined_conversion_efficiency(el.efficiency, eta_conv, q_conv),
        eta_batt=batt.efficiency,
        e2p_hours=batt.e2p_hours,
        desal_eur_per_mwh=scenario.constants.desalination_eur_per_mwh,
        inland_eur_per_mwh=inland,
        international_eur_per_mwh=international,
        tank_eur_per_mwh=scenario.tank_rate(commodity, year),
        electrolyzer_cap_uses_eta_conv=scenario.constants.electrolyzer_cap_uses_eta_conv,
    )


@dataclass
class _Block:
    """Column/row indices of one site's variables inside an LpProblem."""

    cap_res: int
    cap_batt: int
    cap_el: int
    cap_conv: int
    q_res: list[int]
    q_in: list[int]
    q_out: list[int]
    soc: list[int]
    q_conv: list[int]
    weights: np.ndarray


def _add_site_block(problem: lp.LpProblem, profile: ResourceProfile,
                    costs: SiteCosts, tag: str, bound_potential: bool,
                    allow_battery: bool) -> _Block:
    """Plant-sizing variables and constraints for one site.

    All constraints are homogeneous of degree one in the variables, so the
    block can serve both the scale-free per-site problem (renewable capacity
    unbounded, output normalised elsewhere) and the monolithic problem
    (renewable capacity bounded by the site potential)."""
    cf = np.array([c for c, _ in profile.hours])
    weights = np.array([w for _, w in profile.hours])
    hours = len(cf)

    res_upper = profile.potential_mw if bound_potential else np.inf
    cap_res = problem.add_var(f"{tag}.cap_res", costs.res_eur_per_mw_y, 0.0, res_upper)
    batt_upper = np.inf if allow_battery else 0.0
    cap_batt = problem.add_var(f"{tag}.cap_batt", costs.battery_eur_per_mw_y, 0.0, batt_upper)
    cap_el = problem.add_var(f"{tag}.cap_el", costs.electrolyzer_eur_per_mw_y)
    cap_conv = problem.add_var(f"{tag}.cap_conv", costs.conversion_eur_per_mw_y)

    rate = costs.variable_rate
    k = costs.eta_el * costs.eta_conv_new
    el_den = costs.eta_conv if costs.electrolyzer_cap_uses_eta_conv else costs.eta_conv_new

    q_res, q_in, q_out, soc, q_conv = [], [], [], [], []
    for h in range(hours):
        q_res.append(problem.add_var(f"{tag}.q_res[{h}]"))
        q_in.append(problem.add_var(f"{tag}.q_in[{h}]", BATTERY_FLOW_EPS * weights[h]))
        q_out.append(problem.add_var(f"{tag}.q_out[{h}]", BATTERY_FLOW_EPS * weights[h]))
        # state of charge starts the horizon empty
        soc.append(problem.add_var(f"{tag}.soc[{h}]", 0.0, 0.0, 0.0 if h == 0 else np.inf))
        q_conv.append(problem.add_var(f"{tag}.q_conv[{h}]", rate * weights[h]))

    for h in range(hours):
        # renewable output limited by installed capacity times its profile
        problem.add_row(f"{tag}.res_avail[{h}]",
                        [(q_res[h], 1.0), (cap_res, -cf[h])], lp.LE, 0.0)
        # hourly balance: commodity output tracks net electricity through the
        # electrolysis and conversion chain
        problem.add_row(f"{tag}.balance[{h}]",
                        [(q_conv[h], 1.0), (q_res[h], -k), (q_in[h], k), (q_out[h], -k)],
                        lp.EQ, 0.0)
        problem.add_row(f"{tag}.el_cap[{h}]",
                        [(q_conv[h], 1.0 / el_den), (cap_el, -1.0)], lp.LE, 0.0)
        problem.add_row(f"{tag}.conv_cap[{h}]",
                        [(q_conv[h], 1.0 / costs.eta_conv), (cap_conv, -1.0)], lp.LE, 0.0)
        problem.add_row(f"{tag}.charge[{h}]",
                        [(q_in[h], 1.0), (cap_batt, -1.0)], lp.LE, 0.0)
        problem.add_row(f"{tag}.discharge[{h}]",
                        [(q_out[h], 1.0), (cap_batt, -1.0)], lp.LE, 0.0)
        # battery energy content limited by the energy-to-power ratio
        problem.add_row(f"{tag}.soc_cap[{h}]",
                        [(soc[h], 1.0), (cap_batt, -costs.e2p_hours)], lp.LE, 0.0)
        if h > 0:
            problem.add_row(f"{tag}.soc_rec[{h}]",
                            [(soc[h], 1.0), (soc[h - 1], -1.0),
                             (q_in[h], -costs.eta_batt), (q_out[h], 1.0 / costs.eta_batt)],
                            lp.EQ, 0.0)

    return _Block(cap_res, cap_batt, cap_el, cap_conv, q_res, q_in, q_out, soc,
                  q_conv, weights)


def build_site_lp(profile: ResourceProfile, costs: SiteCosts,
                  allow_battery: bool = True) -> tuple[lp.LpProblem, _Block]:
    """Scale-free plant-sizing LP, normalised to one MWh of annual output.

    Minimising total annual cost subject to one unit of weighted annual
    production makes the optimal objective value the site's unit cost in
    EUR/MWh directly (every other constraint is homogeneous of degree one,
    so the cost/output ratio is independent of plant scale).  The last row
    is the output normalisation.
    """
    problem = lp.LpProblem()
    block = _add_site_block(problem, profile, costs, "site", bound_potential=False,
                            allow_battery=allow_battery)
    problem.add_row("annual_output",
                    [(var, float(w)) for var, w in zip(block.q_conv, block.weights)],
                    lp.EQ, 1.0)
    return problem, block


@dataclass(eq=False)
class HourlyOperation:
    """Retained per-hour primal trajectories of a sized plant."""

    cf: np.ndarray
    weight: np.ndarray
    q_res: np.ndarray
    q_batt_in: np.ndarray
    q_batt_out: np.ndarray
    soc: np.ndarray
    q_conv: np.ndarray


@dataclass(eq=False)
class PlantDesign:
    """Optimised plant for one site: capacities per MW of renewables, the
    resulting unit cost at the border and its component breakdown."""

    site: SiteKey
    commodity: Commodity
    year: int
    capacities: dict[str, float]
    annual_output: float          # MWh of commodity per MW renewables and year
    unit_cost: float              # EUR/MWh at the border
    components: dict[str, float]
    max_annual_output: float      # MWh/year at full site potential
    hourly: HourlyOperation

    def eps_free_objective(self) -> float:
        """LP objective per MW renewables without the battery tie-break term."""
        return self.unit_cost * self.annual_output


def size_plant(profile: ResourceProfile, costs: SiteCosts, commodity: Commodity,
               year: int, allow_battery: bool = True) -> PlantDesign:
    """Solve the per-site sizing LP and derive the border unit cost.

    The LP is normalised to 1 MWh of annual output; results are rescaled to
    the conventional per-MW-of-renewables form.  Sites whose profile cannot
    produce anything raise :class:`DegenerateSite`.
    """
    problem, block = build_site_lp(profile, costs, allow_battery)
    solution = lp.solve(problem)
    if solution.status is lp.LpStatus.INFEASIBLE:
        raise DegenerateSite(f"site {profile.site.label()} has zero annual output")
    if solution.status is not lp.LpStatus.OPTIMAL:
        raise lp.NumericalFailure(
            f"site LP for {profile.site.label()} ended {solution.status.value}")

    x = np.maximum(solution.primal, 0.0)   # clip solver roundoff below zero
    weights = block.weights
    cap_res = float(x[block.cap_res])
    if cap_res <= 0:
        raise DegenerateSite(f"site {profile.site.label()} needs no renewable capacity")
    # per MW of renewables: the normalised problem produced 1 MWh/a total
    output = 1.0 / cap_res
    scale = output

    capacities = {
        "res": 1.0,
        "battery": float(x[block.cap_batt]) * scale,
        "electrolyzer": float(x[block.cap_el]) * scale,
        "conversion": float(x[block.cap_conv]) * scale,
    }
    # components are EUR per MWh of commodity (the LP's output is one MWh)
    components = {
        "electricity": costs.res_eur_per_mw_y * cap_res,
        "battery": costs.battery_eur_per_mw_y * float(x[block.cap_batt]),
        "electrolysis": costs.electrolyzer_eur_per_mw_y * float(x[block.cap_el]),
        "conversion": costs.conversion_eur_per_mw_y * float(x[block.cap_conv]),
        "desalination": costs.desal_eur_per_mwh / costs.eta_conv_new,
        "inland_transport": costs.inland_eur_per_mwh / costs.eta_conv_new,
        "international_transport": costs.international_eur_per_mwh,
        "storage_tank": costs.tank_eur_per_mwh,
    }
    hourly = HourlyOperation(
        cf=np.array([c for c, _ in profile.hours]),
        weight=weights,
        q_res=x[block.q_res] * scale,
        q_batt_in=x[block.q_in] * scale,
        q_batt_out=x[block.q_out] * scale,
        soc=x[block.soc] * scale,
        q_conv=x[block.q_conv] * scale,
    )
    return PlantDesign(
        site=profile.site,
        commodity=commodity,
        year=year,
        capacities=capacities,
        annual_output=output,
        unit_cost=sum(components.values()),
        components=components,
        max_annual_output=output * profile.potential_mw,
        hourly=hourly,
    )


def size_all(scenario: Scenario, commodity: Commodity, year: int,
             jobs: int = 1) -> list[PlantDesign]:
    """Size every site that can export the commodity; zero-output sites and
    sites without a matching international leg are skipped."""
    tasks = []
    for profile in scenario.profiles:
        costs = site_costs(scenario, profile.site, commodity, year)
        if costs is not None:
            tasks.append((profile, costs))

    def run(task):
        profile, costs = task
        try:
            return size_plant(profile, costs, commodity, year)
        except DegenerateSite:
            return None

    if jobs > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, tasks))
    else:
        results = [run(t) for t in tasks]
    return [d for d in results if d is not None]


@dataclass(frozen=True)
class SupplyStep:
    site: SiteKey
    quantity_mwh: float
    unit_cost: float
    components: tuple[tuple[str, float], ...]

    def component_dict(self) -> dict[str, float]:
        return dict(self.components)


@dataclass(frozen=True)
class SupplyCurve:
    commodity: Commodity
    year: int
    steps: tuple[SupplyStep, ...]

    @property
    def cumulative(self) -> tuple[float, ...]:
        totals, acc = [], 0.0
        for step in self.steps:
            acc += step.quantity_mwh
            totals.append(acc)
        return tuple(totals)

    @property
    def total_quantity(self) -> float:
        return sum(step.quantity_mwh for step in self.steps)


def build_supply_curve(designs: list[PlantDesign]) -> SupplyCurve:
    """Merit order: steps sorted by unit cost, ties broken by site key."""
    if not designs:
        raise ValueError("cannot build a supply curve from zero designs")
    commodity = designs[0].commodity
    year = designs[0].year
    for design in designs:
        if design.commodity is not commodity or design.year != year:
            raise ValueError("supply curve mixes commodities or years")
    ordered = sorted((d for d in designs if d.max_annual_output > 0),
                     key=lambda d: (d.unit_cost, d.site))
    steps = tuple(
        SupplyStep(site=d.site, quantity_mwh=d.max_annual_output,
                   unit_cost=d.unit_cost,
                   components=tuple((k, d.components[k]) for k in COMPONENT_KEYS))
        for d in ordered)
    return SupplyCurve(commodity=commodity, year=year, steps=steps)


@dataclass(frozen=True)
class BorderPrice:
    commodity: Commodity
    year: int
    demand_mwh: float
    price_eur_per_mwh: float
    marginal_site: SiteKey
    components: tuple[tuple[str, float], ...]
    supplier_mix: tuple[tuple[str, float], ...]   # country -> MWh dispatched

    def mix_dict(self) -> dict[str, float]:
        return dict(self.supplier_mix)


def price_at(curve: SupplyCurve, demand_mwh: float) -> BorderPrice:
    """Marginal price when the curve is dispatched up to ``demand_mwh``.

    At an exact step boundary the just-completed (cheaper) step prices the
    margin, matching the LP dual under our tie-breaking.  Zero demand prices
    at the first step with an empty supplier mix.
    """
    if demand_mwh < 0:
        raise ValueError("demand must be non-negative")
    if not curve.steps:
        raise DemandExceedsSupply("supply curve is empty")
    total = curve.total_quantity
    if demand_mwh > total:
        raise DemandExceedsSupply(
            f"demand {demand_mwh:.6g} MWh exceeds total supply {total:.6g} MWh")

    mix: dict[str, float] = {}
    marginal = curve.steps[0]
    acc = 0.0
    for step in curve.steps:
        if acc >= demand_mwh:
            break
        take = min(step.quantity_mwh, demand_mwh - acc)
        mix[step.site.country] = mix.get(step.site.country, 0.0) + take
        acc += take
        marginal = step
    return BorderPrice(
        commodity=curve.commodity,
        year=curve.year,
        demand_mwh=demand_mwh,
        price_eur_per_mwh=marginal.unit_cost,
        marginal_site=marginal.site,
        components=marginal.components,
        supplier_mix=tuple(sorted(mix.items())),
    )


@dataclass(frozen=True)
class PriceDecomposition:
    marginal: tuple[tuple[str, float], ...]
    average: tuple[tuple[str, float], ...]


def decompose_price(curve: SupplyCurve, demand_mwh: float) -> PriceDecomposition:
    """Component breakdown at the margin and averaged over the dispatched mix."""
    border = price_at(curve, demand_mwh)
    if demand_mwh == 0:
        return PriceDecomposition(marginal=border.components, average=border.components)
    avg = {key: 0.0 for key in COMPONENT_KEYS}
    acc = 0.0
    for step in curve.steps:
        if acc >= demand_mwh:
            break
        take = min(step.quantity_mwh, demand_mwh - acc)
        for key, value in step.components:
            avg[key] += value * take
        acc += take
    average = tuple((key, avg[key] / demand_mwh) for key in COMPONENT_KEYS)
    return PriceDecomposition(marginal=border.components, average=average)


def build_monolithic_lp(site_inputs: list[tuple[ResourceProfile, SiteCosts]],
                        demand_mwh: float,
                        allow_battery: bool = True) -> lp.LpProblem:
    """One LP over all sites with the demand-balance row appended last.

    The dual of that final row is the border price; see :func:`dual_price`.
    """
    problem = lp.LpProblem()
    demand_terms: list[tuple[int, float]] = []
    for profile, costs in site_inputs:
        block = _add_site_block(problem, profile, costs, profile.site.label(),
                                bound_potential=True, allow_battery=allow_battery)
        demand_terms += [(var, float(w)) for var, w in zip(block.q_conv, block.weights)]
    problem.add_row("demand_balance", demand_terms, lp.EQ, demand_mwh)
    return problem


def dual_price(solution: lp.LpSolution) -> float:
    """Shadow price of the demand row of a monolithic problem (its last row)."""
    return float(solution.duals[-1])
