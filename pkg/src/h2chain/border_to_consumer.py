"""Least-cost inland distribution plans per consumer site.

Each consumer chooses integer transport units and transported quantities
across the valid distribution modes so that delivered useful energy meets
demand at minimum total cost (procurement + transport units + storage +
conversion).  The mixed-integer program has a single coupling constraint, so
its LP relaxation is solved exactly by a greedy fill over piecewise-linear
cost segments; branch-and-bound on the (at most one) fractional unit count
then yields the global optimum.  A bounded exhaustive search over unit
vectors serves as the correctness oracle.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass

from .commodities import Commodity, DISTRIBUTION_MODES, TransportMode
from .scenario import ConsumerSite, Scenario
from .transport import (
    PipelineScope,
    chain_efficiency,
    landside_unit,
    pipeline_unit,
)

BREAKDOWN_KEYS = ("procurement", "transport", "storage", "conversion")


class NoFeasibleOption(Exception):
    """Consumer has no valid distribution mode with a finite distance."""


class InstanceTooLarge(Exception):
    """Brute-force enumeration bound exceeded."""


@dataclass(frozen=True)
class DistributionOption:
    """One valid (commodity, transport mode) pairing priced for one consumer."""

    imported: Commodity
    mode: TransportMode
    consumer: str
    unit_cost_per_year: float       # EUR per transport unit and year
    effective_capacity: float       # MWh deliverable per unit and year
    procurement_price: float        # EUR per MWh procured at the border
    storage_cost_per_mwh: float
    conversion_cost_per_mwh: float
    chain_eff: float                # delivered useful MWh per MWh transported
    variable_cost_per_mwh: float = 0.0
    valid: bool = True

    def __post_init__(self) -> None:
        if not 0.0 < self.chain_eff <= 1.0:
            raise ValueError(f"chain efficiency outside (0, 1]: {self.chain_eff}")

    @property
    def transported_rate(self) -> float:
        """EUR per MWh transported, excluding the per-unit investment."""
        return (self.procurement_price + self.storage_cost_per_mwh
                + self.conversion_cost_per_mwh + self.variable_cost_per_mwh)

    @property
    def delivered_rate(self) -> float:
        return self.transported_rate / self.chain_eff

    def label(self) -> str:
        return f"{self.imported.value}-{self.mode.value}"


@dataclass(eq=False)
class DistributionPlan:
    """Chosen units and flows per option, aligned with the input option list."""

    consumer: str
    year: int | None
    options: tuple[DistributionOption, ...]
    units: tuple[int, ...]
    transported_mwh: tuple[float, ...]
    procured_mwh: tuple[float, ...]
    total_cost: float
    breakdown: dict[str, float]
    delivered_mwh: float


@dataclass(frozen=True)
class PlanCostPerMwh:
    total: float
    components: tuple[tuple[str, float], ...]


def build_options(consumer: ConsumerSite, prices: dict[Commodity, float],
                  scenario: Scenario, year: int) -> list[DistributionOption]:
    """All priced distribution options for a consumer site.

    One option per valid (commodity, mode) pairing with a finite distance.
    Truck and rail options carry an on-site tank storage adder; pipeline
    deliveries need no storage.  Conversion adders follow from the consumer's
    desired product.
    """
    constants = scenario.constants
    wacc = constants.importer_wacc
    conversions = scenario.conversions(year)
    motion_in_unit = not constants.variable_motion_costs_per_mwh
    options: list[DistributionOption] = []
    for commodity, mode in DISTRIBUTION_MODES:
        if commodity not in prices:
            continue
        distance = _mode_distance(consumer, commodity, mode)
        if distance is None or distance <= 0:
            continue
        if mode is TransportMode.PIPELINE:
            scope = (PipelineScope.DOMESTIC_GH2
                     if commodity is Commodity.GASEOUS_HYDROGEN
                     else PipelineScope.DOMESTIC_NH3)
            unit = pipeline_unit(scenario.pipeline_params[scope], distance, wacc,
                                 motion_in_unit=motion_in_unit)
            storage = 0.0
        else:
            unit = landside_unit(scenario.landside_params, mode, commodity,
                                 distance, wacc, year, motion_in_unit=motion_in_unit)
            storage = scenario.tank_rate(commodity, year)
        eff, conv_cost = chain_efficiency(
            commodity, mode, consumer.desired_product, unit.delivery_efficiency,
            conversions, constants.avg_elec_price_eur_per_mwh, wacc)
        options.append(DistributionOption(
            imported=commodity,
            mode=mode,
            consumer=consumer.name,
            unit_cost_per_year=unit.unit_cost_per_year,
            effective_capacity=unit.effective_capacity,
            procurement_price=prices[commodity],
            storage_cost_per_mwh=storage,
            conversion_cost_per_mwh=conv_cost,
            chain_eff=eff,
            variable_cost_per_mwh=unit.variable_cost_per_mwh,
        ))
    if not options:
        raise NoFeasibleOption(
            f"consumer {consumer.name}: no valid mode has a finite distance")
    options.sort(key=lambda o: (o.imported.value, o.mode.value))
    return options


def _mode_distance(consumer: ConsumerSite, commodity: Commodity,
                   mode: TransportMode) -> float | None:
    if mode is TransportMode.TRUCK:
        return consumer.distances.get("truck")
    if mode is TransportMode.RAIL:
        return consumer.distances.get("rail")
    if commodity is Commodity.GASEOUS_HYDROGEN:
        return consumer.distances.get("gh2_pipeline")
    return consumer.distances.get("nh3_pipeline")


# ---------------------------------------------------------------------------
# exact optimisation

_REL_TOL = 1e-9


def _canonical_order(options) -> list[int]:
    return sorted(range(len(options)),
                  key=lambda i: (options[i].imported.value, options[i].mode.value, i))


def _fill(options, caps_transported, demand, order) -> tuple[float, list[float]] | None:
    """Cheapest fractional fill of delivered demand given transported caps.

    Exact for the inner problem with fixed unit counts: a single coupling
    constraint means sorting by delivered-cost rate is optimal.  Returns the
    variable cost and transported quantities, or None if capacity falls short.
    """
    ranked = sorted(order, key=lambda i: (options[i].delivered_rate, i))
    remaining = demand
    cost = 0.0
    quantities = [0.0] * len(options)
    for i in ranked:
        if remaining <= 0:
            break
        deliverable = caps_transported[i] * options[i].chain_eff
        take = min(deliverable, remaining)
        if take <= 0:
            continue
        transported = take / options[i].chain_eff
        quantities[i] = transported
        cost += transported * options[i].transported_rate
        remaining -= take
    if remaining > 1e-9 * max(1.0, demand):
        return None
    return cost, quantities


def _plan_from(options, units, transported, consumer, year) -> DistributionPlan:
    procurement = transport = storage = conversion = 0.0
    delivered = 0.0
    for option, n, q in zip(options, units, transported):
        procurement += q * option.procurement_price
        transport += n * option.unit_cost_per_year + q * option.variable_cost_per_mwh
        storage += q * option.storage_cost_per_mwh
        conversion += q * option.conversion_cost_per_mwh
        delivered += q * option.chain_eff
    breakdown = {"procurement": procurement, "transport": transport,
                 "storage": storage, "conversion": conversion}
    return DistributionPlan(
        consumer=options[0].consumer if options else "",
        year=year,
        options=tuple(options),
        units=tuple(int(n) for n in units),
        transported_mwh=tuple(transported),
        procured_mwh=tuple(transported),
        total_cost=sum(breakdown.values()),
        breakdown=breakdown,
        delivered_mwh=delivered,
    )


def _unit_bound(option: DistributionOption, demand: float) -> int:
    per_unit_delivered = option.effective_capacity * option.chain_eff
    if per_unit_delivered <= 0:
        return 0
    return math.ceil(demand / per_unit_delivered - 1e-12)


@dataclass(order=True)
class _Node:
    bound: float
    serial: int
    lower: tuple[int, ...] = None
    upper: tuple[int, ...] = None
    relaxed_units: tuple[float, ...] = None
    quantities: tuple[float, ...] = None


def _relax(options, lower, upper, demand, order):
    """Exact LP relaxation of a node by greedy fill over cost segments.

    Committed units (the branching lower bounds) are sunk cost whose capacity
    fills at the pure transported rate; capacity beyond them pays the unit
    cost linearised per MWh.  At most one option ends up with a fractional
    unit count, which is the branching candidate.
    """
    committed = sum(l * options[i].unit_cost_per_year for i, l in enumerate(lower))
    segments = []   # (delivered rate, canonical rank, option, delivered capacity)
    for rank, i in enumerate(order):
        option = options[i]
        eff = option.chain_eff
        cap = option.effective_capacity
        base = lower[i] * cap * eff
        if base > 0:
            segments.append((option.delivered_rate, rank, 0, i, base))
        extra = (upper[i] - lower[i]) * cap * eff
        if extra > 0:
            linear = (option.transported_rate + option.unit_cost_per_year / cap) / eff
            segments.append((linear, rank, 1, i, extra))
    segments.sort(key=lambda s: (s[0], s[1], s[2]))
    remaining = demand
    cost = committed
    delivered = [0.0] * len(options)
    for rate, _, _, i, capacity in segments:
        if remaining <= 0:
            break
        take = min(capacity, remaining)
        delivered[i] += take
        cost += take * rate
        remaining -= take
    if remaining > 1e-9 * max(1.0, demand):
        return None
    units = []
    quantities = []
    for i, option in enumerate(options):
        q = delivered[i] / option.chain_eff
        quantities.append(q)
        needed = q / option.effective_capacity if option.effective_capacity > 0 else 0.0
        units.append(max(float(lower[i]), needed))
    return cost, tuple(units), tuple(quantities)


def _candidate_key(options, units, transported, order):
    return (tuple(units[i] for i in order), tuple(transported[i] for i in order))


def optimize_plan(options: list[DistributionOption], demand_mwh: float,
                  year: int | None = None) -> DistributionPlan:
    """Globally optimal distribution plan by branch-and-bound.

    Unit counts are bounded above by the number of units one option would
    need to cover the whole demand alone, which never cuts off an optimum.
    Deterministic: nodes are explored best-bound-first with a fixed serial
    tie-break, and equal-cost incumbents resolve to the lexicographically
    smallest unit vector in (commodity, mode) order.
    """
    if demand_mwh < 0:
        raise ValueError("demand must be non-negative")
    if not options:
        raise NoFeasibleOption("no distribution options supplied")
    n = len(options)
    if demand_mwh == 0:
        return _plan_from(options, [0] * n, [0.0] * n, options[0].consumer, year)

    order = _canonical_order(options)
    root_upper = tuple(_unit_bound(o, demand_mwh) for o in options)
    if all(u == 0 for u in root_upper):
        raise NoFeasibleOption("no option has positive deliverable capacity")

    best_cost = math.inf
    best_units: tuple[int, ...] | None = None
    best_q: tuple[float, ...] | None = None
    best_key = None

    def consider(units, quantities):
        nonlocal best_cost, best_units, best_q, best_key
        trimmed = [int(round(u)) if q > 0 else 0
                   for u, q in zip(units, quantities)]
        # minimal units that still carry the flow
        for i, q in enumerate(quantities):
            if q > 0:
                trimmed[i] = max(trimmed[i], math.ceil(
                    q / options[i].effective_capacity - 1e-9))
        filled = _fill(options, [t * options[i].effective_capacity
                                 for i, t in enumerate(trimmed)], demand_mwh, order)
        if filled is None:
            return
        var_cost, flows = filled
        cost = var_cost + sum(t * options[i].unit_cost_per_year
                              for i, t in enumerate(trimmed))
        key = _candidate_key(options, trimmed, flows, order)
        tol = _REL_TOL * max(1.0, abs(cost), abs(best_cost) if best_cost < math.inf else 0.0)
        if cost < best_cost - tol or (abs(cost - best_cost) <= tol
                                      and (best_key is None or key < best_key)):
            best_cost, best_units, best_q, best_key = cost, tuple(trimmed), tuple(flows), key

    # warm start: each option alone, plus the rounded-up root relaxation
    for i, option in enumerate(options):
        units = [0] * n
        units[i] = root_upper[i]
        if units[i] > 0:
            consider(units, [demand_mwh / option.chain_eff if j == i else 0.0
                             for j in range(n)])

    serial = itertools.count()
    heap: list[_Node] = []
    root = _relax(options, (0,) * n, root_upper, demand_mwh, order)
    if root is None:
        raise NoFeasibleOption("root relaxation infeasible despite unit bounds")
    consider([math.ceil(u - 1e-9) for u in root[1]], root[2])
    heapq.heappush(heap, _Node(root[0], next(serial), (0,) * n, root_upper,
                               root[1], root[2]))

    while heap:
        node = heapq.heappop(heap)
        tol = _REL_TOL * max(1.0, abs(best_cost) if best_cost < math.inf else 1.0)
        if node.bound > best_cost + tol:
            continue
        frac_index = None
        for i in order:
            u = node.relaxed_units[i]
            if abs(u - round(u)) > 1e-9:
                frac_index = i
                break
        if frac_index is None:
            consider([round(u) for u in node.relaxed_units], node.quantities)
            continue
        floor_u = math.floor(node.relaxed_units[frac_index])
        for new_lower, new_upper in (
                (node.lower, _replaced(node.upper, frac_index, floor_u)),
                (_replaced(node.lower, frac_index, floor_u + 1), node.upper)):
            if new_lower[frac_index] > new_upper[frac_index]:
                continue
            relaxed = _relax(options, new_lower, new_upper, demand_mwh, order)
            if relaxed is None:
                continue
            bound, runits, rq = relaxed
            if bound > best_cost + tol:
                continue
            consider([math.ceil(u - 1e-9) for u in runits], rq)
            heapq.heappush(heap, _Node(bound, next(serial), new_lower, new_upper,
                                       runits, rq))

    assert best_units is not None and best_q is not None
    return _plan_from(options, best_units, best_q, options[0].consumer, year)


def _replaced(values: tuple[int, ...], index: int, value: int) -> tuple[int, ...]:
    out = list(values)
    out[index] = value
    return tuple(out)


def brute_force_plan(options: list[DistributionOption], demand_mwh: float,
                     year: int | None = None,
                     max_nodes: int = 10 ** 6) -> DistributionPlan:
    """Exhaustive search over all unit vectors within the per-option bounds."""
    if demand_mwh < 0:
        raise ValueError("demand must be non-negative")
    if not options:
        raise NoFeasibleOption("no distribution options supplied")
    n = len(options)
    if demand_mwh == 0:
        return _plan_from(options, [0] * n, [0.0] * n, options[0].consumer, year)

    order = _canonical_order(options)
    bounds = [_unit_bound(o, demand_mwh) for o in options]
    size = 1
    for b in bounds:
        size *= b + 1
    if size > max_nodes:
        raise InstanceTooLarge(f"{size} unit vectors exceed the bound {max_nodes}")

    best_cost = math.inf
    best_units = best_q = best_key = None
    for units in itertools.product(*(range(b + 1) for b in bounds)):
        caps = [u * o.effective_capacity for u, o in zip(units, options)]
        filled = _fill(options, caps, demand_mwh, order)
        if filled is None:
            continue
        var_cost, quantities = filled
        cost = var_cost + sum(u * o.unit_cost_per_year for u, o in zip(units, options))
        key = _candidate_key(options, units, quantities, order)
        tol = _REL_TOL * max(1.0, abs(cost), abs(best_cost) if best_cost < math.inf else 0.0)
        if cost < best_cost - tol or (abs(cost - best_cost) <= tol
                                      and (best_key is None or key < best_key)):
            best_cost, best_units, best_q, best_key = cost, units, quantities, key
    if best_units is None:
        raise NoFeasibleOption("no feasible unit vector within bounds")
    return _plan_from(options, best_units, best_q, options[0].consumer, year)


def cost_breakdown(plan: DistributionPlan,
                   options: list[DistributionOption] | None = None) -> PlanCostPerMwh:
    """Per-delivered-MWh cost components of a plan."""
    delivered = plan.delivered_mwh
    if delivered <= 0:
        return PlanCostPerMwh(0.0, tuple((k, 0.0) for k in BREAKDOWN_KEYS))
    components = tuple((k, plan.breakdown[k] / delivered) for k in BREAKDOWN_KEYS)
    return PlanCostPerMwh(plan.total_cost / delivered, components)
