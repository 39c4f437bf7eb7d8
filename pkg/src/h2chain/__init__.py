"""Green-commodity supply-chain costing.

Two linked stages: plant-sizing and merit-order dispatch of export sites
turn techno-economic assumptions into border import prices for ammonia,
liquid hydrogen and gaseous hydrogen; a per-consumer mixed-integer planner
then picks least-cost inland distribution (truck, rail, pipeline) for each
consumption site.
"""

from .border_to_consumer import (
    DistributionOption,
    DistributionPlan,
    PlanCostPerMwh,
    brute_force_plan,
    build_options,
    cost_breakdown,
    optimize_plan,
)
from .commodities import Commodity, Product, SiteKey, Technology, TransportMode
from .scenario import (
    ConsumerSite,
    Finding,
    Scenario,
    desk_scale_path,
    load_scenario,
    parse_scenario,
    save_scenario,
    validate_scenario,
)
from .transport import (
    LandsideParams,
    PipelineParams,
    ShipParams,
    TransportUnitEconomics,
    annualize,
    chain_efficiency,
    landside_unit,
    pipeline_cost_per_mwh,
    ship_unit_cost,
)
from .well_to_border import (
    BorderPrice,
    PlantDesign,
    SupplyCurve,
    build_monolithic_lp,
    build_site_lp,
    build_supply_curve,
    combined_conversion_efficiency,
    decompose_price,
    dual_price,
    price_at,
    size_all,
    size_plant,
)

__version__ = "0.1.0"

__all__ = [
    "BorderPrice",
    "Commodity",
    "ConsumerSite",
    "DistributionOption",
    "DistributionPlan",
    "Finding",
    "LandsideParams",
    "PipelineParams",
    "PlanCostPerMwh",
    "PlantDesign",
    "Product",
    "Scenario",
    "ShipParams",
    "SiteKey",
    "SupplyCurve",
    "Technology",
    "TransportMode",
    "TransportUnitEconomics",
    "annualize",
    "brute_force_plan",
    "build_monolithic_lp",
    "build_options",
    "build_site_lp",
    "build_supply_curve",
    "chain_efficiency",
    "combined_conversion_efficiency",
    "cost_breakdown",
    "decompose_price",
    "desk_scale_path",
    "dual_price",
    "landside_unit",
    "load_scenario",
    "optimize_plan",
    "parse_scenario",
    "pipeline_cost_per_mwh",
    "price_at",
    "save_scenario",
    "ship_unit_cost",
    "size_all",
    "size_plant",
    "validate_scenario",
    "__version__",
]
