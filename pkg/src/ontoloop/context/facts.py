"""Scenario slot values feeding the prompt templates."""
from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass(frozen=True)
class ScenarioFacts:
    """Named slots describing one incident scenario.

    Every field is optional at construction; each prompt level declares
    which slots it needs and rendering fails loudly when one is absent.
    """

    server_id: str | None = None
    expert_role: str | None = None
    hosted_module: str | None = None
    dependent_facility: str | None = None
    exposure_amount: str | None = None
    exposure_window: str | None = None
    root_cause_hint: str | None = None
    company_type: str | None = None
    module_code: str | None = None
    regulatory_constraints: str | None = None
    throughput_figures: str | None = None

    def as_mapping(self) -> dict[str, str]:
        return {
            f.name: value
            for f in fields(self)
            if (value := getattr(self, f.name)) is not None
        }


def sap_scenario() -> ScenarioFacts:
    """The reference scenario: a monitoring incident on an SAP estate."""
    return ScenarioFacts(
        server_id="003",
        expert_role="SAP Monitoring Expert",
        hosted_module="Logistics Execution - Delivery and Returns",
        dependent_facility="Dispatching Bay 17",
        exposure_amount="$2.4 million",
        exposure_window="three hours",
        root_cause_hint="Increasing the ID range on server 003",
        company_type="Chemical Manufacturing Company",
        module_code="LE-DEL",
        regulatory_constraints=(
            "no more than 10 containers of chemical products can be in "
            "warehouses 0024 and 0025 that feed Dispatching Bay 0017"
        ),
        throughput_figures=(
            "Dispatching Bay 0017 ships 8 containers every 5 minutes, the "
            "bay has been down for 3 hours, and each delayed shipment is "
            "valued at $10,000"
        ),
    )
