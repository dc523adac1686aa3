"""Built-in fold-fold scenarios and scenario JSON loading.

Each scenario is an alpha-family given by polynomial coefficient tables
(monomials over x, y and the unfolding parameter a), paired with a default
transition function and the reference constants used by the reproduction
driver.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import UsageError
from .fields import AlphaFamily, family_from_tables
from .regularize import TransitionFunction, get_transition


@dataclass
class Scenario:
    id: str
    tables: dict
    default_phi: str
    reference: dict = field(default_factory=dict)

    def family(self) -> AlphaFamily:
        return family_from_tables(self.tables)

    def phi(self, label: Optional[str] = None) -> TransitionFunction:
        return get_transition(label or self.default_phi)


_SCENARIO_TABLES = {
    # invisible-invisible pseudo-focus: X = (1-2x, -x+a), Y = (-1, -x)
    "ii-basic": {
        "X1": {"1": 1.0, "x": -2.0},
        "X2": {"x": -1.0, "a": 1.0},
        "Y1": {"1": -1.0},
        "Y2": {"x": -1.0},
    },
    # visible-invisible focus type: X = (1+2x, x+3.5y-a), Y = (-1, -3x)
    "vi-basic": {
        "X1": {"1": 1.0, "x": 2.0},
        "X2": {"x": 1.0, "y": 3.5, "a": -1.0},
        "Y1": {"1": -1.0},
        "Y2": {"x": -3.0},
    },
    # visible-invisible with cubic x-terms, used for the big-orbit stability
    # coefficient: X = (1+0.2x, -a+x(8x^2+3x+1)-4y), Y = (-1, -x(8x^2+3x+3))
    "b-field": {
        "X1": {"1": 1.0, "x": 0.2},
        "X2": {"a": -1.0, "x^3": 8.0, "x^2": 3.0, "x": 1.0, "y": -4.0},
        "Y1": {"1": -1.0},
        "Y2": {"x^3": -8.0, "x^2": -3.0, "x": -3.0},
    },
    # non-versal invisible fold-fold family: X = (-1+ax, x), Y = (1, 2x+x^2);
    # here a plays the role of the paper-independent family parameter.
    "ex1": {
        "X1": {"1": -1.0, "x a": 1.0},
        "X2": {"x": 1.0},
        "Y1": {"1": 1.0},
        "Y2": {"x": 2.0, "x^2": 1.0},
    },
}

SCENARIOS: dict[str, Scenario] = {
    "ii-basic": Scenario("ii-basic", _SCENARIO_TABLES["ii-basic"], "cubic", {
        "muZ": 4.0 / 3.0, "detZx0": -2.0,
        "cubic": {"D_coeff": 3.0 / 32.0, "delta_H": 4.0 / 3.0, "criticality": "supercritical"},
        "quintic": {"D_coeff": 1.0 / 32.0, "delta_H": 4.0, "criticality": "subcritical",
                    "saddle_node_window_eps006": (0.011, 0.012)},
    }),
    "vi-basic": Scenario("vi-basic", _SCENARIO_TABLES["vi-basic"], "quintic-b", {
        "detZx0": -2.0,
        "quintic-b": {"D_coeff": 9.0 / 32.0, "delta_H": 11.0 / 3.0, "delta_C": 1.98,
                      "criticality": "supercritical"},
        "cubic": {"D_coeff": 0.84, "delta_H": 1.22, "delta_C": 1.21,
                  "criticality": "subcritical",
                  "saddle_node_window_eps001": (0.01216, 0.01217)},
    }),
    "b-field": Scenario("b-field", _SCENARIO_TABLES["b-field"], "septic", {
        "detZx0": -2.0,
        "septic": {"delta_H": -1.26, "delta_C": -2.167, "B": -2.17,
                   "criticality": "supercritical", "big_orbit_side": "right-of-C"},
        "cubic": {"delta_H": -0.8444, "delta_C": -1.01013, "B": 5.66,
                  "criticality": "supercritical", "big_orbit_side": "left-of-C"},
    }),
    "ex1": Scenario("ex1", _SCENARIO_TABLES["ex1"], "cubic", {
        "versal_margin": 0.0,
    }),
}

# reproduction driver: paper worked examples -> (scenario, transition)
REPRODUCE_IDS = {
    "3.1": ("ex1", "cubic"),
    "4.3": ("ii-basic", "cubic"),
    "4.4": ("ii-basic", "quintic"),
    "4.6": ("vi-basic", "quintic-b"),
    "4.7": ("vi-basic", "cubic"),
    "4.8": ("b-field", "septic"),
    "4.9": ("b-field", "cubic"),
}


def get_scenario(scenario_id: str) -> Scenario:
    try:
        return SCENARIOS[scenario_id]
    except KeyError:
        raise UsageError(f"unknown scenario {scenario_id!r}; "
                         f"known: {sorted(SCENARIOS)}") from None


def load_scenario_json(path: str) -> Scenario:
    """Load a user scenario file: {"id", "fields", "phi", "reference"?}.

    ``fields`` holds the four polynomial tables; ``phi`` is a catalog label
    or a list of odd-power coefficients (validated on load).
    """
    with open(path) as fh:
        payload = json.load(fh)
    for key in ("id", "fields"):
        if key not in payload:
            raise UsageError(f"scenario file missing {key!r}")
    phi_spec = payload.get("phi", "cubic")
    get_transition(phi_spec)  # validate eagerly
    scenario = Scenario(id=payload["id"], tables=payload["fields"],
                        default_phi=phi_spec if isinstance(phi_spec, str) else phi_spec,
                        reference=payload.get("reference", {}))
    from .filippov import diagnose

    diagnose(scenario.family())  # reject families without a fold-fold at 0
    return scenario
