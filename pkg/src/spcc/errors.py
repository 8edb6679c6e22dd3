"""Exception types shared across the package."""

from __future__ import annotations


class SpccError(Exception):
    """Base class; carries a machine-readable code."""

    code = "error"


class NotFound(SpccError):
    code = "not_found"


class AlreadyExists(SpccError):
    code = "already_exists"


class InvalidInput(SpccError):
    code = "invalid_input"


class EmptyRepository(SpccError):
    code = "empty_repository"


class UnboundMetric(SpccError):
    code = "unbound_metric"

    def __init__(self, metric: str, goal: str):
        super().__init__(f"metric {metric!r} required by goal {goal!r} has no data-series binding")
        self.metric = metric
        self.goal = goal


class MissingParameter(SpccError):
    code = "missing_parameter"

    def __init__(self, component: str, parameter: str):
        super().__init__(f"parameter {parameter!r} of component {component!r} has no default and no experience value")
        self.component = component
        self.parameter = parameter


class Unvalidated(SpccError):
    code = "unvalidated_catena"


class UnknownComponent(SpccError):
    code = "unknown_component"


class InsufficientData(SpccError):
    code = "insufficient_data"


class InvalidWeight(SpccError):
    code = "invalid_weight"


class BaselineZero(SpccError):
    code = "baseline_zero"


class DegenerateTree(SpccError):
    code = "degenerate_tree"


class LayoutDiverged(SpccError):
    code = "layout_diverged"

    def __init__(self, iteration: int):
        super().__init__(f"layout produced non-finite positions at iteration {iteration}")
        self.iteration = iteration


class HeaderMismatch(SpccError):
    code = "header_mismatch"


class ProjectActive(SpccError):
    code = "project_active"


class PlanInvalid(SpccError):
    code = "plan_invalid"

    def __init__(self, violations):
        super().__init__("plan violates invariants: " + "; ".join(v.message for v in violations))
        self.violations = list(violations)


class StaleCatena(SpccError):
    code = "stale_catena"
