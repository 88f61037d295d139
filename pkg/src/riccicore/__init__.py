"""Ricci curvature flows on weighted graphs and flow-based core detection."""

from .baselines import METHODS, CentralityScores, centrality, connected_top_k
from .core import CoreConfig, CoreResult, detect_core
from .curvature import CurvatureField, LinLuYau, Ollivier, curvature_field, lly_curvature, ollivier_curvature
from .flow import FlowConfig, FlowTrajectory, FlowVariant, envelope, iteration_budget, run_flow, theta_surgery
from .graph import WeightedGraph, largest_connected_component, load_edge_list, read_edge_list
from .metrics import MetricsReport, evaluate_core
from .transport import Measure, lazy_measure, wasserstein, wasserstein_oracle

__version__ = "0.1.0"

__all__ = [
    "METHODS", "CentralityScores", "centrality", "connected_top_k",
    "CoreConfig", "CoreResult", "detect_core",
    "CurvatureField", "LinLuYau", "Ollivier", "curvature_field", "lly_curvature", "ollivier_curvature",
    "FlowConfig", "FlowTrajectory", "FlowVariant", "envelope", "iteration_budget", "run_flow", "theta_surgery",
    "WeightedGraph", "largest_connected_component", "load_edge_list", "read_edge_list",
    "MetricsReport", "evaluate_core",
    "Measure", "lazy_measure", "wasserstein", "wasserstein_oracle",
]
