"""Differential checking, tree properties and tree export."""

from .differential import DiffBudgets, differential_check, valuations_at_depth, valuations_up_to
from .export import ExportFormat, export_tree, load_tree_json, tree_to_model, write_tree
from .properties import TreeProperties, check_tree_properties, trees_isomorphic

__all__ = [
    "DiffBudgets",
    "differential_check",
    "valuations_at_depth",
    "valuations_up_to",
    "ExportFormat",
    "export_tree",
    "load_tree_json",
    "tree_to_model",
    "write_tree",
    "TreeProperties",
    "check_tree_properties",
    "trees_isomorphic",
]
