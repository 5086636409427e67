"""
Tests for the differential check, tree properties and tree export.
"""

import json

import pydot
import pytest

from core.executor import ExecConfig, ExecMode, execute
from core.templates import compute_templates, mutate_template
from harness import (
    DiffBudgets,
    ExportFormat,
    check_tree_properties,
    differential_check,
    export_tree,
    load_tree_json,
    valuations_at_depth,
    valuations_up_to,
    write_tree,
)
from models import InitialMemory, Mutation, ParamKind, Parameter
from framework import DIFF_PROGRAMS, corpus_names, load_corpus

K1 = Parameter(ParamKind.KAPPA, 1)
SMALL = DiffBudgets(classic=150, compact=50)
FULL = DiffBudgets(classic=500, compact=100)


def _compact_run(p, solver):
    templates = compute_templates(p, solver)
    return execute(p, ExecConfig(mode=ExecMode.COMPACT, solver=solver, templates=templates))


def _leaf_with_depth(result, text):
    return next(leaf for leaf in result.leaves if str(leaf.classic_depth) == text)


class TestValuationSearch:
    """Enumerating valuations by classic depth."""

    def test_exact_depth(self, lin_srch, solver):
        """4 + 3·κ1 reaches depth 10 only with κ1 = 2."""
        leaf = _leaf_with_depth(_compact_run(lin_srch, solver), "4 + 3·κ1")
        assert list(valuations_at_depth(leaf, 10)) == [{K1: 2}]
        assert list(valuations_at_depth(leaf, 11)) == []
        assert list(valuations_at_depth(leaf, 2)) == []

    def test_up_to_bound(self, lin_srch, solver):
        """Every parameter ranges over 0..bound."""
        leaf = _leaf_with_depth(_compact_run(lin_srch, solver), "4 + 3·κ1")
        assert list(valuations_up_to(leaf, 2)) == [{K1: 0}, {K1: 1}, {K1: 2}]

    def test_up_to_bound_below_depth(self, lin_srch, solver):
        """A depth ceiling cuts the enumeration short."""
        leaf = _leaf_with_depth(_compact_run(lin_srch, solver), "4 + 3·κ1")
        assert list(valuations_up_to(leaf, 5, below=8)) == [{K1: 0}, {K1: 1}]


class TestDifferentialCheck:
    """Compact against classic execution."""

    def test_lin_srch_passes(self, lin_srch, solver):
        """The computed linSrch template agrees with classic execution."""
        report = differential_check(lin_srch, solver, bound=3, budgets=SMALL)
        assert report.passed
        assert report.soundness
        assert len(report.completeness) >= 4
        # classic run is cut by its budget
        assert report.partial

    def test_lin_srch_rec_passes(self, lin_srch_rec, solver):
        """Recursion templates agree with classic execution."""
        report = differential_check(lin_srch_rec, solver, bound=2, budgets=SMALL)
        assert report.passed
        assert report.compact_leaves == 2

    @pytest.mark.slow
    @pytest.mark.parametrize("name", DIFF_PROGRAMS)
    def test_corpus_passes(self, name, solver):
        """Every corpus program agrees with classic execution up to bound 3."""
        report = differential_check(load_corpus(name), solver, bound=3, budgets=FULL)
        assert report.passed, (report.unmatched_classic, report.unmatched_compact)

    @pytest.mark.parametrize("mutation", list(Mutation))
    def test_mutated_template_fails(self, lin_srch, solver, mutation):
        """Every kind of corrupted template is caught."""
        store = compute_templates(lin_srch, solver)
        (template,) = list(store)
        broken = store.replace(mutate_template(template, mutation))
        report = differential_check(lin_srch, solver, bound=3, budgets=SMALL, templates=broken)
        assert not report.passed
        assert report.unmatched_classic or report.unmatched_compact

    def test_negative_bound(self, lin_srch, solver):
        """The bound is a non-negative parameter value."""
        with pytest.raises(ValueError):
            differential_check(lin_srch, solver, bound=-1)

    def test_report_serializes(self, lin_srch, solver):
        """Reports dump to JSON with the verdict included."""
        report = differential_check(lin_srch, solver, bound=1, budgets=SMALL)
        data = json.loads(report.model_dump_json())
        assert data["passed"] is True
        assert data["bound"] == 1
        assert data["classic_budget"] == 150


class TestTreeProperties:
    """Satisfiability, sibling exclusivity and monotone conditions."""

    def test_compact_tree(self, lin_srch, solver):
        """The compact linSrch tree has all properties."""
        tree = _compact_run(lin_srch, solver).tree
        report = check_tree_properties(tree, solver)
        assert report.ok, report.violations
        assert report.unknown == 0

    @pytest.mark.parametrize("name", corpus_names())
    def test_classic_tree(self, name, solver):
        """So does the classic tree of every corpus program cut at 300 vertices."""
        tree = execute(load_corpus(name), ExecConfig(budget=300, solver=solver)).tree
        report = check_tree_properties(tree, solver)
        assert report.ok, report.violations

    def test_recursion_tree(self, lin_srch_rec, solver):
        """Markers and recursion returns keep the properties."""
        tree = _compact_run(lin_srch_rec, solver).tree
        assert check_tree_properties(tree, solver).ok


class TestExport:
    """DOT and JSON renderings of trees."""

    def test_dot_shape(self, lin_srch, solver):
        """One node per vertex and one edge per parent link."""
        tree = _compact_run(lin_srch, solver).tree
        (graph,) = pydot.graph_from_dot_data(export_tree(tree, ExportFormat.DOT))
        nodes = [n for n in graph.get_nodes() if n.get_name().startswith("v")]
        assert len(nodes) == 6
        assert len(graph.get_edges()) == 5

    def test_dot_is_stable(self, lin_srch, solver):
        """Two runs of the same program export the same bytes."""
        first = export_tree(_compact_run(lin_srch, solver).tree)
        second = export_tree(_compact_run(lin_srch, solver).tree)
        assert first == second

    def test_json_loads_back(self, lin_srch, solver):
        """JSON exports parse back into the export model."""
        tree = _compact_run(lin_srch, solver).tree
        loaded = load_tree_json(export_tree(tree, ExportFormat.JSON, InitialMemory(lin_srch)))
        assert loaded.schema_version == 1
        assert loaded.mode == "compact"
        assert len(loaded.vertices) == 6
        root = loaded.vertices[0]
        assert root.parent is None
        assert root.memory == "{}"
        assert all(v.parent is not None for v in loaded.vertices[1:])

    def test_json_rejects_other_schema(self):
        """Only schema version 1 is understood."""
        with pytest.raises(ValueError):
            load_tree_json('{"schema_version": 2, "mode": "classic", "vertices": []}')

    def test_format_from_path(self):
        """The file suffix picks the format."""
        assert ExportFormat.from_path("out/tree.dot") is ExportFormat.DOT
        assert ExportFormat.from_path("tree.JSON") is ExportFormat.JSON
        with pytest.raises(ValueError):
            ExportFormat.from_path("tree.txt")

    def test_write_tree(self, lin_srch, solver, tmp_path):
        """Parent directories are created on the way."""
        tree = _compact_run(lin_srch, solver).tree
        target = write_tree(tree, tmp_path / "nested" / "tree.json")
        assert target.exists()
        assert len(load_tree_json(target.read_text(encoding="utf-8")).vertices) == 6
