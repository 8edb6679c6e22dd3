from __future__ import annotations

import random

import pytest

from spcc.catena import validate
from spcc.errors import EmptyRepository, MissingParameter, UnboundMetric
from spcc.gqm import (
    ChecklistReport,
    ComponentDescriptor,
    ComponentKind,
    ControlGoal,
    ParamSpec,
    Purpose,
    Question,
    checklist_report,
    compose_catena,
    compose_project,
    load_repository,
    match_components,
)
from spcc.model import ContextVector, Project, Role


def goal(gid="g1", purpose=Purpose.CONTROL, focus=("cost",), viewpoint="project_manager"):
    return ControlGoal(id=gid, object="development project", purpose=purpose,
                       quality_focus=frozenset(focus), viewpoint=viewpoint)


def question(qid, gid, metrics):
    return Question(qid, gid, f"question {qid}", frozenset(metrics))


def descriptor(did, kind=ComponentKind.TECHNIQUE, impl="tolerance",
               purposes=(Purpose.CONTROL,), focus=("cost",), roles=None,
               required=("cost",), params=(), checklist=(True,) * 5):
    return ComponentDescriptor(
        id=did, kind=kind, implementation=impl,
        applicable_purposes=frozenset(purposes), applicable_focus=frozenset(focus),
        applicable_roles=roles, required_metrics=frozenset(required),
        parameters=tuple(params), indicator_checklist=checklist,
    )


def project(pid="p1"):
    return Project(id=pid, name="proj", context=ContextVector({"domain": "web"}),
                   roles=(Role("project_manager", "Project Manager"),
                          Role("qa_manager", "QA Manager")))


class TestMatchComponents:
    def test_evm_style_match(self):
        evm_like = descriptor("evm_like", impl="evm", purposes=(Purpose.CONTROL, Purpose.MONITOR),
                              required=("pv", "ev", "ac"))
        qs = [question("q1", "g1", ("pv", "ev", "ac"))]
        matches = match_components(goal(), qs, [evm_like])
        assert [m.descriptor.id for m in matches] == ["evm_like"]

    def test_empty_repository_raises(self):
        with pytest.raises(EmptyRepository):
            match_components(goal(), [], [])

    def test_equal_scores_ordered_by_id(self):
        a = descriptor("alpha")
        b = descriptor("beta")
        matches = match_components(goal(), [question("q1", "g1", ("cost",))], [b, a])
        assert [m.descriptor.id for m in matches] == ["alpha", "beta"]

    def test_purpose_mismatch_excluded(self):
        d = descriptor("d", purposes=(Purpose.PREDICT,))
        assert match_components(goal(), [question("q", "g1", ("cost",))], [d]) == []

    def test_role_filter(self):
        d = descriptor("d", roles=frozenset({"qa_manager"}))
        assert match_components(goal(), [question("q", "g1", ("cost",))], [d]) == []
        any_role = descriptor("d2", roles=None)
        assert len(match_components(goal(), [question("q", "g1", ("cost",))], [any_role])) == 1

    def test_required_metrics_must_be_covered(self):
        d = descriptor("d", required=("cost", "planned_cost"))
        assert match_components(goal(), [question("q", "g1", ("cost",))], [d]) == []

    def test_questions_for_other_goals_ignored(self):
        d = descriptor("d", required=("cost",))
        matches = match_components(goal(), [question("q", "other-goal", ("cost",))], [d])
        assert matches == []

    def test_score_is_focus_overlap_plus_checklist(self):
        d = descriptor("d", focus=("cost", "schedule"), checklist=(True, True, False, False, False))
        g = goal(focus=("cost", "schedule", "quality"))
        qs = [question("q", "g1", ("cost",))]
        matches = match_components(g, qs, [d])
        assert matches[0].score == 2 + 2

    def test_adding_focus_tag_never_removes_matches(self):
        rng = random.Random(1)
        focus_pool = ["cost", "schedule", "quality", "effort", "risk"]
        for _ in range(100):
            repo = [descriptor(f"d{i}",
                               focus=rng.sample(focus_pool, rng.randint(1, 3)),
                               required=("m",),
                               checklist=tuple(rng.random() < 0.5 for _ in range(5)))
                    for i in range(rng.randint(1, 6))]
            base_focus = set(rng.sample(focus_pool, rng.randint(1, 3)))
            extra = rng.choice(focus_pool)
            g1 = goal(focus=base_focus)
            g2 = goal(focus=base_focus | {extra})
            qs = [question("q", "g1", ("m",))]
            before = {m.descriptor.id for m in match_components(g1, qs, repo)}
            after = {m.descriptor.id for m in match_components(g2, qs, repo)}
            assert before <= after


class TestChecklistReport:
    def test_all_true(self):
        assert checklist_report(descriptor("d")).count == 5

    def test_all_false(self):
        report = checklist_report(descriptor("d", checklist=(False,) * 5))
        assert report.count == 0
        assert len(report.failed) == 5

    def test_three_of_five(self):
        report = checklist_report(descriptor("d", checklist=(True, False, True, False, True)))
        assert report.count == 3
        assert report.passed == ("a", "c", "e")
        assert report.failed == ("b", "d")


class TestComposeCatena:
    def repo(self):
        return [
            descriptor("evm_like", impl="evm", purposes=(Purpose.CONTROL,),
                       required=("pv", "ev", "ac"),
                       params=(ParamSpec("bac", "from_plan"),)),
            descriptor("chart", kind=ComponentKind.VIEW, impl="TIMESERIES",
                       purposes=(Purpose.CONTROL,), required=()),
        ]

    def test_counts_for_single_goal_single_technique_single_view(self):
        g = goal()
        qs = [question("q1", "g1", ("pv", "ev", "ac"))]
        matches = {g: match_components(g, qs, self.repo())}
        catena = compose_catena(matches, project(), {"pv", "ev", "ac"}, qs)
        assert len(catena.bindings) == 3
        assert len(catena.functions) == 1
        assert len(catena.views) == 1
        assert catena.roles() == {"project_manager": (catena.views[0].id,)}

    def test_zero_goals_compose_empty_catena(self):
        catena = compose_catena({}, project(), set())
        assert catena.bindings == () and catena.functions == () and catena.views == ()
        assert validate(catena) == []

    def test_unbound_metric(self):
        g = goal()
        qs = [question("q1", "g1", ("pv", "ev", "ac", "defect_density"))]
        repo = [descriptor("needs_defects", required=("defect_density",))]
        matches = {g: match_components(g, qs, repo)}
        with pytest.raises(UnboundMetric) as err:
            compose_catena(matches, project(), {"pv", "ev", "ac"}, qs)
        assert err.value.metric == "defect_density"

    def test_missing_required_parameter(self):
        g = goal()
        qs = [question("q1", "g1", ("cost",))]
        repo = [descriptor("needs_param", params=(ParamSpec("threshold", None, required=True),))]
        matches = {g: match_components(g, qs, repo)}
        with pytest.raises(MissingParameter):
            compose_catena(matches, project(), {"cost"}, qs)

    def test_experience_overrides_default(self):
        g = goal()
        qs = [question("q1", "g1", ("cost",))]
        repo = [descriptor("tuned", params=(ParamSpec("tol", 0.1),))]
        matches = {g: match_components(g, qs, repo)}

        def lookup(context, key):
            return 0.05 if key == "tuned.tol" else None

        catena = compose_catena(matches, project(), {"cost"}, qs, experience=lookup)
        assert catena.functions[0].params["tol"] == 0.05

    def test_composed_catena_always_validates(self):
        rng = random.Random(7)
        repo = load_repository()
        purposes = list(Purpose)
        focus_pool = ["cost", "schedule", "quality", "effort", "reliability", "risk"]
        metric_pool = ["pv", "ev", "ac", "cost", "planned_cost", "effort",
                       "planned_effort", "defect_density", "loc", "complexity"]
        for i in range(60):
            g = goal(gid=f"g{i}", purpose=rng.choice(purposes),
                     focus=rng.sample(focus_pool, rng.randint(1, 3)))
            qs = [question(f"q{i}", f"g{i}", rng.sample(metric_pool, rng.randint(1, 6)))]
            matches = {g: match_components(g, qs, repo)}
            catena = compose_catena(matches, project(), set(metric_pool), qs)
            assert validate(catena) == []

    def test_every_view_traceable_to_exactly_one_goal(self):
        repo = load_repository()
        goals = [goal("g1", focus=("cost",)),
                 goal("g2", Purpose.MONITOR, ("quality",), "qa_manager")]
        qs = [question("q1", "g1", ("cost", "planned_cost", "pv", "ev", "ac")),
              question("q2", "g2", ("defect_density", "loc", "complexity"))]
        catena = compose_project(goals, qs, repo, project(),
                                 {"cost", "planned_cost", "pv", "ev", "ac",
                                  "defect_density", "loc", "complexity"})
        trace = catena.trace()
        for view in catena.views:
            assert trace[view.id] in {"g1", "g2"}
        assert len(catena.views) >= 2

    def test_identical_inputs_byte_identical_serialization(self):
        repo = load_repository()
        g = goal()
        qs = [question("q1", "g1", ("cost", "planned_cost"))]
        known = {"cost", "planned_cost"}
        a = compose_project([g], qs, repo, project(), known)
        b = compose_project([g], qs, repo, project(), known)
        assert a.to_json() == b.to_json()
        assert a.version() == b.version()

    def test_aggregate_techniques_consume_sibling_functions(self):
        repo = load_repository()
        g = goal(focus=("cost",))
        qs = [question("q1", "g1", ("cost", "planned_cost"))]
        catena = compose_project([g], qs, repo, project(), {"cost", "planned_cost"})
        aggregates = [f for f in catena.functions if f.technique == "aggregate"]
        assert aggregates
        tolerances = {f.id for f in catena.functions if f.technique == "tolerance"}
        assert set(aggregates[0].inputs) <= tolerances


class TestDefaultRepository:
    def test_at_least_seven_descriptors(self):
        repo = load_repository()
        assert len(repo) >= 7
        kinds = {d.kind for d in repo}
        assert kinds == {ComponentKind.TECHNIQUE, ComponentKind.VIEW}

    def test_expected_components_present(self):
        ids = {d.id for d in load_repository()}
        assert {"earned_value", "cost_tolerance", "defect_trend", "status_aggregation",
                "gantt_overview", "quality_treemap", "indicator_timeseries",
                "risk_bubbles", "fault_graph"} <= ids

    def test_checklists_have_exactly_five_entries(self):
        for d in load_repository():
            assert len(d.indicator_checklist) == 5

    def test_technique_required_metrics_non_empty(self):
        for d in load_repository():
            if d.kind == ComponentKind.TECHNIQUE:
                assert d.required_metrics
