"""HTTP facade over the control center: project lifecycle, ingestion,
composition, execution, scenes, deviations, postmortem, and packaging.

One app instance serves one data directory. GET endpoints are
side-effect-free; writes funnel through the per-project store lock.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from fastapi import Body, FastAPI, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import schemas
from .catena import GroundTruthIncident, VisualizationCatena, execute, postmortem, role_view
from .errors import NotFound, PlanInvalid, SpccError, StaleCatena
from .gqm import ControlGoal, Question, compose_project, load_repository
from .model import ContextVector, Project, Role, StatusColor, worst_status
from .scenes import build_scene
from .serialization import format_instant, parse_instant
from .store import ProjectStore, experience_base, package, _task_from_dict


def _status_code(exc: SpccError) -> int:
    if isinstance(exc, NotFound):
        return 404
    if isinstance(exc, StaleCatena):
        return 409
    return 422


def create_app(data_dir: str | Path, repo_file: Optional[str] = None) -> FastAPI:
    data_dir = Path(data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    app = FastAPI(title="spcc", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )

    @app.exception_handler(SpccError)
    async def spcc_error_handler(request: Request, exc: SpccError):
        detail = {"code": exc.code, "message": str(exc)}
        if isinstance(exc, PlanInvalid):
            detail["violations"] = [v.to_dict() for v in exc.violations]
        return JSONResponse(status_code=_status_code(exc), content={"detail": detail})

    def store_of(project_id: str) -> ProjectStore:
        return ProjectStore.open(data_dir, project_id)

    def repository():
        return load_repository(repo_file)

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/projects")
    def list_projects():
        return {"projects": ProjectStore.list_projects(data_dir)}

    @app.post("/projects", status_code=201)
    def create_project(req: schemas.ProjectCreate):
        project = Project(
            id=req.id, name=req.name, context=ContextVector(req.context),
            roles=tuple(Role(r.id, r.name) for r in req.roles),
        )
        ProjectStore.create(data_dir, project)
        return {"id": project.id}

    @app.get("/projects/{project_id}", response_model=schemas.ProjectInfo)
    def project_info(project_id: str):
        store = store_of(project_id)
        meta = store.meta()
        return schemas.ProjectInfo(
            id=meta["id"], name=meta["name"], context=meta["context"],
            roles=[schemas.RoleSpec(**r) for r in meta["roles"]],
            complete=meta["complete"], catena_version=store.catena_version(),
            goals=len(store.goals()), questions=len(store.questions()),
        )

    @app.post("/projects/{project_id}/plan")
    def upload_plan(project_id: str, req: schemas.PlanUpload):
        store = store_of(project_id)
        tasks = [_task_from_dict(t.model_dump()) for t in req.tasks]
        store.set_plan(tasks)
        return {"tasks": len(tasks)}

    @app.post("/projects/{project_id}/risks")
    async def upload_risks(project_id: str, request: Request):
        text = (await request.body()).decode("utf-8")
        return {"risks": store_of(project_id).ingest_risks_csv(text)}

    @app.post("/projects/{project_id}/traces", response_model=schemas.IngestResult)
    async def upload_traces(project_id: str, request: Request,
                            allow_self: bool = Query(default=False)):
        text = (await request.body()).decode("utf-8")
        report = store_of(project_id).ingest_traces_csv(text, allow_self=allow_self)
        return schemas.IngestResult(**report.to_dict())

    @app.post("/projects/{project_id}/clusters")
    def upload_clusters(project_id: str, req: schemas.ClustersUpload):
        store_of(project_id).set_clustering(req.clusters)
        return {"clusters": len(req.clusters)}

    @app.post("/projects/{project_id}/goals", status_code=201)
    def add_goal(project_id: str, req: schemas.GoalCreate):
        goal = ControlGoal(
            id=req.id, object=req.object, purpose=req.purpose,
            quality_focus=frozenset(req.quality_focus), viewpoint=req.viewpoint,
            context=ContextVector(req.context),
        )
        store_of(project_id).add_goal(goal)
        return {"id": goal.id}

    @app.post("/projects/{project_id}/questions", status_code=201)
    def add_question(project_id: str, req: schemas.QuestionCreate):
        question = Question(req.id, req.goal, req.text, frozenset(req.metrics))
        store_of(project_id).add_question(question)
        return {"id": question.id}

    @app.post("/projects/{project_id}/compose", response_model=schemas.ComposeResponse)
    def compose(project_id: str):
        store = store_of(project_id)
        project = store.project()
        goals = store.goals()
        questions = store.questions()
        base = experience_base(data_dir)
        catena = compose_project(
            goals, questions, repository(), project,
            known_metrics=store.known_metrics(),
            experience=base.lookup_value,
        )
        version = store.save_catena(catena)
        return schemas.ComposeResponse(
            catena_version=version,
            catena_hash=catena.version(),
            bindings=len(catena.bindings),
            functions=len(catena.functions),
            views=len(catena.views),
            traceability=catena.trace(),
            role_assignments={r: list(v) for r, v in catena.roles().items()},
        )

    @app.get("/projects/{project_id}/catena")
    def get_catena(project_id: str):
        store = store_of(project_id)
        catena = store.catena()
        if catena is None:
            raise NotFound(f"project {project_id!r} has no composed catena")
        return {"catena_version": store.catena_version(), "catena": catena.to_dict()}

    @app.post("/projects/{project_id}/data", response_model=schemas.IngestResult)
    async def ingest_data(project_id: str, request: Request):
        text = (await request.body()).decode("utf-8")
        report = store_of(project_id).ingest_csv(text)
        return schemas.IngestResult(**report.to_dict())

    @app.post("/projects/{project_id}/execute", response_model=schemas.ExecuteResponse)
    def execute_catena(project_id: str, as_of: str = Query(...),
                       req: Optional[schemas.ExecuteRequest] = Body(default=None)):
        store = store_of(project_id)
        catena = store.catena()
        if catena is None:
            raise NotFound(f"project {project_id!r} has no composed catena")
        if req and req.catena_version is not None and req.catena_version != store.catena_version():
            raise StaleCatena(
                f"requested catena version {req.catena_version}, current is {store.catena_version()}")
        with store.lock:
            result = execute(catena, store, parse_instant(as_of))
            store.record_execution(result)
        worst = worst_status(i.status for i in result.indicators)
        return schemas.ExecuteResponse(
            execution_id=result.execution_id,
            catena_version=result.catena_version,
            as_of=format_instant(result.as_of),
            worst_status=worst.name,
            indicators=[schemas.IndicatorOut(node=i.node, name=i.name, status=i.status.name,
                                             explanation=i.explanation)
                        for i in result.indicators],
            new_deviations=[schemas.DeviationOut(**d.to_dict()) for d in result.deviations],
            recoveries=[list(r) for r in result.recoveries],
        )

    def _execution_or_404(store: ProjectStore, as_of: Optional[str]):
        result = store.execution_for(as_of) if as_of else store.latest_execution()
        if result is None:
            raise NotFound("no execution recorded" + (f" for as_of {as_of}" if as_of else ""))
        return result

    @app.get("/projects/{project_id}/roles/{role_id}/views")
    def views_for_role(project_id: str, role_id: str, as_of: Optional[str] = Query(default=None)):
        store = store_of(project_id)
        catena = store.catena()
        if catena is None:
            raise NotFound(f"project {project_id!r} has no composed catena")
        result = _execution_or_404(store, as_of)
        ordered = role_view(result, catena, role_id)
        return {"views": [schemas.ViewSummary(view=v.view, kind=v.kind, status=v.status.name,
                                              contributing=list(v.contributing)).model_dump()
                          for v in ordered]}

    @app.get("/projects/{project_id}/scenes/{view_id}")
    def scene(project_id: str, view_id: str, as_of: Optional[str] = Query(default=None)):
        store = store_of(project_id)
        result = _execution_or_404(store, as_of)
        states = {vs.view: vs for vs in result.view_states}
        if view_id not in states:
            raise NotFound(f"unknown view {view_id!r}")
        doc = build_scene(states[view_id], result.execution_id, result.catena_version,
                          format_instant(result.as_of))
        return Response(content=doc.to_json(), media_type="application/json")

    @app.get("/projects/{project_id}/deviations")
    def deviations(project_id: str, since: Optional[str] = Query(default=None)):
        events = store_of(project_id).deviations(since)
        return {"deviations": [e.to_dict() for e in events]}

    @app.post("/deviations/{deviation_id}/ack", response_model=schemas.DeviationOut)
    def acknowledge(deviation_id: str, req: schemas.AckRequest):
        project_id = deviation_id.split(":", 1)[0]
        store = store_of(project_id)
        if req.role not in store.project().role_ids():
            raise NotFound(f"role {req.role!r} not declared in project {project_id!r}")
        event = store.acknowledge(deviation_id, req.role)
        return schemas.DeviationOut(**event.to_dict())

    @app.put("/projects/{project_id}/functions/{function_id}/params",
             response_model=schemas.ParamUpdateResponse)
    def update_params(project_id: str, function_id: str, req: schemas.ParamUpdate):
        store = store_of(project_id)
        catena = store.catena()
        if catena is None:
            raise NotFound(f"project {project_id!r} has no composed catena")
        by_id = {f.id: f for f in catena.functions}
        if function_id not in by_id:
            raise NotFound(f"unknown function {function_id!r}")
        from dataclasses import replace

        target = by_id[function_id]
        merged = dict(target.params)
        merged.update(req.params)
        functions = tuple(replace(f, parameters=tuple(sorted(merged.items())))
                          if f.id == function_id else f
                          for f in catena.functions)
        version = store.save_catena(replace(catena, functions=functions))
        return schemas.ParamUpdateResponse(
            function=function_id, params=merged,
            catena_version=version, reexecution_required=True,
        )

    @app.put("/projects/{project_id}/views/{view_id}/options",
             response_model=schemas.ViewOptionsResponse)
    def update_view_options(project_id: str, view_id: str, req: schemas.ParamUpdate):
        store = store_of(project_id)
        catena = store.catena()
        if catena is None:
            raise NotFound(f"project {project_id!r} has no composed catena")
        by_id = {v.id: v for v in catena.views}
        if view_id not in by_id:
            raise NotFound(f"unknown view {view_id!r}")
        from dataclasses import replace

        merged = dict(by_id[view_id].opts)
        merged.update(req.params)
        views = tuple(replace(v, options=tuple(sorted(merged.items()))) if v.id == view_id else v
                      for v in catena.views)
        version = store.save_catena(replace(catena, views=views))
        return schemas.ViewOptionsResponse(
            view=view_id, options=merged,
            catena_version=version, reexecution_required=True,
        )

    @app.post("/projects/{project_id}/complete")
    def mark_complete(project_id: str):
        store_of(project_id).set_complete(True)
        return {"complete": True}

    @app.post("/projects/{project_id}/postmortem", response_model=schemas.PostmortemResponse)
    def run_postmortem(project_id: str, req: schemas.PostmortemRequest):
        store = store_of(project_id)
        incidents = [GroundTruthIncident(i.id, i.node, parse_instant(i.start),
                                         parse_instant(i.detected_deadline))
                     for i in req.incidents]
        report = postmortem(store.deviations(), incidents)
        store.save_postmortem(report, incidents)
        return schemas.PostmortemResponse(**report.to_dict())

    @app.post("/projects/{project_id}/package", response_model=schemas.PackageResponse)
    def run_package(project_id: str, req: Optional[schemas.PackageRequest] = Body(default=None)):
        store = store_of(project_id)
        req = req or schemas.PackageRequest()
        stored = store.postmortem()
        report, incidents = stored if stored else (postmortem(store.deviations(), []), [])
        records = package(store, report, incidents,
                          feedback=[f.model_dump() for f in req.feedback],
                          tighten_factor=req.tighten_factor)
        return schemas.PackageResponse(records=[
            schemas.ExperienceOut(kind=r.kind.value, key=r.key, value=r.value,
                                  source_project=r.source_project,
                                  created=format_instant(r.created))
            for r in records
        ])

    return app
