"""Command-line driver: a thin client over the HTTP facade.

Without --server the app runs in-process against --data-dir, so every
command still exercises the same endpoints a remote cockpit would hit.
Exit codes for `spcc run`: 0 all green, 1 yellow present, 2 red present.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx

from .layouts import SceneDocument, SceneKind
from .serialization import canonical_json
from .svg import scene_to_svg

FORMATS = ("TEXT", "STRUCTURED", "SVG")
EXIT_BY_STATUS = {"NO_DATA": 0, "GREEN": 0, "YELLOW": 1, "RED": 2}


class Client:
    """HTTP client over a remote server or an in-process app."""

    def __init__(self, data_dir: str, repo: str | None, server: str | None):
        if server:
            self._client = httpx.Client(base_url=server, timeout=30.0)
        else:
            from starlette.testclient import TestClient

            from .service import create_app

            self._client = TestClient(create_app(data_dir, repo))

    def call(self, method: str, path: str, **kw):
        response = self._client.request(method, path, **kw)
        if response.status_code >= 400:
            try:
                detail = response.json().get("detail")
            except Exception:
                detail = response.text
            if isinstance(detail, dict):
                message = detail.get("message", str(detail))
            else:
                message = str(detail)
            raise click.ClickException(f"[{response.status_code}] {message}")
        return response


def emit(ctx, payload: dict, text_lines) -> None:
    if ctx.obj["format"] == "STRUCTURED":
        click.echo(canonical_json(payload))
    else:
        for line in text_lines:
            click.echo(line)


def parse_kv(pairs) -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise click.ClickException(f"expected key=value, got {pair!r}")
        k, v = pair.split("=", 1)
        out[k] = v
    return out


@click.group()
@click.option("--data-dir", envvar="SPCC_DATA_DIR", default="./spcc-data", show_default=True,
              help="Data directory for the in-process service.")
@click.option("--repo", envvar="SPCC_REPO", default=None,
              help="Component repository file (default: packaged repository).")
@click.option("--server", envvar="SPCC_SERVER", default=None,
              help="Base URL of a running service; omit to run in-process.")
@click.option("--format", "output_format", type=click.Choice(FORMATS), default="TEXT",
              show_default=True)
@click.pass_context
def main(ctx, data_dir, repo, server, output_format):
    """Software project control center."""
    ctx.obj = {
        "data_dir": data_dir,
        "repo": repo,
        "server": server,
        "format": output_format,
        "client": Client(data_dir, repo, server),
    }


@main.command()
@click.argument("project_id")
@click.option("--name", default=None)
@click.option("--context", "context_pairs", multiple=True, help="Context attribute key=value.")
@click.option("--role", "role_pairs", multiple=True, help="Role id=display name.")
@click.pass_context
def init(ctx, project_id, name, context_pairs, role_pairs):
    """Create a project with its context vector and roles."""
    roles = [{"id": k, "name": v} for k, v in parse_kv(role_pairs).items()]
    body = {"id": project_id, "name": name or project_id,
            "context": parse_kv(context_pairs), "roles": roles}
    ctx.obj["client"].call("POST", "/projects", json=body)
    emit(ctx, body, [f"created project {project_id}"])


@main.group()
def goal():
    """Control goal commands."""


@goal.command("add")
@click.argument("goal_id")
@click.option("--project", "-p", required=True)
@click.option("--object", "object_", required=True, help="Measured process or product.")
@click.option("--purpose", type=click.Choice(["CHARACTERIZE", "MONITOR", "CONTROL", "PREDICT", "IMPROVE"]),
              required=True)
@click.option("--focus", required=True, help="Comma-separated quality focus tags.")
@click.option("--viewpoint", required=True, help="Role id.")
@click.option("--context", "context_pairs", multiple=True)
@click.pass_context
def goal_add(ctx, goal_id, project, object_, purpose, focus, viewpoint, context_pairs):
    body = {"id": goal_id, "object": object_, "purpose": purpose,
            "quality_focus": [f.strip() for f in focus.split(",") if f.strip()],
            "viewpoint": viewpoint, "context": parse_kv(context_pairs)}
    ctx.obj["client"].call("POST", f"/projects/{project}/goals", json=body)
    emit(ctx, body, [f"added goal {goal_id}"])


@main.group()
def question():
    """GQM question commands."""


@question.command("add")
@click.argument("question_id")
@click.option("--project", "-p", required=True)
@click.option("--goal", required=True)
@click.option("--text", default="")
@click.option("--metrics", required=True, help="Comma-separated metric ids.")
@click.pass_context
def question_add(ctx, question_id, project, goal, text, metrics):
    body = {"id": question_id, "goal": goal, "text": text,
            "metrics": [m.strip() for m in metrics.split(",") if m.strip()]}
    ctx.obj["client"].call("POST", f"/projects/{project}/questions", json=body)
    emit(ctx, body, [f"added question {question_id}"])


@main.command()
@click.option("--project", "-p", required=True)
@click.pass_context
def compose(ctx, project):
    """Compose the visualization catena from goals and the repository."""
    doc = ctx.obj["client"].call("POST", f"/projects/{project}/compose").json()
    lines = [
        f"catena v{doc['catena_version']} ({doc['catena_hash']}): "
        f"{doc['bindings']} bindings, {doc['functions']} functions, {doc['views']} views",
        "traceability:",
    ]
    lines += [f"  {node} -> {goal_id}" for node, goal_id in sorted(doc["traceability"].items())]
    lines += [f"role {r}: {', '.join(v)}" for r, v in sorted(doc["role_assignments"].items())]
    emit(ctx, doc, lines)


def _sniff_kind(path: Path, text: str) -> str:
    if path.suffix == ".json":
        doc = json.loads(text)
        if "tasks" in doc:
            return "plan"
        if "clusters" in doc:
            return "clusters"
        raise click.ClickException(f"cannot infer kind of {path.name}; use --kind")
    header = text.splitlines()[0].strip().lower() if text.strip() else ""
    if header.startswith("metric,"):
        return "measurements"
    if header.startswith("id,"):
        return "risks"
    if header.startswith("timestamp,"):
        return "traces"
    raise click.ClickException(f"cannot infer kind of {path.name}; use --kind")


@main.command()
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@click.option("--project", "-p", required=True)
@click.option("--kind", type=click.Choice(["measurements", "plan", "risks", "traces", "clusters"]),
              default=None, help="File kind (default: inferred from header/extension).")
@click.pass_context
def ingest(ctx, file, project, kind):
    """Ingest a measurements/plan/risks/traces/clusters file."""
    text = file.read_text(encoding="utf-8")
    kind = kind or _sniff_kind(file, text)
    client = ctx.obj["client"]
    if kind == "measurements":
        doc = client.call("POST", f"/projects/{project}/data", content=text.encode()).json()
        emit(ctx, doc, [f"accepted {doc['accepted']}, rejected {len(doc['rejected'])}"]
             + [f"  line {r['line']}: {r['reason']}" for r in doc["rejected"]])
    elif kind == "plan":
        doc = client.call("POST", f"/projects/{project}/plan", json=json.loads(text)).json()
        emit(ctx, doc, [f"plan loaded: {doc['tasks']} tasks"])
    elif kind == "risks":
        doc = client.call("POST", f"/projects/{project}/risks", content=text.encode()).json()
        emit(ctx, doc, [f"risk register loaded: {doc['risks']} risks"])
    elif kind == "clusters":
        doc = client.call("POST", f"/projects/{project}/clusters", json=json.loads(text)).json()
        emit(ctx, doc, [f"clustering loaded: {doc['clusters']} components"])
    else:
        doc = client.call("POST", f"/projects/{project}/traces", content=text.encode()).json()
        emit(ctx, doc, [f"accepted {doc['accepted']}, rejected {len(doc['rejected'])}"])


@main.command()
@click.option("--project", "-p", required=True)
@click.option("--as-of", required=True, help="Execution instant (ISO-8601).")
@click.option("--catena-version", type=int, default=None,
              help="Fail with a conflict if the current catena is newer.")
@click.pass_context
def run(ctx, project, as_of, catena_version):
    """Execute the catena; exit 0/1/2 for green/yellow/red."""
    body = {"catena_version": catena_version} if catena_version is not None else None
    doc = ctx.obj["client"].call(
        "POST", f"/projects/{project}/execute", params={"as_of": as_of}, json=body).json()
    lines = [f"{i['status']:>7}  {i['node']}  {i['explanation']}" for i in doc["indicators"]]
    for d in doc["new_deviations"]:
        lines.append(f"DEVIATION {d['severity']} {d['id']}: {d['message']}")
    for node, old, new in doc["recoveries"]:
        lines.append(f"recovered {node}: {old} -> {new}")
    lines.append(f"worst: {doc['worst_status']}")
    emit(ctx, doc, lines)
    sys.exit(EXIT_BY_STATUS[doc["worst_status"]])


@main.command()
@click.option("--project", "-p", required=True)
@click.option("--role", required=True)
@click.option("--as-of", default=None)
@click.pass_context
def views(ctx, project, role, as_of):
    """List the role's views, most severe first."""
    params = {"as_of": as_of} if as_of else {}
    doc = ctx.obj["client"].call("GET", f"/projects/{project}/roles/{role}/views", params=params).json()
    emit(ctx, doc, [f"{v['status']:>7}  {v['view']} ({v['kind']})" for v in doc["views"]])


@main.command()
@click.argument("view")
@click.option("--project", "-p", required=True)
@click.option("--as-of", default=None)
@click.option("--out", type=click.Path(path_type=Path), default=None)
@click.option("--format", "output_format", type=click.Choice(FORMATS), default=None,
              help="Overrides the global --format for this export.")
@click.pass_context
def scene(ctx, view, project, as_of, out, output_format):
    """Export one view's scene document (SVG for 2D kinds)."""
    params = {"as_of": as_of} if as_of else {}
    response = ctx.obj["client"].call("GET", f"/projects/{project}/scenes/{view}", params=params)
    payload = response.text
    if (output_format or ctx.obj["format"]) == "SVG":
        doc = SceneDocument.from_dict(json.loads(payload))
        if doc.kind not in SceneKind.FLAT:
            raise click.ClickException(
                f"{doc.kind} scenes have no SVG export; use --format STRUCTURED")
        payload = scene_to_svg(doc)
    if out:
        out.write_text(payload, encoding="utf-8")
        click.echo(f"wrote {out}")
    else:
        click.echo(payload)


@main.command()
@click.option("--project", "-p", required=True)
@click.option("--since", default=None)
@click.pass_context
def deviations(ctx, project, since):
    """List deviation events."""
    params = {"since": since} if since else {}
    doc = ctx.obj["client"].call("GET", f"/projects/{project}/deviations", params=params).json()
    lines = [f"{d['severity']:>7}  {d['timestamp']}  {d['id']}"
             f"{'  (ack by ' + d['acknowledged_by'] + ')' if d['acknowledged'] else ''}"
             for d in doc["deviations"]]
    emit(ctx, doc, lines or ["no deviations"])


@main.command()
@click.argument("deviation_id")
@click.option("--role", required=True)
@click.pass_context
def ack(ctx, deviation_id, role):
    """Acknowledge a deviation event."""
    doc = ctx.obj["client"].call("POST", f"/deviations/{deviation_id}/ack", json={"role": role}).json()
    emit(ctx, doc, [f"acknowledged {deviation_id} as {role}"])


@main.group()
def param():
    """Function parameter steering."""


@param.command("set")
@click.argument("function_id")
@click.argument("pairs", nargs=-1, required=True)
@click.option("--project", "-p", required=True)
@click.pass_context
def param_set(ctx, function_id, pairs, project):
    """Update function parameters (values parsed as JSON when possible)."""
    params = {}
    for k, v in parse_kv(pairs).items():
        try:
            params[k] = json.loads(v)
        except json.JSONDecodeError:
            params[k] = v
    doc = ctx.obj["client"].call(
        "PUT", f"/projects/{project}/functions/{function_id}/params", json={"params": params}).json()
    emit(ctx, doc, [f"catena v{doc['catena_version']}: {function_id} updated; re-execution required"])


@main.command()
@click.argument("incidents_file", type=click.Path(exists=True, path_type=Path))
@click.option("--project", "-p", required=True)
@click.pass_context
def postmortem(ctx, incidents_file, project):
    """Classify incidents against the recorded deviation stream."""
    body = json.loads(incidents_file.read_text(encoding="utf-8"))
    doc = ctx.obj["client"].call("POST", f"/projects/{project}/postmortem", json=body).json()
    counts = doc["counts"]
    emit(ctx, doc, [
        f"in time: {counts['in_time']}  too late: {counts['too_late']}  "
        f"missed: {counts['missed']}  false positives: {counts['false_positives']}",
    ])


@main.command()
@click.option("--project", "-p", required=True)
@click.option("--complete", is_flag=True, help="Mark the project complete first.")
@click.option("--feedback", "feedback_pairs", multiple=True, help="Stakeholder feedback key=value.")
@click.pass_context
def package(ctx, project, complete, feedback_pairs):
    """Distill the finished project into experience records."""
    client = ctx.obj["client"]
    if complete:
        client.call("POST", f"/projects/{project}/complete")
    body = {"feedback": [{"key": k, "value": v} for k, v in parse_kv(feedback_pairs).items()]}
    doc = client.call("POST", f"/projects/{project}/package", json=body).json()
    lines = [f"{r['kind']:>9}  {r['key']} = {r['value']}" for r in doc["records"]]
    emit(ctx, doc, lines or ["nothing to package"])


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.pass_context
def serve(ctx, host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(ctx.obj["data_dir"], ctx.obj["repo"]), host=host, port=port)


if __name__ == "__main__":
    main()
