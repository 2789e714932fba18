"""Session-scoped HTTP backend: palette, NL/keyword query, pipeline runs.

Endpoints (UTF-8 JSON):
    POST /sessions {"dataset", "mode", "seed"?}
    GET  /sessions/{id}/palette
    POST /sessions/{id}/query {"text"}
    POST /sessions/{id}/palette/reset
    PUT  /sessions/{id}/pipeline {block-graph wire form}
    GET  /operators/{name}

Every graph mutation executes the pipeline in the same request and returns
the run result (liveness); errors use {"error": {"code", "message"}}.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import dsl
from .dsl import BlockGraph, Diagnostic, ERROR, Invocation, blocks_to_pipeline, graph_from_json, graph_to_json, pipeline_to_blocks
from .engine import Dataset, RunResult, load_dataset, preview, run_pipeline, table_to_json
from .registry import Registry
from .resolver import Prediction, ResolverIndex, predict, keyword_mode

NL_MODE, KEYWORD_MODE = "nl", "keyword"
RUN_TIMEOUT_SECONDS = 30.0
PREDICT_N = 5


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, location: str | None = None):
        self.status, self.code, self.location = status, code, location
        super().__init__(message)

    def body(self) -> dict:
        err: dict = {"code": self.code, "message": str(self)}
        if self.location:
            err["location"] = self.location
        return {"error": err}


@dataclass
class Session:
    id: str
    dataset: Dataset
    mode: str
    seed: int
    graph: BlockGraph = field(default_factory=BlockGraph)
    palette_filter: list[str] | None = None
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class Studio:
    """Shared state behind the HTTP surface: registry, index, datasets, sessions."""

    def __init__(self, registry: Registry, index: ResolverIndex, data_dir: str | Path,
                 snapshot_dir: str | Path | None = None, query_log: str | Path | None = None,
                 run_timeout: float = RUN_TIMEOUT_SECONDS):
        self.registry = registry
        self.index = index
        self.data_dir = Path(data_dir)
        self.snapshot_dir = Path(snapshot_dir) if snapshot_dir else None
        self.query_log = Path(query_log) if query_log else None
        self.run_timeout = run_timeout
        self.sessions: dict[str, Session] = {}
        self._sessions_lock = threading.Lock()
        if self.snapshot_dir:
            self.snapshot_dir.mkdir(parents=True, exist_ok=True)
            self._restore_snapshots()

    # -- session plumbing ---------------------------------------------------

    def create_session(self, dataset_name: str, mode: str, seed: int = 0) -> Session:
        if mode not in (NL_MODE, KEYWORD_MODE):
            raise ApiError(400, "bad-mode", f"mode must be {NL_MODE!r} or {KEYWORD_MODE!r}")
        try:
            dataset = load_dataset(self.data_dir, dataset_name)
        except Exception as exc:
            raise ApiError(404, "unknown-dataset", f"no dataset {dataset_name!r}: {exc}") from exc
        session = Session(id=uuid.uuid4().hex, dataset=dataset, mode=mode, seed=seed)
        with self._sessions_lock:
            self.sessions[session.id] = session
        self._snapshot(session)
        return session

    def session(self, session_id: str) -> Session:
        with self._sessions_lock:
            session = self.sessions.get(session_id)
        if session is None:
            raise ApiError(404, "unknown-session", f"no session {session_id!r}")
        return session

    def _snapshot(self, session: Session) -> None:
        if not self.snapshot_dir:
            return
        doc = {
            "id": session.id,
            "dataset": session.dataset.name,
            "mode": session.mode,
            "seed": session.seed,
            "graph": graph_to_json(session.graph),
            "palette_filter": session.palette_filter,
        }
        (self.snapshot_dir / f"{session.id}.json").write_text(
            json.dumps(doc, indent=2) + "\n", encoding="utf-8"
        )

    def _restore_snapshots(self) -> None:
        for path in sorted(self.snapshot_dir.glob("*.json")):
            try:
                doc = json.loads(path.read_text(encoding="utf-8"))
                dataset = load_dataset(self.data_dir, doc["dataset"])
                session = Session(
                    id=doc["id"], dataset=dataset, mode=doc["mode"], seed=int(doc.get("seed", 0)),
                    graph=graph_from_json(doc["graph"]), palette_filter=doc.get("palette_filter"),
                )
                self.sessions[session.id] = session
            except Exception:
                continue  # stale snapshots never block startup

    def _log_query(self, session: Session, text: str) -> None:
        if not self.query_log:
            return
        entry = {"session": session.id, "mode": session.mode, "text": text}
        with self.query_log.open("a", encoding="utf-8") as f:
            f.write(json.dumps(entry, ensure_ascii=False) + "\n")

    # -- behavior -----------------------------------------------------------

    def palette(self, session: Session) -> list[dict]:
        if session.palette_filter is None:
            specs = self.registry.specs()
        else:
            specs = [self.registry.lookup(name) for name in session.palette_filter]
            specs = [s for s in specs if s is not None]
        return [{"name": s.name, "kind": s.kind, "executable": s.executable} for s in specs]

    def _timed_run(self, session: Session, ast) -> RunResult:
        result: dict = {}

        def work():
            result["run"] = run_pipeline(session.dataset, ast, self.registry, seed=session.seed)

        worker = threading.Thread(target=work, daemon=True)
        worker.start()
        worker.join(self.run_timeout)
        if worker.is_alive() or "run" not in result:
            before = preview(session.dataset.train, 50)
            return RunResult(before, before, None, [
                Diagnostic(ERROR, "timeout", f"pipeline run exceeded {self.run_timeout:.0f}s"),
            ])
        return result["run"]

    def _appendable(self, invocation: Invocation) -> Invocation:
        """Concrete block form of a candidate: MASK slots become schema defaults.

        Arguments with no schema backing (positional, unknown names, bare
        identifiers) are dropped; the engine cannot run them and the block
        pane cannot edit them.
        """
        spec = self.registry.lookup(invocation.operator)
        args = []
        for arg in invocation.args:
            if arg.positional or arg.value.kind == "expr":
                continue
            pspec = spec.param(arg.name) if spec else None
            if pspec is None:
                continue
            if arg.value.is_mask:
                args.append(dsl.Arg(arg.name, dsl.value_of(pspec.default)))
            else:
                args.append(arg)
        return Invocation(invocation.operator, tuple(args))

    def query(self, session: Session, text: str) -> dict:
        with session.lock:
            if not text.strip():
                return {"mode": session.mode, "prediction": Prediction().to_json(),
                        "operators": [], "graph": graph_to_json(session.graph), "run": None}
            self._log_query(session, text)
            if session.mode == KEYWORD_MODE:
                names = keyword_mode(self.registry, text)
                session.palette_filter = names
                self._snapshot(session)
                return {"mode": session.mode, "operators": names}
            prediction = predict(self.index, text, n=PREDICT_N)
            if not prediction.candidates:
                return {"mode": session.mode, "prediction": prediction.to_json(),
                        "graph": graph_to_json(session.graph), "run": None}
            ast = blocks_to_pipeline(session.graph)
            appended = dsl.PipelineAst(ast.steps + (self._appendable(prediction.auto_append),))
            session.graph = pipeline_to_blocks(appended, session.graph)
            session.palette_filter = [
                name for name in prediction.relevant_operators if name in self.registry
            ]
            run = self._timed_run(session, blocks_to_pipeline(session.graph))
            self._snapshot(session)
            return {
                "mode": session.mode,
                "prediction": prediction.to_json(),
                "graph": graph_to_json(session.graph),
                "run": run.to_json(),
            }

    def reset_palette(self, session: Session) -> list[dict]:
        with session.lock:
            session.palette_filter = None
            self._snapshot(session)
            return self.palette(session)

    def put_pipeline(self, session: Session, wire: dict) -> dict:
        with session.lock:
            try:
                graph = graph_from_json(wire)
            except ValueError as exc:
                raise ApiError(400, "malformed-graph", str(exc)) from exc
            try:
                ast = blocks_to_pipeline(graph)
            except dsl.DanglingBlockError as exc:
                raise ApiError(400, "malformed-graph", str(exc)) from exc
            session.graph = graph
            diagnostics = dsl.validate_pipeline(ast, self.registry)
            run = None
            if not dsl.has_errors(diagnostics):
                run = self._timed_run(session, ast)
            self._snapshot(session)
            return {
                "diagnostics": [d.to_json() for d in diagnostics],
                "run": run.to_json() if run else None,
            }

    def operator_schema(self, name: str) -> dict:
        spec = self.registry.lookup(name)
        if spec is None:
            raise ApiError(404, "unknown-operator", f"no operator {name!r}")
        params = []
        for p in spec.hyperparams:
            doc: dict = {
                "name": p.name, "description": p.description,
                "type": p.value_kind, "default": p.default,
            }
            if p.min is not None:
                doc["min"] = p.min
            if p.max is not None:
                doc["max"] = p.max
            if p.choices:
                doc["choices"] = list(p.choices)
            if p.nullable:
                doc["nullable"] = True
            params.append(doc)
        return {
            "name": spec.name, "kind": spec.kind, "summary": spec.summary,
            "executable": spec.executable, "hyperparams": params,
        }


def create_app(studio: Studio) -> FastAPI:
    app = FastAPI(title="pipestudio", docs_url=None, redoc_url=None)
    app.state.studio = studio

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.body())

    async def _body(request: Request) -> dict:
        try:
            doc = await request.json()
        except Exception as exc:
            raise ApiError(400, "malformed-json", f"request body is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ApiError(400, "malformed-json", "request body must be a JSON object")
        return doc

    @app.post("/sessions")
    async def create_session(request: Request):
        doc = await _body(request)
        if "dataset" not in doc or "mode" not in doc:
            raise ApiError(400, "missing-field", 'body needs "dataset" and "mode"')
        session = studio.create_session(str(doc["dataset"]), str(doc["mode"]), int(doc.get("seed", 0)))
        return {
            "session_id": session.id,
            "dataset": session.dataset.name,
            "mode": session.mode,
            "seed": session.seed,
            "before": table_to_json(preview(session.dataset.train, 50)),
        }

    @app.get("/sessions/{session_id}/palette")
    async def get_palette(session_id: str):
        session = studio.session(session_id)
        return {"operators": studio.palette(session), "filtered": session.palette_filter is not None}

    @app.post("/sessions/{session_id}/query")
    async def post_query(session_id: str, request: Request):
        session = studio.session(session_id)
        doc = await _body(request)
        return studio.query(session, str(doc.get("text", "")))

    @app.post("/sessions/{session_id}/palette/reset")
    async def reset_palette(session_id: str):
        session = studio.session(session_id)
        return {"operators": studio.reset_palette(session), "filtered": False}

    @app.put("/sessions/{session_id}/pipeline")
    async def put_pipeline(session_id: str, request: Request):
        session = studio.session(session_id)
        return studio.put_pipeline(session, await _body(request))

    @app.get("/operators/{name}")
    async def get_operator(name: str):
        return studio.operator_schema(name)

    return app
