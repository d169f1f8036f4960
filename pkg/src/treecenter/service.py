"""HTTP service exposing the pipeline session by session.

A session holds an ordered list of member trees plus a small config (delta,
lambda, steps, agreement mode).  Computing the center always starts from the
stored members, so any sequence of edits followed by a recompute gives the
same answer as a fresh session with the final state.  Sessions live in
memory, optionally mirrored to a directory as one document per member.

Error mapping: malformed documents and bad values give 400, unknown sessions
or member indices give 404, and label-domain or embedding problems give 409
with a remediation hint.
"""

from __future__ import annotations

import json
import shutil
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Body, FastAPI, Request
from fastapi.responses import JSONResponse

from .center import CenterResult, ensemble_summary, one_center_tree
from .consistency import consistency_report
from .documents import (
    center_to_doc,
    consistency_to_doc,
    doc_to_tree,
    dump_json,
    geodesic_to_doc,
    tree_to_doc,
)
from .errors import (
    AgreementError,
    ConfigurationError,
    InputError,
    PivotError,
    TreeToolkitError,
)
from .geodesic import (
    GeodesicFrame,
    GeodesicPath,
    center_embedding,
    geodesic_frames,
    linear_embedding_frames,
)
from .labeling import RelabelReport, complete_internal_labels, harmonize
from .trees import Ensemble, LabeledMergeTree

DEFAULT_CONFIG = {"delta": 0.05, "lambda": 1.0, "steps": 10, "mode": "auto"}
MODES = ("auto", "full", "partial", "disagree")


@dataclass
class Session:
    id: str
    members: list[LabeledMergeTree] = field(default_factory=list)
    config: dict = field(default_factory=lambda: dict(DEFAULT_CONFIG))
    lock: threading.Lock = field(default_factory=threading.Lock)
    result: CenterResult | None = None
    reports: list[RelabelReport] = field(default_factory=list)
    completed: Ensemble | None = None
    center: LabeledMergeTree | None = None


def _check_config(cfg: dict) -> dict:
    out = dict(cfg)
    delta = out.get("delta")
    if not isinstance(delta, (int, float)) or isinstance(delta, bool) or delta <= 0:
        raise InputError("config.delta must be a positive number")
    lam = out.get("lambda")
    if not isinstance(lam, (int, float)) or isinstance(lam, bool) or not 0 <= lam <= 1:
        raise InputError("config.lambda must lie in [0, 1]")
    steps = out.get("steps")
    if not isinstance(steps, int) or isinstance(steps, bool) or steps < 2:
        raise InputError("config.steps must be an integer of at least 2")
    if out.get("mode") not in MODES:
        raise InputError(f"config.mode must be one of {', '.join(MODES)}")
    return out


def build_app(state_dir: str | None = None, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="treecenter", docs_url=None, redoc_url=None)
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()
    root = Path(state_dir) if state_dir else None

    def persist(s: Session) -> None:
        if root is None:
            return
        d = root / s.id
        if d.exists():
            shutil.rmtree(d)
        d.mkdir(parents=True)
        (d / "config.json").write_text(dump_json({"config": s.config}))
        for i, m in enumerate(s.members):
            (d / f"member_{i}.json").write_text(dump_json(tree_to_doc(m)))

    def forget(s: Session) -> None:
        if root is not None and (root / s.id).exists():
            shutil.rmtree(root / s.id)

    if root is not None and root.exists():
        for d in sorted(root.iterdir()):
            if not d.is_dir():
                continue
            s = Session(id=d.name)
            cfg_file = d / "config.json"
            if cfg_file.exists():
                try:
                    s.config = _check_config(
                        json.loads(cfg_file.read_text()).get("config", {})
                    )
                except (json.JSONDecodeError, TreeToolkitError):
                    s.config = dict(DEFAULT_CONFIG)
            for f in sorted(
                d.glob("member_*.json"), key=lambda p: int(p.stem.split("_")[1])
            ):
                s.members.append(doc_to_tree(json.loads(f.read_text())))
            sessions[s.id] = s

    @app.exception_handler(TreeToolkitError)
    async def _on_error(request: Request, exc: TreeToolkitError):
        if isinstance(exc, (AgreementError, ConfigurationError, PivotError)):
            body = {
                "error": type(exc).__name__,
                "message": str(exc),
                "hint": "run relabel: recompute the center with mode partial or disagree",
            }
            return JSONResponse(status_code=409, content=body)
        return JSONResponse(
            status_code=400,
            content={"error": type(exc).__name__, "message": str(exc)},
        )

    # A missing session is a 404, not a toolkit error, so raise HTTP directly.
    from fastapi import HTTPException

    def session_or_404(sid: str) -> Session:
        s = sessions.get(sid)
        if s is None:
            raise HTTPException(status_code=404, detail=f"no session {sid}")
        return s

    def member_or_404(s: Session, k: int) -> LabeledMergeTree:
        if not 0 <= k < len(s.members):
            raise HTTPException(status_code=404, detail=f"no member {k}")
        return s.members[k]

    @app.post("/sessions")
    def create_session(payload: dict | None = Body(default=None)):
        s = Session(id=uuid.uuid4().hex[:12])
        if payload and "config" in payload:
            cfg = dict(DEFAULT_CONFIG)
            cfg.update(payload["config"])
            s.config = _check_config(cfg)
        with registry_lock:
            sessions[s.id] = s
        persist(s)
        return {"id": s.id, "config": s.config}

    @app.get("/sessions/{sid}")
    def get_state(sid: str):
        s = session_or_404(sid)
        with s.lock:
            return {
                "id": s.id,
                "config": s.config,
                "members": [tree_to_doc(m) for m in s.members],
                "has_center": s.result is not None,
            }

    @app.delete("/sessions/{sid}")
    def delete_session(sid: str):
        s = session_or_404(sid)
        with registry_lock:
            sessions.pop(sid, None)
        forget(s)
        return {"deleted": sid}

    @app.post("/sessions/{sid}/trees")
    def add_tree(sid: str, payload: dict = Body(...)):
        s = session_or_404(sid)
        tree = doc_to_tree(payload)
        with s.lock:
            s.members.append(tree)
            s.result = None
            persist(s)
            return {"index": len(s.members) - 1, "count": len(s.members)}

    @app.put("/sessions/{sid}/trees/{k}")
    def replace_tree(sid: str, k: int, payload: dict = Body(...)):
        s = session_or_404(sid)
        tree = doc_to_tree(payload)
        with s.lock:
            member_or_404(s, k)
            s.members[k] = tree
            s.result = None
            persist(s)
            return {"index": k}

    @app.put("/sessions/{sid}/config")
    def set_config(sid: str, payload: dict = Body(...)):
        s = session_or_404(sid)
        with s.lock:
            cfg = dict(s.config)
            cfg.update(payload)
            s.config = _check_config(cfg)
            s.result = None
            persist(s)
            return {"config": s.config}

    def recompute(s: Session) -> dict:
        if not s.members:
            raise InputError("session has no members yet")
        ensemble = Ensemble(list(s.members))
        mode = s.config["mode"]
        lam = s.config["lambda"]
        reports: list[RelabelReport] = []
        if mode == "full" or (mode == "auto" and ensemble.agreement == "full"):
            if ensemble.agreement != "full":
                raise AgreementError(
                    "members carry different label domains; set mode to partial or disagree"
                )
        else:
            ensemble, reports = harmonize(ensemble, lam)
        result = one_center_tree(ensemble)
        completed, center, _ = complete_internal_labels(ensemble, result.center, lam)
        s.result = result
        s.reports = reports
        s.completed = completed
        s.center = center
        return center_to_doc(result, ensemble_summary(result), reports or None)

    @app.post("/sessions/{sid}/center")
    def compute_center(sid: str):
        s = session_or_404(sid)
        with s.lock:
            return recompute(s)

    def _need_center(s: Session) -> None:
        if s.result is None or s.completed is None or s.center is None:
            raise HTTPException(
                status_code=409,
                detail="no center computed yet; POST center first",
            )

    @app.get("/sessions/{sid}/consistency")
    def get_consistency(
        sid: str, delta: float | None = None, g: float = 1.0
    ):
        s = session_or_404(sid)
        with s.lock:
            _need_center(s)
            d = delta if delta is not None else s.config["delta"]
            report = consistency_report(
                s.center, s.completed.members, d, s.config["lambda"], g
            )
            return consistency_to_doc(report)

    @app.post("/sessions/{sid}/geodesic")
    def compute_geodesic(
        sid: str,
        member: int = 0,
        steps: int | None = None,
        mode: str = "geodesic",
        with_consistency: bool = False,
    ):
        s = session_or_404(sid)
        with s.lock:
            _need_center(s)
            member_or_404(s, member)
            n = steps if steps is not None else s.config["steps"]
            if n < 2:
                raise InputError("steps must be at least 2")
            source = s.completed.members[member]
            if mode == "geodesic":
                path = geodesic_frames(
                    source,
                    s.center,
                    n,
                    with_consistency=with_consistency,
                    delta=s.config["delta"],
                )
                return geodesic_to_doc(path)
            if mode == "linear":
                target = s.center
                if target.embedding is None:
                    coords = center_embedding(target, s.completed.members)
                    target = LabeledMergeTree(target.tree, target.labeling, coords)
                frames = linear_embedding_frames(source, target, n)
                path = GeodesicPath(
                    source=source,
                    target=target,
                    steps=n,
                    frames=[
                        GeodesicFrame(lam=k / (n - 1), tree=t)
                        for k, t in enumerate(frames)
                    ],
                )
                return geodesic_to_doc(path)
            raise InputError(f"mode must be geodesic or linear, not {mode!r}")

    @app.get("/sessions/{sid}/summary")
    def get_summary(sid: str):
        s = session_or_404(sid)
        with s.lock:
            _need_center(s)
            summary = ensemble_summary(s.result)
            return {
                "radius": summary.radius,
                "links": [
                    {"member": i, "distance": d, "normalized": n}
                    for i, d, n in summary.links
                ],
            }

    @app.get("/sessions/{sid}/embedding")
    def get_center_embedding(sid: str):
        s = session_or_404(sid)
        with s.lock:
            _need_center(s)
            coords = center_embedding(s.center, s.completed.members)
            placed = LabeledMergeTree(s.center.tree, s.center.labeling, coords)
            return tree_to_doc(placed)

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
