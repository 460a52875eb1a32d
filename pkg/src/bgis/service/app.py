"""HTTP+JSON API binding all modules together.

Request bodies are validated by the domain services, which raise coded
errors; every non-2xx response is a {code, message, details} envelope. All
mutating handlers commit durably before the 2xx goes out.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from datetime import timedelta
from pathlib import Path
from typing import Optional

from fastapi import Body, Depends, FastAPI, Header, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from ..analytics import (crime_chart, cross_validate, derive_reoffend_records,
                         derive_residency_records, likelihood_report,
                         offender_task, residency_task,
                         train_decision_tree, train_naive_bayes)
from ..casework import CaseworkService
from ..common import DateWindow
from ..errors import (DomainError, InsufficientClasses, InvalidField,
                      Unauthenticated)
from ..geo import build_markers, detect_hotspots, geodata_document
from ..health import HealthService
from ..notify import HttpSmsGateway, NotifyService, segment_message
from ..opendata import OpenDataService
from ..registry import RegistryService
from ..store import Store
from .auth import AuthService, Session, authorize
from .config import ServiceConfig, load_zone_map

access_log = logging.getLogger("bgis.access")


@dataclass
class Services:
    store: Store
    registry: RegistryService
    casework: CaseworkService
    health: HealthService
    notify: NotifyService
    opendata: OpenDataService
    auth: AuthService


def build_services(config: ServiceConfig | None = None, store: Store | None = None,
                   gateway=None, sleep=time.sleep) -> Services:
    config = config or ServiceConfig.from_env()
    if store is None:
        zone_map = load_zone_map(config.zones_file)
        store = Store(path=config.log_path(), zone_map=zone_map,
                      barangay_name=config.barangay_name)
    if gateway is None and config.gateway_url:
        gateway = HttpSmsGateway(config.gateway_url, config.gateway_key or "")
    return Services(
        store=store,
        registry=RegistryService(store),
        casework=CaseworkService(store),
        health=HealthService(store),
        notify=NotifyService(store, gateway=gateway, sleep=sleep),
        opendata=OpenDataService(store),
        auth=AuthService(store, session_ttl=timedelta(hours=config.session_ttl_hours)),
    )


def create_app(services: Services | None = None,
               config: ServiceConfig | None = None) -> FastAPI:
    svc = services or build_services(config)
    app = FastAPI(title="bgis", docs_url=None, redoc_url=None)
    app.state.services = svc

    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])

    @app.exception_handler(DomainError)
    def domain_error_handler(request: Request, exc: DomainError):
        return JSONResponse(status_code=exc.http_status, content=exc.to_envelope())

    @app.exception_handler(RequestValidationError)
    def validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422, content={
            "code": "INVALID_FIELD",
            "message": "request body or parameters are malformed",
            "details": {"errors": exc.errors()},
        })

    @app.middleware("http")
    async def log_requests(request: Request, call_next):
        started = time.monotonic()
        response = await call_next(request)
        access_log.info("%s", {
            "method": request.method,
            "path": request.url.path,
            "status": response.status_code,
            "ms": round((time.monotonic() - started) * 1000, 2),
        })
        return response

    def session_of(authorization: Optional[str] = Header(default=None)) -> Session | None:
        token = None
        if authorization and authorization.lower().startswith("bearer "):
            token = authorization[7:].strip()
        return svc.auth.get_session(token)

    def require(session: Session | None, action: str) -> Session | None:
        if session is None:
            if authorize(None, action):
                return None
            raise Unauthenticated(f"a valid session is required for {action}",
                                  action=action)
        svc.auth.require(session, action)
        return session

    def window_of(date_from: str | None, date_to: str | None) -> DateWindow:
        return DateWindow.parse(date_from, date_to)

    # health check

    @app.get("/api/health-check")
    def health_check():
        return {"status": "ok",
                "gateway_configured": svc.notify.gateway is not None,
                "events": len(svc.store.events)}

    # sessions

    @app.post("/api/sessions")
    def create_session(body: dict = Body(...)):
        session = svc.auth.authenticate(body.get("username", ""),
                                        body.get("password", ""))
        return {"token": session.token, "username": session.username,
                "role": session.role,
                "expires_at": session.expires_at.isoformat()}

    # registry

    @app.get("/api/residents")
    def list_residents(q: str = "", offset: int = 0, limit: int | None = None,
                       session=Depends(session_of)):
        require(session, "registry.read")
        matches = svc.registry.find_residents(q)
        page = matches[offset:offset + limit] if limit is not None else matches[offset:]
        return {"total": len(matches),
                "residents": [r.to_payload() for r in page]}

    @app.post("/api/residents", status_code=201)
    def register_resident(body: dict = Body(...), session=Depends(session_of)):
        require(session, "registry.write")
        result = svc.registry.register_resident(body)
        return {"resident_id": result.resident_id,
                "duplicate_warning": result.duplicate_warning}

    @app.get("/api/residents/{resident_id}")
    def get_resident(resident_id: str, session=Depends(session_of)):
        require(session, "registry.read")
        return svc.registry.get_resident(resident_id).to_payload()

    @app.get("/api/residents/{resident_id}/history")
    def get_history(resident_id: str, session=Depends(session_of)):
        require(session, "registry.read")
        resident, history = svc.registry.get_profile(resident_id)
        return {"resident": resident.to_payload(),
                "transactions": [t.to_payload() for t in history]}

    # blotter / clearance

    @app.get("/api/blotter")
    def list_cases(status: str = "", respondent_id: str = "",
                   session=Depends(session_of)):
        require(session, "blotter.read")
        cases = svc.casework.list_cases(status or None)
        if respondent_id:
            cases = [c for c in cases if respondent_id in c.respondent_ids]
        return {"cases": [c.to_payload() for c in cases]}

    @app.post("/api/blotter", status_code=201)
    def file_blotter(body: dict = Body(...), session=Depends(session_of)):
        require(session, "blotter.write")
        case_number = svc.casework.file_blotter(
            complainant_ids=body.get("complainant_ids") or [],
            respondent_ids=body.get("respondent_ids") or [],
            offense_type=body.get("offense_type", ""),
            narrative=body.get("narrative", ""),
            lat=body.get("lat"), lon=body.get("lon"),
            date_filed=body.get("date_filed"),
            zone_id=body.get("zone_id"),
            factors=body.get("factors"))
        return {"case_number": case_number}

    @app.patch("/api/blotter/{case_number}")
    def update_case(case_number: str, body: dict = Body(...),
                    session=Depends(session_of)):
        session = require(session, "case.update")
        svc.casework.update_case_status(case_number, body.get("status", ""),
                                        officer=session.username)
        return svc.casework.get_case(case_number).to_payload()

    @app.post("/api/clearance", status_code=201)
    def issue_clearance(body: dict = Body(...), session=Depends(session_of)):
        session = require(session, "clearance.issue")
        cert = svc.casework.issue_clearance(
            resident_id=body.get("resident_id", ""),
            kind=body.get("kind", "clearance"),
            purpose=body.get("purpose", ""),
            officer=session.username,
            officer_role=session.role,
            override=bool(body.get("override", False)))
        doc = cert.to_payload()
        if cert.outcome == "issued":
            doc["document"] = svc.casework.render_certificate(cert.certificate_id)
        return doc

    @app.get("/api/clearance/{resident_id}")
    def clearance_history(resident_id: str, session=Depends(session_of)):
        require(session, "clearance.read")
        certs = svc.casework.clearance_history(resident_id)
        return {"certificates": [c.to_payload() for c in certs]}

    @app.get("/api/certificates/{certificate_id}/document")
    def certificate_document(certificate_id: str, session=Depends(session_of)):
        require(session, "clearance.read")
        return PlainTextResponse(svc.casework.render_certificate(certificate_id))

    # health records

    @app.post("/api/health/cases", status_code=201)
    def record_health_case(body: dict = Body(...), session=Depends(session_of)):
        session = require(session, "health.write")
        case_id = svc.health.record_health_case(
            subject_kind=body.get("subject_kind", ""),
            subject_id=body.get("subject_id", ""),
            condition=body.get("condition", ""),
            notes=body.get("notes", ""),
            lat=body.get("lat"), lon=body.get("lon"),
            zone_id=body.get("zone_id"),
            recorded_by=session.username)
        return {"health_case_id": case_id}

    @app.post("/api/health/children", status_code=201)
    def register_child(body: dict = Body(...), session=Depends(session_of)):
        require(session, "health.write")
        return {"child_id": svc.health.register_child(body)}

    @app.get("/api/health/children")
    def list_children(session=Depends(session_of)):
        require(session, "health.read")
        return {"children": [c.to_payload() for c in svc.health.list_children()]}

    @app.get("/api/health/summary")
    def health_summary(group_by: str = "zone", date_from: str | None = None,
                       date_to: str | None = None, session=Depends(session_of)):
        require(session, "stats.read")
        summary = svc.health.health_summary(window_of(date_from, date_to), group_by)
        return {"group_by": group_by,
                "summary": {str(k): v for k, v in summary.items()}}

    # geodata

    @app.get("/api/geo/zones")
    def zones(session=Depends(session_of)):
        require(session, "geo.read")
        return svc.store.zone_map.to_payload()

    @app.get("/api/geo/markers")
    def markers(kind: str, date_from: str | None = None,
                date_to: str | None = None, session=Depends(session_of)):
        require(session, "geo.read")
        found = build_markers(svc.store.state, kind, window_of(date_from, date_to))
        return {"markers": [m.to_payload() for m in found]}

    @app.get("/api/geo/hotspots")
    def hotspots(kind: str, cell: float = 150.0, k: int = 5,
                 date_from: str | None = None, date_to: str | None = None,
                 session=Depends(session_of)):
        require(session, "geo.read")
        found = build_markers(svc.store.state, kind, window_of(date_from, date_to))
        grid = detect_hotspots(found, svc.store.zone_map, cell, k)
        return grid.to_payload()

    @app.get("/api/geo/document")
    def geo_document(kind: str = "crime", cell: float = 150.0, k: int = 5,
                     date_from: str | None = None, date_to: str | None = None,
                     session=Depends(session_of)):
        require(session, "geo.read")
        found = build_markers(svc.store.state, kind, window_of(date_from, date_to))
        grid = detect_hotspots(found, svc.store.zone_map, cell, k)
        return geodata_document(svc.store.zone_map, found, grid)

    # analytics

    @app.get("/api/analytics/chart")
    def chart(group_by: str = "offense_type", date_from: str | None = None,
              date_to: str | None = None, session=Depends(session_of)):
        require(session, "stats.read")
        counts = crime_chart(svc.store.state, window_of(date_from, date_to), group_by)
        return {"group_by": group_by,
                "counts": {str(k): v for k, v in counts.items()}}

    @app.get("/api/analytics/report")
    def report(task: str, session=Depends(session_of)):
        require(session, "stats.read")
        return likelihood_report(svc.store.state, task,
                                 today=svc.store.now().date())

    @app.post("/api/analytics/train")
    def train(body: dict = Body(...), session=Depends(session_of)):
        require(session, "analytics.train")
        task_name = body.get("task", "reoffend")
        state = svc.store.state
        if task_name == "reoffend":
            records = derive_reoffend_records(state)
            task = offender_task()
        elif task_name == "offend_by_residency":
            records = derive_residency_records(state, svc.store.now().date())
            task = residency_task()
        else:
            raise InvalidField("task must be reoffend or offend_by_residency",
                               field="task")
        if len({r.label for r in records}) < 2:
            raise InsufficientClasses("need both classes present to train")
        learner = body.get("learner", "nb")
        params = {}
        if "alpha" in body:
            params["alpha"] = float(body["alpha"])
        if "max_depth" in body:
            params["max_depth"] = int(body["max_depth"])
        report = cross_validate(records, task, learner=learner,
                                k=int(body.get("k", 5)),
                                seed=int(body.get("seed", 0)), **params)
        if learner == "nb":
            model = train_naive_bayes(records, task, alpha=params.get("alpha", 1.0))
        else:
            model = train_decision_tree(records, task,
                                        max_depth=params.get("max_depth", 8))
        return {"task": task_name, "learner": learner,
                "evaluation": report.to_payload(), "model": model.to_payload()}

    # SMS broadcasts

    @app.post("/api/broadcasts/preview")
    def preview_broadcast(body: dict = Body(...), session=Depends(session_of)):
        # live compose feedback: the console echoes these numbers, it never
        # recomputes segmentation or audience size itself
        require(session, "sms.send")
        segments = segment_message(body.get("message", ""))
        audience = svc.notify.resolve_audience(body.get("audience") or {})
        return {"segments": len(segments),
                "segment_lengths": [len(s) for s in segments],
                "recipients": len(audience)}

    @app.post("/api/broadcasts", status_code=201)
    def create_broadcast(body: dict = Body(...), session=Depends(session_of)):
        session = require(session, "sms.send")
        message = body.get("message", "")
        job = svc.notify.create_broadcast(message, body.get("audience") or {},
                                          created_by=session.username)
        doc = job.to_payload()
        doc["segments"] = len(segment_message(message))
        return doc

    @app.get("/api/broadcasts/{job_id}")
    def get_broadcast(job_id: str, session=Depends(session_of)):
        require(session, "sms.send")
        return svc.notify.get_job(job_id).to_payload()

    @app.post("/api/broadcasts/{job_id}/dispatch")
    def dispatch_broadcast(job_id: str, session=Depends(session_of)):
        require(session, "sms.send")
        return svc.notify.dispatch(job_id).to_payload()

    # open data (public)

    @app.get("/api/opendata")
    def opendata_catalog(session=Depends(session_of)):
        require(session, "opendata.read")
        return {"datasets": svc.opendata.list_datasets()}

    @app.get("/api/opendata/{dataset_id}.csv")
    def opendata_csv(dataset_id: str, date_from: str | None = None,
                     date_to: str | None = None, session=Depends(session_of)):
        require(session, "opendata.read")
        data = svc.opendata.export_csv(dataset_id, window_of(date_from, date_to))
        return Response(content=data, media_type="text/csv; charset=utf-8",
                        headers={"Content-Disposition":
                                 f'attachment; filename="{dataset_id}.csv"'})

    @app.get("/api/advisories")
    def list_advisories(session=Depends(session_of)):
        require(session, "opendata.read")
        return {"advisories": [a.to_payload()
                               for a in svc.opendata.list_advisories()]}

    @app.post("/api/advisories", status_code=201)
    def publish_advisory(body: dict = Body(...), session=Depends(session_of)):
        session = require(session, "advisory.publish")
        advisory_id = svc.opendata.publish_advisory(
            body.get("title", ""), body.get("body", ""),
            officer=session.username, officer_role=session.role)
        return {"advisory_id": advisory_id}

    console_dist = Path(__file__).resolve().parents[3] / "console" / "dist"
    if console_dist.is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=console_dist, html=True),
                  name="console")

    return app
