"""HTTP API over a profile bundle.

All responses derive from one immutable in-memory snapshot of the bundle;
payloads are serialized canonically (sorted keys, compact) so two servers on
the same bundle return byte-identical bodies.  ``ETag`` carries the bundle
digest.  A snapshot reload swaps the whole object atomically.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from fastapi import FastAPI, HTTPException, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles

from .rx import INDICATOR_NAMES, UNALLOCATED
from .store import ProfileBundle, read_bundle

MAX_COMPARE_REGIONS = 4


def _dump(payload: Any) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


@dataclass(frozen=True)
class CompareRequest:
    """Validated region-comparison query: 1-4 distinct region codes."""

    condition_id: str
    regions: tuple[str, ...]

    def __post_init__(self):
        if not 1 <= len(self.regions) <= MAX_COMPARE_REGIONS:
            raise ValueError(f"between 1 and {MAX_COMPARE_REGIONS} regions required")
        if len(set(self.regions)) != len(self.regions):
            raise ValueError("region codes must be distinct")


class BundleSnapshot:
    """Read-only payload cache over one loaded bundle."""

    def __init__(self, bundle: ProfileBundle):
        self.bundle = bundle
        self.etag = f'"{bundle.bundle_digest}"'
        self.conditions_body = _dump(
            {"conditions": bundle.conditions, "bundle_digest": bundle.bundle_digest}
        )
        self._profile: dict[str, bytes] = {}
        self._emotions: dict[str, bytes] = {}
        self._bodymap: dict[str, bytes] = {}
        self._prevalence: dict[str, bytes] = {}
        for cid, profile in bundle.profiles.items():
            self._profile[cid] = _dump(profile)
            self._emotions[cid] = _dump(
                {"condition_id": cid, "emotions": profile.get("emotions", {})}
            )
            self._bodymap[cid] = _dump(
                {"condition_id": cid, "zones": profile.get("body", [])}
            )
        for cid, table in bundle.prevalence.items():
            self._prevalence[cid] = _dump(table)
        self._regions: dict[str, dict[str, Any]] = {
            region["code"]: region
            for region in bundle.indicators.get("regions", [])
        }
        self._region_body: dict[str, bytes] = {
            code: _dump(region) for code, region in self._regions.items()
        }
        self._prevalence_by_region: dict[str, dict[str, dict[str, Any]]] = {}
        for cid, table in bundle.prevalence.items():
            self._prevalence_by_region[cid] = {
                row["code"]: row for row in table.get("regions", [])
            }

    def profile(self, cid: str) -> bytes | None:
        return self._profile.get(cid)

    def emotions(self, cid: str) -> bytes | None:
        return self._emotions.get(cid)

    def bodymap(self, cid: str) -> bytes | None:
        return self._bodymap.get(cid)

    def prevalence(self, cid: str) -> bytes | None:
        return self._prevalence.get(cid)

    def region(self, code: str) -> bytes | None:
        return self._region_body.get(code)

    def compare(self, request: CompareRequest) -> bytes:
        """Radar vectors: England-relative z per indicator plus the
        condition's prevalence z, raw and display-clipped."""
        cid = request.condition_id
        by_region = self._prevalence_by_region.get(cid)
        if by_region is None:
            raise HTTPException(status_code=404, detail={"error": "UnknownCondition", "condition_id": cid})
        vectors = []
        for code in request.regions:
            indicators = self._regions.get(code)
            if indicators is None or code == UNALLOCATED:
                raise HTTPException(status_code=404, detail={"error": "UnknownRegion", "region": code})
            prevalence_row = by_region.get(code)
            axes: dict[str, dict[str, float]] = {}
            for name in INDICATOR_NAMES:
                axes[name] = {
                    "value": indicators[name],
                    "z": indicators["z"][name],
                    "z_display": indicators["z_display"][name],
                }
            if prevalence_row is None:
                axes["prevalence"] = {"value": 0.0, "z": 0.0, "z_display": 0.0}
            else:
                axes["prevalence"] = {
                    "value": prevalence_row["rate"],
                    "z": prevalence_row["z"],
                    "z_display": prevalence_row["z_display"],
                }
            vectors.append({"code": code, "axes": axes})
        return _dump(
            {
                "condition_id": cid,
                "axis_order": ["prevalence", *INDICATOR_NAMES],
                "regions": vectors,
            }
        )


def create_app(
    bundle_dir: str | Path,
    webapp_dir: str | Path | None = None,
    cors_origins: tuple[str, ...] = ("*",),
) -> FastAPI:
    app = FastAPI(title="condlens", version="1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["GET"],
        allow_headers=["*"],
    )
    state_lock = threading.Lock()
    app.state.snapshot = BundleSnapshot(read_bundle(bundle_dir))
    app.state.bundle_dir = str(bundle_dir)

    def snapshot() -> BundleSnapshot:
        return app.state.snapshot

    def reload_snapshot() -> None:
        fresh = BundleSnapshot(read_bundle(app.state.bundle_dir))
        with state_lock:
            app.state.snapshot = fresh

    app.state.reload_snapshot = reload_snapshot

    def respond(body: bytes | None, not_found: dict[str, str] | None = None) -> Response:
        if body is None:
            raise HTTPException(status_code=404, detail=not_found or {"error": "NotFound"})
        return Response(
            content=body,
            media_type="application/json",
            headers={"ETag": snapshot().etag},
        )

    @app.get("/api/v1/conditions")
    def conditions() -> Response:
        return respond(snapshot().conditions_body)

    @app.get("/api/v1/conditions/{cid}/profile")
    def profile(cid: str) -> Response:
        return respond(
            snapshot().profile(cid), {"error": "UnknownCondition", "condition_id": cid}
        )

    @app.get("/api/v1/conditions/{cid}/emotions")
    def emotions(cid: str) -> Response:
        return respond(
            snapshot().emotions(cid), {"error": "UnknownCondition", "condition_id": cid}
        )

    @app.get("/api/v1/conditions/{cid}/bodymap")
    def bodymap(cid: str) -> Response:
        return respond(
            snapshot().bodymap(cid), {"error": "UnknownCondition", "condition_id": cid}
        )

    @app.get("/api/v1/conditions/{cid}/prevalence")
    def prevalence(cid: str) -> Response:
        return respond(
            snapshot().prevalence(cid), {"error": "UnknownCondition", "condition_id": cid}
        )

    @app.get("/api/v1/regions/{code}")
    def region(code: str) -> Response:
        return respond(snapshot().region(code), {"error": "UnknownRegion", "region": code})

    @app.get("/api/v1/compare")
    def compare(condition: str, regions: str = Query(...)) -> Response:
        codes = tuple(code for code in regions.split(",") if code)
        if len(codes) > MAX_COMPARE_REGIONS:
            raise HTTPException(
                status_code=400,
                detail={"error": "TooManyRegions", "max": MAX_COMPARE_REGIONS, "got": len(codes)},
            )
        try:
            request = CompareRequest(condition_id=condition, regions=codes)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail={"error": "BadRequest", "message": str(exc)})
        body = snapshot().compare(request)
        return respond(body)

    if webapp_dir is not None:
        app.mount("/", StaticFiles(directory=str(webapp_dir), html=True), name="webapp")

    return app
