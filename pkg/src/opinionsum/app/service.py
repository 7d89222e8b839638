"""HTTP API over a loaded pipeline bundle.

The bundle is immutable, every handler is a pure function of
(bundle, request), so concurrent requests are safe and repeated
identical requests return identical bodies (timing aside).
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from ..selection import SelectionConfig
from .bundle import PipelineBundle, _cluster_payload, ranked_entity_clusters, run_summarize


class SummarizeRequest(BaseModel):
    entity_id: str
    k: int | None = Field(default=None, ge=1)
    theta: float | None = Field(default=None, gt=0.0, le=1.0)
    seed: int | None = None
    aspect: list[str] | None = None
    polarity: str | None = None
    beam_size: int | None = Field(default=None, ge=1)
    max_len: int | None = Field(default=None, ge=1)


def create_app(bundle: PipelineBundle, frontend_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="opinionsum")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.get("/api/entities")
    def entities():
        return [
            {"entity_id": eid, "review_count": len(reviews)}
            for eid, reviews in bundle.corpus.entities.items()
        ]

    @app.get("/api/aspects")
    def aspects():
        return {"domain": bundle.lexicon.domain, "aspects": bundle.aspect_categories()}

    @app.get("/api/entities/{entity_id}/clusters")
    def clusters(entity_id: str, theta: float | None = None, seed: int | None = None,
                 aspect: str | None = None, polarity: str | None = None):
        if entity_id not in bundle.corpus.entities:
            raise HTTPException(status_code=404, detail=f"unknown entity {entity_id!r}")
        defaults = bundle.selection_defaults
        cfg = SelectionConfig(
            theta=theta if theta is not None else defaults.theta,
            k=defaults.k,
            seed=seed if seed is not None else defaults.seed,
            aspect_filter=frozenset(aspect.split(",")) if aspect else None,
            polarity_filter=polarity if polarity not in (None, "all") else None,
            filter_stage=defaults.filter_stage,
        )
        ranked = ranked_entity_clusters(bundle, entity_id, cfg)
        return {"entity_id": entity_id, "clusters": _cluster_payload(ranked)}

    @app.post("/api/summarize")
    def summarize(req: SummarizeRequest):
        if req.entity_id not in bundle.corpus.entities:
            raise HTTPException(status_code=404, detail=f"unknown entity {req.entity_id!r}")
        if req.polarity not in (None, "all", "positive", "neutral", "negative"):
            raise HTTPException(status_code=422, detail="invalid polarity")
        return run_summarize(
            bundle, req.entity_id, k=req.k, theta=req.theta, seed=req.seed,
            aspect=req.aspect, polarity=req.polarity,
            beam_size=req.beam_size, max_len=req.max_len,
        )

    if frontend_dir and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="frontend")
    return app


def serve(bundle: PipelineBundle, host: str = "127.0.0.1", port: int = 8000,
          frontend_dir: str | None = None) -> None:
    import uvicorn

    uvicorn.run(create_app(bundle, frontend_dir), host=host, port=port, log_level="info")
