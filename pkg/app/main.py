"""
FastAPI application factory.

Assembles the app, registers all routers, translates library errors into
JSON responses and wires up lifecycle events.
"""

import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from app.controllers.analysis_controller import router as analysis_router
from app.controllers.cone_controller import router as cone_router
from app.core.config import settings
from app.core.errors import PConvexError
from app.services.localization_service import collect_profiles

logger = logging.getLogger(__name__)


def create_app() -> FastAPI:
    # ── Startup / Shutdown ───────────────────────────────────────────
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        logger.info("%s starting (config version %s)", settings.APP_NAME, settings.CONFIG_VERSION)
        yield

        # Shutdown
        collect_profiles.cache_clear()
        logger.info("Localization cache cleared.")

    app = FastAPI(
        title=settings.APP_NAME,
        version="0.1.0",
        docs_url="/docs",
        redoc_url="/redoc",
        lifespan=lifespan,
    )

    # ── CORS ──────────────────────────────────────────────────────────
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_credentials=True,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    # ── Errors ───────────────────────────────────────────────────────
    @app.exception_handler(PConvexError)
    async def pconvex_error_handler(request: Request, exc: PConvexError):
        if exc.status_code >= 500:
            logger.error("%s %s: %s", request.method, request.url.path, exc.detail)
        return JSONResponse(status_code=exc.status_code, content={"detail": exc.detail})

    # ── Register routers ─────────────────────────────────────────────
    app.include_router(analysis_router)
    app.include_router(cone_router)

    # ── Health check ─────────────────────────────────────────────────
    @app.get("/health", tags=["Health"])
    async def health():
        return {"status": "ok"}

    return app


app = create_app()
