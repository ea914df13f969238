"""Analysis controller — the decision pipeline and its single-purpose operations over HTTP."""

from __future__ import annotations

from fastapi import APIRouter
from starlette.concurrency import run_in_threadpool

from app.core.config import AnalysisConfig, load_analysis_config
from app.schemas import (
    AnalysisReportOut,
    AnalyzeRequest,
    CharacteristicsRequest,
    ConvexityRequest,
    LocalizeRequest,
    MinPrincipleRequest,
    SigmaRequest,
    parse_rational,
    parse_vector,
)
from app.services import command_service
from app.services.analysis_service import analyze
from app.services.report_serializer import report_to_dict

router = APIRouter(prefix="/api", tags=["Analysis"])


def _config(config: AnalysisConfig | None) -> AnalysisConfig:
    return config or load_analysis_config()


@router.post("/analyze", response_model=AnalysisReportOut)
async def analyze_endpoint(body: AnalyzeRequest):
    P = body.polynomial.to_polynomial()
    geometry = body.domain.to_geometry()
    report = await run_in_threadpool(analyze, P, geometry, _config(body.config))
    return AnalysisReportOut.model_validate(report_to_dict(report))


@router.post("/characteristics")
async def characteristics_endpoint(body: CharacteristicsRequest):
    return await run_in_threadpool(command_service.characteristics, body.polynomial.to_polynomial())


@router.post("/localize")
async def localize_endpoint(body: LocalizeRequest):
    exponent = None if body.sublinear_exponent is None else parse_rational(body.sublinear_exponent)
    return await run_in_threadpool(
        command_service.localize,
        body.polynomial.to_polynomial(),
        body.direction,
        parse_vector(body.drift) if body.drift else (),
        exponent,
        parse_vector(body.sublinear_vector) if body.sublinear_vector else (),
    )


@router.post("/sigma")
async def sigma_endpoint(body: SigmaRequest):
    return await run_in_threadpool(
        command_service.sigma,
        body.polynomial.to_polynomial(),
        parse_vector(body.y),
        _config(body.config),
        body.mode,
    )


@router.post("/convexity")
async def convexity_endpoint(body: ConvexityRequest):
    return await run_in_threadpool(
        command_service.convexity,
        body.polynomial.to_polynomial(),
        body.domain.to_geometry(),
        body.mode,
        _config(body.config),
    )


@router.post("/minprinciple")
async def min_principle_endpoint(body: MinPrincipleRequest):
    segment = (parse_vector(body.segment[0]), parse_vector(body.segment[1]))
    line = body.line.to_line() if body.line else None
    return await run_in_threadpool(
        command_service.min_principle, body.domain.to_geometry(), segment, line, body.tol
    )
