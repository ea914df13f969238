"""Cone controller — duality, properness, hyperplane predicates, avoidance and recession."""

from __future__ import annotations

from fastapi import APIRouter
from starlette.concurrency import run_in_threadpool

from app.schemas import AvoidRequest, ConeRequest, HyperplaneRequest, RecessionRequest, parse_rational, parse_vector
from app.services import command_service

router = APIRouter(prefix="/api/cones", tags=["Cones"])


@router.post("/dual")
async def dual_endpoint(body: ConeRequest):
    return await run_in_threadpool(command_service.dual, body.cone.to_cone())


@router.post("/proper")
async def proper_endpoint(body: ConeRequest):
    return await run_in_threadpool(command_service.proper, body.cone.to_cone())


@router.post("/hyperplanes")
@router.post("/prop3")
async def hyperplanes_endpoint(body: HyperplaneRequest):
    return await run_in_threadpool(
        command_service.hyperplanes,
        body.gamma_dual.to_cone(),
        parse_vector(body.normal),
        parse_rational(body.c),
        parse_vector(body.x),
    )


@router.post("/avoid")
async def avoid_endpoint(body: AvoidRequest):
    return await run_in_threadpool(command_service.avoid, body.cone.to_cone(), body.polynomial.to_polynomial())


@router.post("/recession")
async def recession_endpoint(body: RecessionRequest):
    return await run_in_threadpool(
        command_service.recession,
        parse_vector(body.x),
        normals=[parse_vector(a) for a in body.normals],
        offsets=[parse_rational(b) for b in body.offsets],
        apex=parse_vector(body.apex) if body.apex is not None else None,
        cone=body.cone.to_cone() if body.cone is not None else None,
    )
