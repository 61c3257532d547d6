import time
from typing import Any, Dict, List, Optional

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from config.logging_config import get_logger
from config.settings import settings
from core.cohomology import CoeffMode, structure_constants
from core.errors import ParseError, PolymatroidToolkitError, TooLarge
from core.lattice import enumerate_lattice
from core.operations import simplify
from core.realization import caged_from_subspace, pg_violation
from utils.file_handler import file_handler
from utils.response_formatter import response_formatter

logger = get_logger('api')

VERSION = "1.0.0"


# Pydantic models for request/response
class PolymatroidRequest(BaseModel):
    polymatroid: str = Field(..., description="Polymatroid file contents")
    cage: Optional[List[int]] = None


class CohomologyRequest(PolymatroidRequest):
    coeffs: CoeffMode = CoeffMode.CONJECTURAL_BINOMIAL
    strict: bool = False


class SubspaceRequest(BaseModel):
    subspace: str = Field(..., description="Subspace file contents")
    check_pg: bool = False


class HealthResponse(BaseModel):
    status: str
    version: str
    bounds: Dict[str, int]


# Create FastAPI app
app = FastAPI(
    title="Polymatroid Toolkit API",
    description="Combinatorial flats, simplification, cohomology tables and subspace realizations",
    version=VERSION
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.middleware("http")
async def log_requests(request: Request, call_next):
    """Log every request with its status and duration"""
    start_time = time.time()
    response = await call_next(request)
    duration = time.time() - start_time
    logger.info(f"{request.method} {request.url.path} - {response.status_code} - {duration:.3f}s")
    return response


@app.exception_handler(PolymatroidToolkitError)
async def toolkit_error_handler(request: Request, exc: PolymatroidToolkitError):
    """Domain failures become 422 responses, parse failures 400"""
    status_code = 400 if isinstance(exc, ParseError) else 422
    if isinstance(exc, TooLarge):
        status_code = 413
    logger.error(f"{request.url.path}: {type(exc).__name__}: {exc.message}")
    return JSONResponse(
        status_code=status_code,
        content=response_formatter.create_error_response(exc.message, type(exc).__name__, exc.to_dict()),
    )


@app.exception_handler(Exception)
async def general_exception_handler(request: Request, exc: Exception):
    """Handle general exceptions"""
    logger.error(f"❌ Unhandled exception on {request.url.path}: {str(exc)}", exc_info=True)
    return JSONResponse(
        status_code=500,
        content=response_formatter.create_error_response("Internal server error", "InternalError"),
    )


def _load(request: PolymatroidRequest):
    cage = tuple(request.cage) if request.cage is not None else None
    return file_handler.parse_polymatroid(request.polymatroid).to_caged(cage)


@app.get("/", response_model=Dict[str, str])
async def root():
    return {
        "message": "Polymatroid Toolkit API",
        "version": VERSION,
        "status": "running"
    }


@app.get("/health", response_model=HealthResponse)
async def health_check():
    """Status and the configured size guards"""
    return HealthResponse(
        status="healthy",
        version=VERSION,
        bounds={
            "MAX_GROUND_SIZE": settings.MAX_GROUND_SIZE,
            "LATTICE_SIZE_BOUND": settings.LATTICE_SIZE_BOUND,
            "ORACLE_MAX_LIFT_SIZE": settings.ORACLE_MAX_LIFT_SIZE,
            "BRUTE_FORCE_BOUND": settings.BRUTE_FORCE_BOUND,
        },
    )


@app.post("/validate")
async def validate_polymatroid(request: PolymatroidRequest):
    """Check the polymatroid axioms; violations come back through the error handler"""
    caged = _load(request)
    logger.info(f"validated {caged}")
    return response_formatter.create_success_response(
        "OK",
        {"ground_size": caged.ground_size, "rank": caged.rank, "cage": list(caged.cage)},
    )


@app.post("/flats")
async def combinatorial_flats(request: PolymatroidRequest):
    """Combinatorial flats with ranks, covers and Whitney numbers"""
    lattice = enumerate_lattice(_load(request))
    return response_formatter.create_success_response(
        f"{len(lattice)} combinatorial flats",
        response_formatter.lattice_to_dict(lattice),
    )


@app.post("/flats/upload")
async def combinatorial_flats_upload(
    polymatroid_file: UploadFile = File(...),
    cage: Optional[str] = Form(None),
):
    """Same as /flats for an uploaded polymatroid file; cage is space separated"""
    text = (await polymatroid_file.read()).decode("utf-8")
    parsed_cage = None
    if cage:
        try:
            parsed_cage = [int(token) for token in cage.split()]
        except ValueError:
            raise ParseError(0, f"cage {cage!r} must be integers")
    return await combinatorial_flats(PolymatroidRequest(polymatroid=text, cage=parsed_cage))


@app.post("/simplify")
async def simplify_polymatroid(request: PolymatroidRequest):
    """Deloop and reduce to the simple polymatroid with tight cage"""
    caged = _load(request)
    simple, trace = simplify(caged)
    return response_formatter.create_success_response(
        response_formatter.format_trace(trace),
        {
            "steps": [
                {"operation": step.tag, "index": step.index + 1, "cage": list(step.result.cage)}
                for step in trace.steps
            ],
            "polymatroid": file_handler.serialize_polymatroid(simple.poly, simple.cage),
        },
    )


@app.post("/cohomology")
async def cohomology_table(request: CohomologyRequest):
    """Multiplication table of the ring on combinatorial flats"""
    caged = _load(request)
    ring = structure_constants(caged, request.coeffs, strict=request.strict)
    return response_formatter.create_success_response(
        f"{len(ring.lattice)} basis classes, {len(ring.diagnostics)} diagnostics",
        response_formatter.ring_to_dict(ring),
    )


@app.post("/realize")
async def realize_subspace(request: SubspaceRequest):
    """Polymatroid of a subspace and, on request, its partial genericity"""
    subspace = file_handler.parse_subspace(request.subspace)
    caged = caged_from_subspace(subspace)
    data: Dict[str, Any] = {
        "polymatroid": file_handler.serialize_polymatroid(caged.poly, caged.cage),
        "dimension": subspace.dimension,
    }
    if request.check_pg:
        violation = pg_violation(subspace)
        data["pg"] = violation is None
        if violation is not None:
            witness, expected, observed = violation
            data["witness"] = {"multiset": list(witness), "expected": expected, "observed": observed}
    return response_formatter.create_success_response("realized", data)
