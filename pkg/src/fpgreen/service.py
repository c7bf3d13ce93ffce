"""HTTP service exposing the expansion, oracle, and scattering operations.

The CLI drives this app either in process or over the network; every
response body is a plain JSON record so outputs stay deterministic.  Domain
errors map to structured HTTP errors: 409 for numerical non-convergence,
422 for everything else raised by the library.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .closedform import TIME_KERNEL_IDS, exact_GF_time
from .coeffs import gen_alpha, gen_s
from .config import RunConfig, resolve_potential
from .diffpoly import Basis
from .engine import logG_series, shorttime_GF, shorttime_series
from .errors import ConvergenceError, EvaluationDomainError, FpgreenError
from .remainder import remainder_report
from .riccati import finite_scattering
from .seriescomb import gen_b, gen_g
from .validity import classify_validity
from .xipoly import gen_K, gen_c_tilde

__all__ = ["create_app"]


class SourceParams(BaseModel):
    """One potential source: builtin name, inline expression, or file path."""

    builtin: str | None = None
    f: str | None = None
    v: str | None = None
    vs: str | None = None
    e0: float | None = None
    potential_file: str | None = None

    def spec(self):
        return resolve_potential(
            RunConfig(
                builtin=self.builtin,
                f=self.f,
                v=self.v,
                vs=self.vs,
                e0=self.e0,
                potential_file=self.potential_file,
            )
        )


class CoeffsRequest(BaseModel):
    family: str = "s"
    order: int = Field(ge=0)
    basis: str = "f"
    force: bool = False


class ExpandRequest(SourceParams):
    x: float
    y: float
    k_re: float
    k_im: float = 0.0
    order: int = Field(default=4, ge=0)
    corrected: bool = True
    force: bool = False


class CompareRequest(SourceParams):
    x: float
    y: float
    order: int = Field(default=4, ge=0)
    ray: str = "real"
    kmin: float = 2.0
    kmax: float = 40.0
    samples: int = Field(default=9, ge=1)
    oracle: str = "auto"
    corrected: bool | None = None
    threads: int = Field(default=1, ge=1)


class ShorttimeRequest(SourceParams):
    x: float
    y: float
    order: int = Field(default=3, ge=0)
    tmin: float = 0.05
    tmax: float = 0.5
    tpoints: int = Field(default=10, ge=1)


class ValidityRequest(SourceParams):
    x: float
    y: float


class ScatterRequest(SourceParams):
    x1: float
    x2: float
    kmin: float = 2.0
    kmax: float = 40.0
    samples: int = Field(default=9, ge=1)


def _basis(text: str) -> Basis:
    if text.lower() == "f":
        return Basis.F_BASIS
    if text.lower() in ("vs", "v"):
        return Basis.VS_BASIS
    raise EvaluationDomainError(f"basis must be f or vs, got {text!r}")


def _coeff_text(family: str, order: int, basis: Basis, force: bool) -> str:
    if family == "s":
        return str(gen_s(order, basis, force=force))
    if family == "alpha":
        return str(gen_alpha(order, basis, force=force))
    if basis is not Basis.F_BASIS:
        raise EvaluationDomainError(f"family {family!r} is only available in the f basis")
    if family == "c":
        return str(gen_c_tilde(order))
    if family == "K":
        return str(gen_K(order))
    if family == "b":
        return repr(gen_b(order)).removeprefix("AbstractSeriesPoly(").removesuffix(")")
    if family == "g":
        return repr(gen_g(order)).removeprefix("AbstractSeriesPoly(").removesuffix(")")
    raise EvaluationDomainError(
        f"family must be one of s, alpha, c, K, b, g; got {family!r}"
    )


def _k_grid(kmin: float, kmax: float, samples: int) -> list[float]:
    return RunConfig(kmin=kmin, kmax=kmax, samples=samples).k_magnitudes()


def create_app() -> FastAPI:
    app = FastAPI(title="fpgreen", version="1.0.0")

    @app.exception_handler(FpgreenError)
    async def _domain_error(request: Request, exc: FpgreenError):
        status = 409 if isinstance(exc, ConvergenceError) else 422
        return JSONResponse(
            status_code=status,
            content={"error": type(exc).__name__, "message": str(exc)},
        )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/coeffs")
    def coeffs(req: CoeffsRequest) -> dict:
        return {
            "family": req.family,
            "order": req.order,
            "basis": _basis(req.basis).value,
            "text": _coeff_text(req.family, req.order, _basis(req.basis), req.force),
        }

    @app.post("/expand")
    def expand(req: ExpandRequest) -> dict:
        spec = req.spec()
        result = logG_series(
            req.x,
            req.y,
            complex(req.k_re, req.k_im),
            req.order,
            spec,
            corrected=req.corrected,
            force=req.force,
        )
        record = result.record()
        record["leading"] = [result.leading.real, result.leading.imag]
        record["log_gs"] = [result.log_gs.real, result.log_gs.imag]
        record["spec"] = spec.name
        return record

    @app.post("/compare")
    def compare(req: CompareRequest) -> dict:
        spec = req.spec()
        report = remainder_report(
            spec,
            req.x,
            req.y,
            req.order,
            req.ray,
            _k_grid(req.kmin, req.kmax, req.samples),
            corrected=req.corrected,
            oracle=req.oracle,
            threads=req.threads,
        )
        return report.record()

    @app.post("/shorttime")
    def shorttime(req: ShorttimeRequest) -> dict:
        spec = req.spec()
        series = shorttime_series(req.x, req.y, req.order, spec)
        grid = RunConfig(tmin=req.tmin, tmax=req.tmax, tpoints=req.tpoints).t_grid()
        has_exact = spec.name in TIME_KERNEL_IDS
        rows = []
        for t in grid:
            value = shorttime_GF(req.x, req.y, t, req.order, spec)
            exact = exact_GF_time(spec.name, req.x, req.y, t) if has_exact else None
            rows.append({"t": t, "series": value, "exact": exact})
        return {
            "spec": spec.name,
            "x": req.x,
            "y": req.y,
            "N": req.order,
            "g": list(series.g),
            "rows": rows,
        }

    @app.post("/validity")
    def validity(req: ValidityRequest) -> dict:
        spec = req.spec()
        reports = classify_validity(spec, req.x, req.y)
        return {
            "spec": spec.name,
            "x": req.x,
            "y": req.y,
            "regimes": {
                regime.value: {
                    "max_order": rep.max_order,
                    "corrections": [[n, c] for n, c in rep.corrections],
                    "notes": list(rep.notes),
                }
                for regime, rep in reports.items()
            },
        }

    @app.post("/scatter")
    def scatter(req: ScatterRequest) -> dict:
        spec = req.spec()
        sweep = []
        for magnitude in _k_grid(req.kmin, req.kmax, req.samples):
            triple = finite_scattering(req.x1, req.x2, complex(magnitude, 0.0), spec)
            sweep.append(
                {
                    "k": [magnitude, 0.0],
                    "tau": [triple.tau.real, triple.tau.imag],
                    "r_r": [triple.r_r.real, triple.r_r.imag],
                    "r_l": [triple.r_l.real, triple.r_l.imag],
                }
            )
        return {"spec": spec.name, "interval": [req.x1, req.x2], "sweep": sweep}

    return app
