"""FastAPI service wrapping the compute library.

Every endpoint answers {"meta": {version, command, config}, "data": [...]}.
Validation problems map to 422, numerical non-convergence to 409; the
response meta echoes the effective configuration so a run can be
reproduced exactly.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__, experiments
from ..errors import ConvergenceError
from . import models


def _envelope(command: str, config: dict, rows: list, extra_meta: dict) -> dict:
    return {
        "meta": {"version": __version__, "command": command,
                 "config": config, **extra_meta},
        "data": rows,
    }


def _run(command: str, config: dict, fn, *args, **kwargs) -> dict:
    try:
        rows, extra = fn(*args, **kwargs)
    except ConvergenceError as exc:
        raise HTTPException(status_code=409, detail={
            "kind": "nonconvergence", "message": str(exc)})
    except ValueError as exc:
        raise HTTPException(status_code=422, detail={
            "kind": "validation", "message": str(exc)})
    return _envelope(command, config, rows, extra)


def create_app() -> FastAPI:
    app = FastAPI(
        title="helikin",
        version=__version__,
        description="Momentum-space gauge kinematics: monopole harmonics, "
                    "cocycle fluxes, Hopf sections, Berry-phase screening, "
                    "and the spectra they shift.",
    )

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/v1/harmonics")
    def harmonics(req: models.HarmonicsRequest):
        return _run("harmonics", req.model_dump(), experiments.run_harmonics,
                    req.mu, req.lmax, req.n_theta, req.n_phi, req.table)

    @app.post("/v1/flux")
    def flux(req: models.FluxRequest):
        return _run("flux", req.model_dump(), experiments.run_flux,
                    req.g, req.radii, req.n_theta, req.n_phi)

    @app.post("/v1/cocycle")
    def cocycle(req: models.CocycleRequest):
        return _run("cocycle", req.model_dump(), experiments.run_cocycle,
                    req.eg, req.tetrahedra, req.seed, req.scale)

    @app.post("/v1/chern")
    def chern(req: models.ChernRequest):
        return _run("chern", req.model_dump(), experiments.run_chern,
                    req.sector, req.n_theta, req.n_phi)

    @app.post("/v1/formfactor")
    def formfactor(req: models.FormFactorRequest):
        return _run("formfactor", req.model_dump(), experiments.run_formfactor,
                    req.kind, req.p, req.theta_p, req.phi_p, req.q,
                    req.n_theta, req.n_phi, req.steps)

    @app.post("/v1/oscillator")
    def oscillator(req: models.OscillatorRequest):
        return _run("oscillator", req.model_dump(), experiments.run_oscillator,
                    req.mu, req.lmax, req.vmax, req.grid, req.pmax)

    @app.post("/v1/hydrogen")
    def hydrogen(req: models.HydrogenRequest):
        return _run("hydrogen", req.model_dump(), experiments.run_hydrogen,
                    req.mu, req.z, req.l, req.count, req.radial, req.scale,
                    req.n_theta, req.n_phi, req.lam_max, req.m, req.splittings)

    @app.post("/v1/selftest")
    def selftest(req: models.SelftestRequest):
        return _run("selftest", req.model_dump(), experiments.run_selftest_rows)

    return app


app = create_app()
