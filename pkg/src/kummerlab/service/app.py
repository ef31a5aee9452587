"""FastAPI service exposing the core computations.

Run with: uvicorn kummerlab.service.app:app
Error bodies carry a `code` field mirroring the CLI exit codes
(2 resource cap, 3 parse error, 4 inconsistent input, 64 usage).
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..cohomology import GModule, h1
from ..descriptors import build_arboreal, build_matgroup, dump_matgroup
from ..errors import (
    CohomologyCapError,
    DescriptorError,
    GroupTooLargeError,
    InconsistentGroupError,
    KummerlabError,
    ModulusMismatchError,
    NonInvertibleError,
    OverflowGuardError,
)
from ..kummer import total_failure_identity_check
from ..matgroups import CartanData, cartan, cartan_normaliser, scalars_in
from ..suites import run_suite, suite_names
from .schemas import (
    CartanRequest,
    CartanResponse,
    H1Request,
    H1Response,
    KummerResponse,
    ArborealDescriptor,
    MatGroupDescriptor,
    PrimeFailure,
    SuiteFailure,
    VerifyRequest,
    VerifyResponse,
)


def _http_error(exc: Exception) -> HTTPException:
    if isinstance(exc, (GroupTooLargeError, CohomologyCapError,
                        OverflowGuardError)):
        return HTTPException(413, detail={"code": 2, "message": str(exc)})
    if isinstance(exc, DescriptorError):
        return HTTPException(400, detail={"code": 3, "message": str(exc)})
    if isinstance(exc, (InconsistentGroupError, ModulusMismatchError,
                        NonInvertibleError)):
        return HTTPException(422, detail={"code": 4, "message": str(exc)})
    if isinstance(exc, (KummerlabError, ValueError)):
        return HTTPException(400, detail={"code": 64, "message": str(exc)})
    raise exc


def create_app() -> FastAPI:
    app = FastAPI(title="kummerlab", version=__version__)

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.get("/suites")
    def suites():
        return {"suites": suite_names()}

    @app.post("/cartan", response_model=CartanResponse,
              response_model_exclude_none=True)
    def cartan_endpoint(req: CartanRequest):
        try:
            data = CartanData(req.gamma, req.delta, req.prime, req.level)
            C = cartan(data)
            norm_order = None
            if req.normaliser:
                norm_order = cartan_normaliser(C, data).order
        except Exception as exc:  # noqa: BLE001
            raise _http_error(exc) from exc
        desc = dump_matgroup(C)
        return CartanResponse(
            order=C.order,
            abelian=C.is_abelian(),
            scalar_order=scalars_in(C).order,
            normaliser_order=norm_order,
            descriptor=MatGroupDescriptor(
                modulus=desc["modulus"], generators=desc["generators"]),
        )

    @app.post("/h1", response_model=H1Response)
    def h1_endpoint(req: H1Request):
        try:
            group = build_matgroup(req.group.model_dump())
            p, k = group.prime_power()
            level = req.module_level or k
            res = h1(group, GModule(p, level), cap=req.cap)
        except Exception as exc:  # noqa: BLE001
            raise _http_error(exc) from exc
        return H1Response(
            group_order=group.order,
            module=f"(Z/{p}^{level})^2",
            invariant_factors=list(res.invariant_factors),
            order=res.order,
            exponent=res.exponent,
        )

    @app.post("/kummer", response_model=KummerResponse)
    def kummer_endpoint(req: ArborealDescriptor):
        try:
            group = build_arboreal(req.model_dump())
            rep = total_failure_identity_check(group)
        except Exception as exc:  # noqa: BLE001
            raise _http_error(exc) from exc
        return KummerResponse(
            modulus=rep.modulus,
            order=group.order,
            fiber_order=rep.fiber_order,
            total_failure=rep.total_failure,
            per_prime=[PrimeFailure(ell=e, n=n, A=a, B=b)
                       for e, n, a, b in rep.per_prime],
            identity_holds=rep.identity_holds,
        )

    @app.post("/verify", response_model=VerifyResponse)
    def verify_endpoint(req: VerifyRequest):
        if req.suite not in suite_names():
            raise HTTPException(400, detail={
                "code": 64,
                "message": f"unknown suite {req.suite!r}; "
                           f"known: {', '.join(suite_names())}"})
        try:
            rep = run_suite(req.suite, seed=req.seed, instances=req.instances)
        except Exception as exc:  # noqa: BLE001
            raise _http_error(exc) from exc
        return VerifyResponse(
            suite=rep.suite,
            seed=rep.seed,
            instances=rep.instance_count,
            passed=rep.passed,
            stats=rep.stats,
            failures=[SuiteFailure(index=r.index, detail=r.detail, data=r.data)
                      for r in rep.results if not r.passed],
        )

    return app


app = create_app()
