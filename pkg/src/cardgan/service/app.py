"""HTTP inference service.

Endpoints (all JSON unless noted):

* ``GET  /v1/models``                 available models + validation ranges
* ``POST /v1/generate``               EditSession -> base64 PNG + archive id
* ``POST /v1/generate/png``           same, raw ``image/png`` body
* ``GET  /v1/pca/{model_id}``         top-K explained variances
* ``POST /v1/latent?model_id=``       upload a latent archive (binary body)
* ``GET  /v1/latent/{archive_id}``    download an archive
* ``POST /v1/project``                async inversion; returns a job id
* ``GET  /v1/jobs/{job_id}``          poll a projection job

Every served image is reproducible from its session or archive alone;
per-model forward passes are serialized, so concurrent identical requests
return byte-identical payloads.
"""

from __future__ import annotations

import base64
import hashlib
import io
import json
import logging
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from PIL import Image

from ..container import canonical_json
from ..errors import InvalidArgument, NumericFailure
from ..latent_tools.pca import PcaBasis, compute_pca_basis
from ..latent_tools.projection import ProjectionOptions, project
from ..models.checkpoint import GeneratorCheckpoint
from ..rng import MAX_SEED
from .archives import ArchiveStore, LatentArchive
from .config import ServiceConfig
from .sessions import EditSession, resolve_session, validate_model_ranges

log = logging.getLogger("cardgan.service")


def encode_png(image: np.ndarray) -> bytes:
    """float32 [-1, 1] -> lossless PNG bytes (deterministic for fixed pixels)."""
    u8 = np.clip(np.floor((image + 1.0) * 127.5 + 0.5), 0, 255).astype(np.uint8)
    buf = io.BytesIO()
    Image.fromarray(u8).save(buf, format="PNG")
    return buf.getvalue()


def decode_png(blob: bytes) -> np.ndarray:
    img = Image.open(io.BytesIO(blob))
    img.load()
    return np.asarray(img.convert("RGB"), dtype=np.float32) / 127.5 - 1.0


@dataclass
class LoadedModel:
    model_id: str
    path: Path
    ckpt: GeneratorCheckpoint | None = None
    basis: PcaBasis | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


class ModelRegistry:
    """Checkpoint files in one directory; loaded lazily, one lock per model.

    Requests arriving during a load queue on the model lock; only a load
    that outlasts the grace period turns into a 503.
    """

    LOAD_WAIT_SECONDS = 60.0

    def __init__(self, cfg: ServiceConfig):
        self.cfg = cfg
        self.models: dict[str, LoadedModel] = {}
        model_dir = Path(cfg.model_dir)
        if model_dir.is_dir():
            for path in sorted(model_dir.glob("*.ckpt")):
                self.models[path.stem] = LoadedModel(model_id=path.stem, path=path)

    def entry(self, model_id: str) -> LoadedModel:
        model = self.models.get(model_id)
        if model is None:
            raise HTTPException(404, f"unknown model {model_id!r}")
        return model

    def checkpoint(self, model_id: str) -> tuple[GeneratorCheckpoint, LoadedModel]:
        model = self.entry(model_id)
        if model.ckpt is None:
            if not model.lock.acquire(timeout=self.LOAD_WAIT_SECONDS):
                raise HTTPException(503, f"model {model_id!r} is loading, retry shortly")
            try:
                if model.ckpt is None:
                    ckpt = GeneratorCheckpoint.load(model.path)
                    ckpt.require_w_mean()
                    model.ckpt = ckpt
            finally:
                model.lock.release()
        return model.ckpt, model

    def basis_for(self, model_id: str) -> PcaBasis:
        ckpt, model = self.checkpoint(model_id)
        if model.basis is None:
            cache = Path(self.cfg.basis_cache_dir) / f"{model_id}.basis"
            if cache.exists():
                model.basis = PcaBasis.load(cache)
            else:
                n = max(self.cfg.pca_samples, ckpt.latent_dim + 1)
                model.basis = compute_pca_basis(ckpt, n_samples=n, seed=self.cfg.pca_seed)
                model.basis.save(cache, meta={"model_id": model_id, "n_samples": n,
                                              "seed": self.cfg.pca_seed})
        return model.basis


@dataclass
class Job:
    job_id: str
    status: str = "pending"  # pending | running | done | failed
    archive_id: str | None = None
    final_loss: float | None = None
    error: str | None = None


def _ranges(ckpt: GeneratorCheckpoint, cfg: ServiceConfig) -> dict:
    return {
        "latent_seed": [0, MAX_SEED],
        "noise_seed": [0, MAX_SEED],
        "style_mix_seed": [0, MAX_SEED],
        "truncation": [-2.0, 2.0],
        "style_mix_cutoff": [0, ckpt.num_layers - 1],
        "style_mix_strength": [0.0, 1.0],
        "pca_direction": [0, ckpt.latent_dim - 1],
        "pca_weight": [-40.0, 40.0],
        "max_pca_edits": cfg.max_pca_edits,
    }


def create_app(cfg: ServiceConfig | None = None) -> FastAPI:
    cfg = cfg or ServiceConfig.load()
    app = FastAPI(title="cardgan inference service")
    registry = ModelRegistry(cfg)
    archives = ArchiveStore(cfg.archive_dir)
    jobs: dict[str, Job] = {}
    jobs_lock = threading.Lock()
    executor = ThreadPoolExecutor(max_workers=max(cfg.workers, 1))
    app.state.registry = registry
    app.state.config = cfg

    @app.exception_handler(InvalidArgument)
    async def _invalid_argument(request: Request, exc: InvalidArgument):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        # field-level messages with a 400, e.g. "truncation: input should be
        # less than or equal to 2"
        details = []
        for err in exc.errors():
            loc = ".".join(str(part) for part in err["loc"] if part != "body")
            details.append(f"{loc}: {err['msg']}")
        return JSONResponse(status_code=400, content={"detail": details})

    @app.exception_handler(NumericFailure)
    async def _numeric_failure(request: Request, exc: NumericFailure):
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    def render_session(session: EditSession) -> tuple[bytes, str, dict]:
        ckpt, model = registry.checkpoint(session.model_id)
        validate_model_ranges(session, ckpt, cfg.max_pca_edits)
        archive = None
        if session.archive_id is not None:
            archive = archives.get(session.archive_id)
            if archive is None:
                raise HTTPException(404, f"unknown archive {session.archive_id!r}")
            try:
                archive.validate_against(ckpt)
            except InvalidArgument as exc:
                raise HTTPException(
                    409, f"archive requires model {archive.model_id!r}: {exc}") from exc
        basis = None
        if session.pca_edits:
            basis = registry.basis_for(session.model_id)
        session_json = canonical_json(session.canonical())
        session_hash = hashlib.sha256(session_json.encode()).hexdigest()
        with model.lock:
            image, w_plus, noise = resolve_session(session, ckpt, basis, archive)
        out_archive = LatentArchive.from_render(
            session.model_id, ckpt, w_plus, noise, provenance=session.canonical())
        archive_id = archives.put(out_archive)
        png = encode_png(image)
        log.info("%s", json.dumps({"endpoint": "generate", "model": session.model_id,
                                   "session_hash": session_hash, "archive_id": archive_id}))
        meta = {"model_id": session.model_id, "archive_id": archive_id,
                "session_hash": session_hash,
                "width": image.shape[1], "height": image.shape[0]}
        return png, archive_id, meta

    # -- endpoints -----------------------------------------------------------

    @app.get("/v1/models")
    def list_models():
        out = []
        for model_id in sorted(registry.models):
            ckpt, model = registry.checkpoint(model_id)
            basis_cached = model.basis is not None or (
                Path(cfg.basis_cache_dir) / f"{model_id}.basis").exists()
            out.append({
                "model_id": model_id,
                "resolution": ckpt.arch.output_res,
                "gate_config": ckpt.gates.to_dict(),
                "gate_spec": ckpt.gates.to_spec(),
                "latent_dim": ckpt.latent_dim,
                "num_layers": ckpt.num_layers,
                "basis_available": basis_cached,
                "ranges": _ranges(ckpt, cfg),
            })
        return out

    @app.post("/v1/generate")
    def generate_json(session: EditSession):
        png, _, meta = render_session(session)
        return {**meta, "image_png_base64": base64.b64encode(png).decode("ascii")}

    @app.post("/v1/generate/png")
    def generate_png(session: EditSession):
        png, archive_id, meta = render_session(session)
        return Response(content=png, media_type="image/png",
                        headers={"X-Archive-Id": archive_id,
                                 "X-Session-Hash": meta["session_hash"]})

    @app.get("/v1/pca/{model_id}")
    def pca_summary(model_id: str, k: int = 10):
        ckpt, _ = registry.checkpoint(model_id)
        basis = registry.basis_for(model_id)
        k = max(1, min(k, basis.k))
        return {
            "model_id": model_id,
            "latent_dim": ckpt.latent_dim,
            "k": k,
            "variances": [float(v) for v in basis.variances[:k]],
        }

    @app.get("/v1/latent/{archive_id}")
    def download_latent(archive_id: str):
        blob = archives.get_bytes(archive_id)
        if blob is None:
            raise HTTPException(404, f"unknown archive {archive_id!r}")
        return Response(content=blob, media_type="application/octet-stream",
                        headers={"X-Archive-Id": archive_id})

    @app.post("/v1/latent")
    async def upload_latent(request: Request, model_id: str):
        blob = await request.body()
        if len(blob) > cfg.max_upload_bytes:
            raise HTTPException(413, f"archive exceeds {cfg.max_upload_bytes} bytes")
        ckpt, _ = registry.checkpoint(model_id)
        try:
            archive = LatentArchive.from_bytes(blob)
        except InvalidArgument as exc:
            raise HTTPException(422, f"corrupt archive: {exc}") from exc
        try:
            archive.validate_against(ckpt)
        except InvalidArgument as exc:
            raise HTTPException(
                409, f"archive requires model {archive.model_id!r}: {exc}") from exc
        archive_id = archives.put_bytes(blob)
        return {"archive_id": archive_id, "model_id": model_id}

    @app.post("/v1/project")
    async def project_image(request: Request, model_id: str,
                            steps: int | None = None):
        blob = await request.body()
        if len(blob) > cfg.max_upload_bytes:
            raise HTTPException(413, f"upload exceeds {cfg.max_upload_bytes} bytes")
        ckpt, model = registry.checkpoint(model_id)
        try:
            target = decode_png(blob)
        except Exception as exc:  # noqa: BLE001 - any decode failure is a 422
            raise HTTPException(422, f"cannot decode image: {exc}") from exc
        if target.shape[:2] != (ckpt.arch.output_res, ckpt.arch.output_res):
            raise HTTPException(
                422, f"image is {target.shape[1]}x{target.shape[0]}, model expects "
                     f"{ckpt.arch.output_res}x{ckpt.arch.output_res}")
        steps = steps if steps is not None else cfg.projection_steps_default
        if not 0 <= steps <= cfg.projection_steps_max:
            raise HTTPException(400, f"steps: must be in [0, {cfg.projection_steps_max}]")
        job = Job(job_id=uuid.uuid4().hex)
        with jobs_lock:
            jobs[job.job_id] = job

        def run() -> None:
            job.status = "running"
            try:
                opts = ProjectionOptions(steps=steps)
                with model.lock:
                    result = project(target, ckpt, opts)
                archive = LatentArchive.from_render(
                    model_id, ckpt, result.w_plus, result.noise,
                    provenance={"projection": {"steps": steps}})
                job.archive_id = archives.put(archive)
                job.final_loss = result.loss_trace[-1][1]
                job.status = "done"
            except Exception as exc:  # noqa: BLE001 - failure detail surfaces via polling
                job.error = str(exc)
                job.status = "failed"

        executor.submit(run)
        return {"job_id": job.job_id, "status": job.status}

    @app.get("/v1/jobs/{job_id}")
    def job_status(job_id: str):
        with jobs_lock:
            job = jobs.get(job_id)
        if job is None:
            raise HTTPException(404, f"unknown job {job_id!r}")
        payload = {"job_id": job.job_id, "status": job.status}
        if job.archive_id is not None:
            payload["archive_id"] = job.archive_id
        if job.final_loss is not None:
            payload["final_loss"] = job.final_loss
        if job.error is not None:
            payload["error"] = job.error
        return payload

    return app
