"""HTTP API for the interactive tokenizer comparison playground."""

from __future__ import annotations

import asyncio
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .core import ToklabError
from .engine import TokenizerModel, token_breakdown
from .harness import CODEPOINTS, corpus_from_texts, run_comparison
from .tokfile import load_directory

DEFAULT_MAX_TEXT_BYTES = 64 * 1024


class RegistryError(ToklabError):
    pass


class TokenizerRegistry:
    """Immutable name → model map, loaded once at startup."""

    def __init__(self, models: dict[str, TokenizerModel]):
        if not models:
            raise RegistryError("tokenizer registry is empty")
        self._models = dict(models)

    @classmethod
    def from_directory(cls, directory: str | Path) -> "TokenizerRegistry":
        return cls(load_directory(directory))

    def names(self) -> list[str]:
        return sorted(self._models)

    def get(self, name: str) -> TokenizerModel | None:
        return self._models.get(name)

    def __len__(self) -> int:
        return len(self._models)


class TokenizeRequest(BaseModel):
    text: str
    tokenizers: list[str] = Field(min_length=1)


class CompareRequest(BaseModel):
    texts: list[str] = Field(min_length=1)
    tokenizers: list[str] = Field(min_length=1)
    baseline: str = "codepoints"
    # Deterministic timing for reproducible responses (used by tests and the
    # CLI-equivalence check; real timing is the default).
    fixed_clock: bool = False


def create_app(
    registry: TokenizerRegistry,
    static_dir: str | Path | None = None,
    max_text_bytes: int = DEFAULT_MAX_TEXT_BYTES,
    cors: bool = True,
    workers: int = 1,
    request_timeout: float | None = 30.0,
) -> FastAPI:
    app = FastAPI(title="toklab", version="0.1.0")

    if cors:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=["*"],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    if request_timeout is not None:

        @app.middleware("http")
        async def bound_response_time(request, call_next):
            if not request.url.path.startswith("/api/"):
                return await call_next(request)
            try:
                return await asyncio.wait_for(call_next(request), timeout=request_timeout)
            except asyncio.TimeoutError:
                return JSONResponse(
                    status_code=504,
                    content={"detail": f"request exceeded the {request_timeout}s budget"},
                )

    def resolve_names(names: list[str]) -> list[TokenizerModel]:
        models = []
        for name in names:
            model = registry.get(name)
            if model is None:
                raise HTTPException(
                    status_code=400,
                    detail={
                        "error": f"unknown tokenizer {name!r}",
                        "valid_names": registry.names(),
                    },
                )
            models.append(model)
        return models

    def check_size(text: str):
        if len(text.encode("utf-8")) > max_text_bytes:
            raise HTTPException(
                status_code=413,
                detail=f"text exceeds the {max_text_bytes} byte limit",
            )

    @app.get("/api/tokenizers")
    def list_tokenizers() -> list[dict]:
        out = []
        for name in registry.names():
            model = registry.get(name)
            out.append(
                {
                    "name": name,
                    "vocab_size": model.vocab_size,
                    "algorithm": model.algorithm.value,
                    "fallback": model.fallback.value,
                }
            )
        return out

    @app.post("/api/tokenize")
    def tokenize(request: TokenizeRequest) -> dict:
        check_size(request.text)
        models = resolve_names(request.tokenizers)
        results = []
        for model in models:
            breakdown = token_breakdown(model, request.text)
            results.append(
                {
                    "name": model.name,
                    "token_count": len(breakdown.items),
                    "source_text": breakdown.source_text,
                    "breakdown": [
                        {
                            "display": piece.display,
                            "id": piece.id,
                            "byte_span": [piece.start, piece.end],
                            "special": not model.vocab.has_id(piece.id),
                        }
                        for piece in breakdown.items
                    ],
                }
            )
        return {"results": results}

    @app.post("/api/compare")
    def compare(request: CompareRequest) -> dict:
        for text in request.texts:
            check_size(text)
        models = resolve_names(request.tokenizers)
        if request.baseline == "codepoints":
            baseline = CODEPOINTS
        else:
            baseline = resolve_names([request.baseline])[0]
        corpus = corpus_from_texts(request.texts, source="api:compare")
        report = run_comparison(
            models,
            baseline,
            corpus,
            workers=workers,
            fixed_clock=request.fixed_clock,
        )
        return report.as_dict()

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
