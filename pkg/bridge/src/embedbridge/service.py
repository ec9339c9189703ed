"""HTTP service over a model registry.

Three endpoints: POST /v1/embed returns per-token vectors for each word,
POST /v1/tokenize returns the bare subword sequences, GET /v1/health lists
the registered model names. Requests and responses are UTF-8 JSON; every
error body is a single-key object {"error": message}. The wire contract is
written down as JSON schema files next to this module (schemas/) and the
test suite validates live traffic against them.

Handlers are plain sync functions, so the framework runs them on worker
threads; the encoders they share are read-only after load, which keeps
concurrent requests safe without further locking.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Annotated

from fastapi import FastAPI, Request
from fastapi.exceptions import HTTPException, RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field, StringConstraints
from starlette.exceptions import HTTPException as StarletteHTTPException

from .registry import ModelRegistry, WordEncoder

SCHEMA_NAMES = (
    "embed_request",
    "embed_response",
    "tokenize_request",
    "tokenize_response",
    "health_response",
    "error_response",
)

NonEmpty = Annotated[str, StringConstraints(min_length=1)]


def load_schema(name: str) -> dict:
    """Read one of the shipped wire-contract schemas by base name."""
    if name not in SCHEMA_NAMES:
        raise KeyError(name)
    path = resources.files("embedbridge") / "schemas" / f"{name}.json"
    return json.loads(path.read_text(encoding="utf-8"))


class TokenizeRequest(BaseModel):
    # "model" is a payload field name fixed by the wire contract, not a
    # pydantic namespace; extra keys are rejected to match the schema.
    model_config = ConfigDict(extra="forbid", protected_namespaces=())

    model: NonEmpty
    words: Annotated[list[NonEmpty], Field(min_length=1)]


class EmbedRequest(TokenizeRequest):
    layer: int = -1


def create_app(registry: ModelRegistry) -> FastAPI:
    app = FastAPI(title="embed-bridge")

    def error_body(status: int, message: str) -> JSONResponse:
        return JSONResponse({"error": message}, status_code=status)

    @app.exception_handler(StarletteHTTPException)
    async def on_http_error(request: Request, exc: StarletteHTTPException):
        return error_body(exc.status_code, str(exc.detail))

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        # malformed bodies are a 400 under this contract, not a 422
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(part) for part in first.get("loc", ()))
        message = first.get("msg", "invalid request")
        return error_body(400, f"malformed request: {where}: {message}")

    def encoder_for(name: str) -> WordEncoder:
        try:
            return registry.get(name)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown model {name!r}")
        except Exception as exc:
            # registered but unloadable source; distinct from unknown name
            raise HTTPException(
                status_code=503, detail=f"model {name!r} failed to load: {exc}"
            )

    def no_tokens(word: str) -> HTTPException:
        # e.g. whitespace-only input; an empty row would break alignment
        return HTTPException(status_code=400, detail=f"word {word!r} produced no tokens")

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok", "models": registry.names()}

    @app.post("/v1/tokenize")
    def tokenize(body: TokenizeRequest) -> dict:
        encoder = encoder_for(body.model)
        results = []
        for word in body.words:
            tokens = encoder.tokenize_word(word)
            if not tokens:
                raise no_tokens(word)
            results.append({"word": word, "tokens": tokens})
        return {"results": results}

    @app.post("/v1/embed")
    def embed(body: EmbedRequest) -> dict:
        encoder = encoder_for(body.model)
        if not encoder.valid_layer(body.layer):
            raise HTTPException(
                status_code=400,
                detail=(
                    f"layer {body.layer} out of range "
                    f"[{-encoder.state_count}, {encoder.state_count - 1}]"
                ),
            )
        rows, dim = encoder.encode_words(body.words, body.layer)
        results = []
        for word, (tokens, vectors) in zip(body.words, rows):
            if not tokens:
                raise no_tokens(word)
            results.append({"word": word, "tokens": tokens, "vectors": vectors})
        return {"model": body.model, "dim": dim, "results": results}

    return app
