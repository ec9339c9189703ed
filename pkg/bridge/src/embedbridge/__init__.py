"""Serve pretrained-encoder tokenizations and token vectors over HTTP."""

__version__ = "0.1.0"

from .registry import (
    CACHE_ENV,
    DEFAULT_HOST,
    DEFAULT_PORT,
    HOST_ENV,
    MODELS_ENV,
    PORT_ENV,
    ModelRegistry,
    WordEncoder,
    parse_model_specs,
)
from .service import SCHEMA_NAMES, EmbedRequest, TokenizeRequest, create_app, load_schema

__all__ = [name for name in dir() if not name.startswith("_")]
