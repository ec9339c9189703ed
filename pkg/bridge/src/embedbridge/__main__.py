"""Run the bridge under uvicorn, configured entirely from the environment.

EMBED_BRIDGE_MODELS  comma separated name=source model declarations
EMBED_BRIDGE_CACHE   optional download cache directory for model sources
EMBED_BRIDGE_PORT    listen port, default 8301
EMBED_BRIDGE_HOST    bind address, default 127.0.0.1
"""

from __future__ import annotations

import os

import uvicorn

from .registry import DEFAULT_HOST, DEFAULT_PORT, HOST_ENV, PORT_ENV, ModelRegistry
from .service import create_app


def main() -> int:
    registry = ModelRegistry.from_env(os.environ)
    host = os.environ.get(HOST_ENV, DEFAULT_HOST)
    port = int(os.environ.get(PORT_ENV, str(DEFAULT_PORT)))
    uvicorn.run(create_app(registry), host=host, port=port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
