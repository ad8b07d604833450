"""Service entry point: ``python -m enclave.server [--config PATH]``."""

from __future__ import annotations

import argparse

import uvicorn

from .api import create_app
from .config import build_platform, load_config


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(prog="enclave-server",
                                     description="Run the platform HTTP service.")
    parser.add_argument("--config", default=None, help="path to a JSON config file")
    parser.add_argument("--host", default=None)
    parser.add_argument("--port", type=int, default=None)
    args = parser.parse_args(argv)

    config = load_config(args.config)
    if args.host:
        config.listen_host = args.host
    if args.port:
        config.listen_port = args.port

    platform = build_platform(config)
    app = create_app(platform, config.session_request_cap)
    uvicorn.run(app, host=config.listen_host, port=config.listen_port,
                log_level="warning")


if __name__ == "__main__":
    main()
