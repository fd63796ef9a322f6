import json
import logging
import time
from pathlib import Path

import click

from services import config
from services.errors import InputError, PoissonError
from services.session import load

logger = logging.getLogger(__name__)


class Settings:
    """Per-invocation options collected by the ``cli`` group."""

    def __init__(self, input=None, order=None, degree_cap=None, round_cap=None, fmt="json", timing=False, output=None):
        self.input = input or config.DEFAULT_SESSION
        self.order = order
        self.degree_cap = degree_cap if degree_cap is not None else config.DEGREE_CAP
        self.round_cap = round_cap or config.ROUND_CAP
        self.fmt = fmt
        self.timing = timing
        self.output = output
        self._session = None

    def session(self):
        if self._session is None:
            self._session = load(self.input, order=self.order)
        return self._session


def parse_point(text):
    if text is None:
        raise InputError("a point is required (--point a,b,...)")
    return [part.strip() for part in text.split(",") if part.strip()]


def render(payload, fmt):
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    lines = []
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True, ensure_ascii=False)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def respond(ctx, command, compute):
    """Run ``compute(settings) -> (payload, ok)`` and emit the result document.

    Exit codes: 0 when every check passes, 1 on a failed check or validation
    error, 2 on bad input, 3 on a broken internal invariant.
    """
    settings = ctx.find_object(Settings) or Settings()
    started = time.perf_counter()
    try:
        payload, ok = compute(settings)
        payload = {"success": True, "command": command, **payload}
        exit_code = 0 if ok else 1
        if not ok:
            logger.info("❌ %s: check failed", command)
    except PoissonError as error:
        logger.info("❌ %s: %s", command, error.message)
        payload = {**error.to_dict(), "command": command}
        exit_code = error.exit_code
    except Exception as error:  # noqa: BLE001
        logger.exception("❌ %s crashed", command)
        payload = {"success": False, "error": str(error), "code": "internal", "command": command}
        exit_code = 3
    if settings.timing:
        payload["seconds"] = round(time.perf_counter() - started, 6)
    text = render(payload, settings.fmt)
    click.echo(text, nl=False)
    if settings.output:
        Path(settings.output).write_text(text, encoding="utf-8")
    ctx.exit(exit_code)
