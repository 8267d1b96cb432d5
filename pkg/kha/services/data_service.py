import logging
from typing import Any, Optional

import click

from ..algebra import io
from ..algebra.error_utils import SchemaError
from ..config import STDIO_PATH


def load_json(source: str, label: str) -> Any:
    """Reads a JSON document from a file path, or stdin when the path is "-"."""
    try:
        with click.open_file(source, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise SchemaError(label, f"cannot read {source}: {e.strerror or e}") from None
    logging.debug(f"Read {len(text)} characters for {label} from {source}")
    return io.loads(text, label)


def parse_inline(value: str, label: str) -> Any:
    """Flags such as --dim take literal JSON."""
    return io.loads(value, label)


def write_output(payload: Any, out: Optional[str] = None) -> None:
    """Writes canonical JSON to ``out`` or stdout."""
    text = io.dumps(payload)
    target = out or STDIO_PATH
    with click.open_file(target, "w", encoding="utf-8") as f:
        f.write(text)
    if target != STDIO_PATH:
        logging.info(f"Wrote {len(text)} characters to {target}")
