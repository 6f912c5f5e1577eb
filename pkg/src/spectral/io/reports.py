import math
from numbers import Real
from pathlib import Path
from typing import Any, Dict, Union

from jinja2 import Environment, FileSystemLoader

from src.framework.logging import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]

TEMPLATES_DIR = Path(__file__).parent / 'templates'


def format_number(value: Any) -> str:
    """Template filter: floats with 10 significant digits, everything else as is"""
    if isinstance(value, bool) or not isinstance(value, Real):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if math.isnan(value):
        return 'nan'
    return f"{value:.10g}"


def _environment() -> Environment:
    env = Environment(
        loader=FileSystemLoader(str(TEMPLATES_DIR)),
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    env.filters['num'] = format_number
    return env


_ENV = _environment()


def render_report(template: str, **context) -> str:
    context.setdefault('config', None)
    return _ENV.get_template(template).render(**context)


def write_report(path: PathLike, template: str, **context) -> str:
    content = render_report(template, **context)
    Path(path).write_text(content, encoding='utf-8')
    logger.debug(f"Wrote {template} report to {path}")
    return content


def parse_report(text: str) -> Dict[str, str]:
    """``key = value`` lines of a rendered report; comments and section headers are skipped"""
    values = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith('#') or line.startswith('[') or ' = ' not in line:
            continue
        key, value = line.split(' = ', 1)
        values.setdefault(key.strip(), value.strip())
    return values
