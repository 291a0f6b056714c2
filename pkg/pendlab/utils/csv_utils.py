"""CSV helpers: fixed float formatting and path-aware writes.

Every artifact is written with a header row, '.' decimals, LF line ends
and floats at 17 significant digits so reruns are byte-identical.
"""
import csv
import logging
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from pendlab.errors import OutputError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def format_float(value: Optional[float]) -> str:
    if value is None:
        return ''
    return format(float(value), '.17g')


def format_cell(value) -> str:
    if value is None:
        return ''
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, (tuple, list)):
        return ' '.join(format_cell(v) for v in value)
    return str(value)


def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Write header + rows; returns the path written"""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', newline='', encoding='utf-8') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(header)
            count = 0
            for row in rows:
                writer.writerow([format_cell(v) for v in row])
                count += 1
    except OSError as e:
        logger.error(f"❌ Error writing {path}: {e}")
        raise OutputError(path, e) from e
    logger.debug(f"Wrote {count} rows to {path}")
    return path
