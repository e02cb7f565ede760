"""Comment CSV loading and writing (RFC 4180, handled by the csv module)."""

import csv
from dataclasses import dataclass
from typing import Sequence

from .errors import DataError, SchemaError
from .labels import LABELS

_REQUIRED = ("id", "comment_text")


@dataclass(frozen=True)
class LabeledComment:
    """One dataset row. ``labels`` follows the canonical six-label order and
    is None for unlabeled test rows."""

    id: str
    text: str
    labels: tuple[int, ...] | None = None


def load_dataset(path, expect_labels: bool = True) -> list[LabeledComment]:
    """Read a comment CSV into memory, preserving row order.

    The header must contain ``id`` and ``comment_text``, plus the six label
    columns when ``expect_labels`` is set. Extra columns are ignored. Quoted
    fields with embedded commas, quotes and newlines round-trip intact.

    Raises SchemaError for missing columns and DataError for short/long rows,
    empty ids and label values outside {0, 1}. Row numbers in messages count
    the header as row 1, matching a spreadsheet view of the file.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected a header row") from None
        col = {name: i for i, name in enumerate(header)}
        required = _REQUIRED + (LABELS if expect_labels else ())
        for name in required:
            if name not in col:
                raise SchemaError(f"{path}: missing required column: {name}")
        comments = []
        for row_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise DataError(
                    f"{path}: row {row_no}: expected {len(header)} fields, got {len(row)}"
                )
            cid = row[col["id"]]
            if not cid:
                raise DataError(f"{path}: row {row_no}: empty id")
            labels = None
            if expect_labels:
                values = []
                for name in LABELS:
                    raw = row[col[name]]
                    if raw not in ("0", "1"):
                        raise DataError(
                            f"{path}: row {row_no}: label {name!r} must be 0 or 1, got {raw!r}"
                        )
                    values.append(int(raw))
                labels = tuple(values)
            comments.append(LabeledComment(id=cid, text=row[col["comment_text"]], labels=labels))
    return comments


def write_dataset(comments: Sequence[LabeledComment], path, include_labels: bool | None = None) -> None:
    """Write comments to CSV so that load_dataset round-trips every field.

    ``include_labels`` defaults to whether the first comment carries labels.
    """
    if include_labels is None:
        include_labels = bool(comments) and comments[0].labels is not None
    header = list(_REQUIRED) + (list(LABELS) if include_labels else [])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for c in comments:
            row = [c.id, c.text]
            if include_labels:
                if c.labels is None:
                    raise DataError(f"comment {c.id!r} has no labels to write")
                row.extend(str(v) for v in c.labels)
            writer.writerow(row)
