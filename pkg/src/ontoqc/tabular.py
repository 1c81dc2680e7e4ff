"""CSV emission with LF record ends and RFC 4180 quoting of embedded CR/LF."""

import csv
import io
from typing import Iterable


def csv_text(header: Iterable, rows: Iterable[Iterable], delimiter: str = ",") -> str:
    # The csv module quotes only characters that appear in the line terminator,
    # so rows are written with CRLF (quoting both) and the terminator swapped.
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n", delimiter=delimiter)
    out = []
    for row in [header, *rows]:
        buf.seek(0)
        buf.truncate()
        w.writerow(row)
        out.append(buf.getvalue()[:-2] + "\n")
    return "".join(out)
