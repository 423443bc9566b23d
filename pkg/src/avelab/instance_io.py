"""Instance files: a JSON object with keys ``n``, ``A`` (row-major) and ``b``.

Numbers are written with 17 significant digits, so reading back a written
file reproduces every double exactly.
"""

import json
import re

import numpy as np

from .core import AveInstance

RESERVED = ("n", "A", "b")


class InstanceParseError(ValueError):
    """Malformed instance file; carries a 1-based line and column."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


def format_number(x):
    return "%.17g" % float(x)


def _parse_int(token):
    # "-0" is how a negative zero is written; keep its sign
    return -0.0 if token == "-0" else int(token)


def _dump(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(str(k))}: {_dump(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        if obj and isinstance(obj[0], (list, tuple, np.ndarray)):
            rows = [f"{pad}  {_dump(r, indent + 1)}" for r in obj]
            return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
        return "[" + ", ".join(_dump(v, indent + 1) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None or isinstance(obj, str):
        return json.dumps(obj.item() if isinstance(obj, np.bool_) else obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_number(obj)
    return json.dumps(obj)


def emit(inst, metadata=None):
    """Serialize an instance (and optional metadata) to text."""
    doc = {"n": inst.n, "A": inst.A, "b": inst.b}
    for k, v in (metadata or {}).items():
        if k in RESERVED:
            raise ValueError(f"metadata key {k!r} is reserved")
        doc[k] = v
    return _dump(doc) + "\n"


def _locate(text, key):
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    if not m:
        return 1, 1
    line = text.count("\n", 0, m.start()) + 1
    col = m.start() - (text.rfind("\n", 0, m.start()) + 1) + 1
    return line, col


def parse(text, require_b=True):
    """Parse instance text; returns ``(AveInstance, metadata)``.

    When ``require_b`` is false a missing ``b`` defaults to zeros.
    """
    try:
        doc = json.loads(text, parse_int=_parse_int)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise InstanceParseError("top level must be an object")
    for key in ("n", "A") + (("b",) if require_b else ()):
        if key not in doc:
            raise InstanceParseError(f"missing key {key!r}")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InstanceParseError("n must be a positive integer", *_locate(text, "n"))
    try:
        A = np.array(doc["A"], dtype=float)
    except (TypeError, ValueError):
        raise InstanceParseError("A must be a numeric matrix", *_locate(text, "A")) from None
    if A.shape != (n, n):
        raise InstanceParseError(f"A must be {n} x {n}, got shape {A.shape}", *_locate(text, "A"))
    if "b" in doc:
        try:
            b = np.array(doc["b"], dtype=float)
        except (TypeError, ValueError):
            raise InstanceParseError("b must be a numeric vector", *_locate(text, "b")) from None
        if b.shape != (n,):
            raise InstanceParseError(f"b must have length {n}, got shape {b.shape}",
                                     *_locate(text, "b"))
    else:
        b = np.zeros(n)
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise InstanceParseError("non-finite entry", *_locate(text, "A"))
    meta = {k: v for k, v in doc.items() if k not in RESERVED}
    return AveInstance(A, b), meta


def read(path, require_b=True):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), require_b)


def write(path, inst, metadata=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit(inst, metadata))


dumps = _dump
