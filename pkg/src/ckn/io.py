"""JSON input parsing with field-level diagnostics, and atomic output."""
from __future__ import annotations

import json
import os
import re
import tempfile
from fractions import Fraction
from pathlib import Path

from .params import ParamTuple, as_rational
from .trials import TrialFunction

TUPLE_FIELDS = ("n", "p", "q", "r", "alpha", "beta", "gamma", "a")


class InputError(ValueError):
    """Malformed input file; maps to exit code 2."""


def _line_of(text: str, section: str, key: str) -> int | None:
    start = text.find(f'"{section}"')
    if start < 0:
        return None
    m = re.compile(r'"%s"\s*:' % re.escape(key)).search(text, start)
    if m is None:
        return None
    return text.count("\n", 0, m.start()) + 1


class InputFile:
    def __init__(self, data: dict, text: str = "", path: str = "<input>"):
        if not isinstance(data, dict):
            raise InputError(f"{path}: top level must be a JSON object")
        self.data, self.text, self.path = data, text, path

    @classmethod
    def load(cls, path) -> "InputFile":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
        return cls(data, text, str(path))

    def _where(self, section, key):
        line = _line_of(self.text, section, key)
        loc = f"{self.path}:{line}" if line else self.path
        return f"{loc}: field {section}.{key}"

    def rational(self, section: str, key: str) -> Fraction:
        sec = self.section(section)
        if key not in sec:
            raise InputError(f"{self.path}: missing field {section}.{key}")
        try:
            return as_rational(sec[key], key)
        except (TypeError, ValueError) as exc:
            raise InputError(f"{self._where(section, key)}: {exc}") from exc

    def section(self, name: str, required: bool = True):
        if name not in self.data:
            if required:
                raise InputError(f"{self.path}: missing section {name!r}")
            return None
        return self.data[name]

    def has(self, name: str) -> bool:
        return name in self.data

    def param_tuple(self) -> ParamTuple:
        sec = self.section("tuple")
        if not isinstance(sec, dict):
            raise InputError(f"{self.path}: section 'tuple' must be an object")
        unknown = set(sec) - set(TUPLE_FIELDS)
        if unknown:
            raise InputError(f"{self.path}: unknown tuple field(s) {sorted(unknown)}")
        vals = {k: self.rational("tuple", k) for k in TUPLE_FIELDS}
        if vals["n"].denominator != 1:
            raise InputError(f"{self._where('tuple', 'n')}: dimension must be an integer")
        vals["n"] = int(vals["n"])
        try:
            return ParamTuple(**vals)
        except (TypeError, ValueError) as exc:
            raise InputError(f"{self.path}: {exc}") from exc

    def trials(self) -> list[TrialFunction]:
        sec = self.section("trial")
        items = sec if isinstance(sec, list) else [sec]
        out = []
        for i, d in enumerate(items):
            if not isinstance(d, dict) or "family" not in d:
                raise InputError(f"{self.path}: trial #{i} needs a 'family'")
            try:
                out.append(TrialFunction.from_dict(d))
            except (TypeError, ValueError, KeyError) as exc:
                raise InputError(f"{self.path}: trial #{i}: {exc}") from exc
        return out

    def grid(self) -> list[Fraction]:
        sec = self.section("grid")
        if not isinstance(sec, list):
            raise InputError(f"{self.path}: section 'grid' must be a list of rationals")
        out = []
        for i, v in enumerate(sec):
            try:
                out.append(as_rational(v, f"grid[{i}]"))
            except (TypeError, ValueError) as exc:
                raise InputError(f"{self.path}: {exc}") from exc
        return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n"


def write_atomic(path, text: str) -> None:
    """Write to a temporary file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
