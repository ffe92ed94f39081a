"""
gadget_store.py
───────────────
JSON persistence for dot-product gadgets.

File layout (keys in this order, 2-space indent, trailing newline):

    {
      "format_version": 1,
      "m": 6, "n": 9, "t": 7,
      "B": [...],   row-major residues, n*t entries
      "C": [...],
      "recipe": "block(n=9,s=3)"
    }

Saving the same gadget twice yields byte-identical files, and a loaded file
saves back bit-exactly.
"""

import logging
from pathlib import Path
from typing import List

import numpy as np
from pydantic import BaseModel, ValidationError, model_validator

from errors import GadgetFormatError
from gadget import DotGadget
from zmod import factorize

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


class GadgetFile(BaseModel):
    format_version: int = FORMAT_VERSION
    m:      int
    n:      int
    t:      int
    B:      List[int]
    C:      List[int]
    recipe: str = "manual"

    @model_validator(mode="after")
    def _consistent(self):
        if self.format_version != FORMAT_VERSION:
            raise ValueError(f"unsupported format_version {self.format_version}")
        if self.m < 2 or self.n < 1 or self.t < 1:
            raise ValueError(f"need m >= 2, n >= 1, t >= 1 (got m={self.m}, n={self.n}, t={self.t})")
        for name in ("B", "C"):
            values = getattr(self, name)
            if len(values) != self.n * self.t:
                raise ValueError(f"{name} has {len(values)} entries, expected n*t = {self.n * self.t}")
            if any(v < 0 or v >= self.m for v in values):
                raise ValueError(f"{name} entries must lie in [0, {self.m})")
        return self

    def matrices(self):
        """(B, C) as n×t int64 arrays."""
        shape = (self.n, self.t)
        return (np.array(self.B, dtype=np.int64).reshape(shape),
                np.array(self.C, dtype=np.int64).reshape(shape))

    def to_gadget(self) -> DotGadget:
        B, C = self.matrices()
        return DotGadget(factorize(self.m), self.n, self.t, B, C, recipe=self.recipe)

    @classmethod
    def from_gadget(cls, g: DotGadget) -> "GadgetFile":
        return cls(
            m=g.mod.m, n=g.n, t=g.t,
            B=[int(v) for v in g.B.ravel()],
            C=[int(v) for v in g.C.ravel()],
            recipe=g.recipe,
        )

    def dumps(self) -> str:
        return self.model_dump_json(indent=2) + "\n"


def load_record(path) -> GadgetFile:
    path = Path(path)
    if not path.exists():
        raise GadgetFormatError(f"gadget file not found: {path}")
    try:
        return GadgetFile.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as exc:
        raise GadgetFormatError(f"{path}: {exc.errors()[0]['msg']}") from exc


def load_gadget(path) -> DotGadget:
    return load_record(path).to_gadget()


def save_record(path, record: GadgetFile):
    Path(path).write_text(record.dumps(), encoding="utf-8")


def save_gadget(path, g: DotGadget):
    save_record(path, GadgetFile.from_gadget(g))
    logger.info("saved gadget n=%d t=%d to %s", g.n, g.t, path)
