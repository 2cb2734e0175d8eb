"""Awareness models: per-attack-class criterion weights.

A model assigns every relevant criterion a nonnegative weight describing its
contribution to resisting one class of social-engineering attack.  Weights
are normalized to sum to 1 when loaded, so scores are invariant under
rescaling of the raw expert judgments.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .catalog import CATALOG
from .errors import InputError


class AttackClass(str, Enum):
    APPLICATION = "application"
    MITM = "mitm"
    PHISHING = "phishing"


@dataclass(frozen=True)
class AwarenessModel:
    attack_class: AttackClass
    weights: dict[str, float]

    def __post_init__(self):
        if not self.weights:
            raise InputError("awareness model has no weights")
        for cid, w in self.weights.items():
            if cid not in CATALOG:
                raise InputError(f"unknown criterion {cid}")
            if w < 0:
                raise InputError(f"negative weight for criterion {cid}")
        total = sum(self.weights.values())
        if total <= 0:
            raise InputError("awareness model weights must include one positive weight")
        object.__setattr__(
            self, "weights", {cid: w / total for cid, w in self.weights.items()}
        )


def uniform_model(attack_class: AttackClass, criteria=None) -> AwarenessModel:
    """Equal-weight model over the given criteria (default: whole catalog)."""
    ids = list(criteria) if criteria is not None else list(CATALOG)
    return AwarenessModel(attack_class, {cid: 1.0 for cid in ids})


def load_model(path) -> AwarenessModel:
    """Load a model file.

    Format: UTF-8 text, one ``criterion_id<TAB>weight`` per line, ``#``
    comments, and a header line ``@class application|mitm|phishing``.
    """
    attack_class = None
    weights: dict[str, float] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("@class"):
            token = line[len("@class"):].strip()
            try:
                attack_class = AttackClass(token)
            except ValueError:
                raise InputError(f"{path}:{lineno}: unknown attack class {token!r}") from None
            continue
        cid, _, raw = line.partition("\t")
        cid = cid.strip()
        raw = raw.strip()
        if not raw:
            raise InputError(f"{path}:{lineno}: expected 'criterion<TAB>weight'")
        if cid not in CATALOG:
            raise InputError(f"{path}:{lineno}: unknown criterion {cid}")
        if cid in weights:
            raise InputError(f"{path}:{lineno}: duplicate criterion {cid}")
        try:
            weight = float(raw)
        except ValueError:
            raise InputError(f"{path}:{lineno}: bad weight {raw!r}") from None
        if weight < 0:
            raise InputError(f"{path}:{lineno}: negative weight for criterion {cid}")
        weights[cid] = weight
    if attack_class is None:
        raise InputError(f"{path}: missing '@class' header line")
    if not weights:
        raise InputError(f"{path}: model file defines no weights")
    return AwarenessModel(attack_class, weights)


def save_model(model: AwarenessModel, path) -> None:
    lines = [f"@class {model.attack_class.value}"]
    lines += [f"{cid}\t{w:.12g}" for cid, w in sorted(model.weights.items())]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
