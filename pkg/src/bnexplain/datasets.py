"""Bundled example networks.

``drug`` is the classic treatment/recovery network exhibiting Simpson's
reversal (observing the drug raises the recovery probability, forcing it
lowers it). ``asia`` is the standard chest-clinic network with its usual
parameterization. ``academe`` models course marks; its CPTs are illustrative
values chosen for this package, not a canonical reference parameterization.
"""

from __future__ import annotations

from pathlib import Path

from .fileformat import load_network
from .network import Network

_DATA_DIR = Path(__file__).with_name("data")


def available() -> tuple[str, ...]:
    return tuple(sorted(p.stem for p in _DATA_DIR.glob("*.json")))


def network_path(name: str) -> Path:
    path = _DATA_DIR / f"{name}.json"
    if not path.exists():
        raise ValueError(f"no bundled network {name!r}; available: {', '.join(available())}")
    return path


def load(name: str) -> Network:
    return load_network(network_path(name))


def drug() -> Network:
    return load("drug")


def asia() -> Network:
    return load("asia")


def academe() -> Network:
    return load("academe")
