# restoration/solvers/presets.py
from dataclasses import dataclass

from restoration.exceptions import ArgumentError

PresetId = str  # "cameraman" | "mountain"


@dataclass(frozen=True)
class Preset:
    alpha: str
    theta: str
    beta: str
    lam: float
    contraction: float
    rho: float
    kernel: str
    note: str = ""


PRESETS = {
    "cameraman": Preset(
        alpha="const:0.5",
        theta="const:0.1",
        beta="harmonic:0.1",
        lam=0.99,
        contraction=0.99,
        rho=1e-4,
        kernel="motion:9,0",
    ),
    "mountain": Preset(
        alpha="const:0.5",
        theta="const:0.5",
        beta="harmonic:0.5",
        lam=0.99,
        contraction=0.9999,
        rho=1e-4,
        kernel="gaussian:9,4",
        # no rho is known for this parameter set
        note="rho=1e-4 is assumed",
    ),
}


def get_preset(name: PresetId | None) -> Preset | None:
    if not name:
        return None
    try:
        return PRESETS[name.strip().lower()]
    except KeyError:
        raise ArgumentError(
            f"unknown preset '{name}'. Expected one of: {', '.join(sorted(PRESETS))}"
        ) from None
