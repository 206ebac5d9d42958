"""Built-in scenarios, runnable with ``hssim run --seed-preset <name>``."""

from __future__ import annotations

import math

from ..core.sampling import constant, cosine, raised_cosine, sine
from ..evolution import StepControl
from .scenario import ObserverSpec, ScenarioConfig, ScenarioConfigError, SweepConfig

# b with 2 pi^2 b^2 - (3/2) 0.2^2 = 1, giving a(0) = -1/2
NEG_HALF_AMPLITUDE = math.sqrt(1.06 / (2.0 * math.pi**2))

# symmetric runs stop once the spectral tail shows the grid is exhausted
_BLOWUP_CONTROL = StepControl(
    cfl=0.2, dt_max=2e-3, slope_floor=-500.0, resolution_tol=1e-4, halt_on_resolution_loss=True
)
_SWEEP_CONTROL = StepControl(cfl=0.2, dt_max=2e-3, slope_floor=-500.0, resolution_tol=1e-4)
_SMOOTH_CONTROL = StepControl(cfl=0.3, dt_max=5e-3)

_CONSERVATION = ObserverSpec("conservation")
_ORIGIN = ObserverSpec("origin_slope")
_CHARACTERISTICS = ObserverSpec("characteristics", seeds=64)


def _generic(name: str, alpha: float, kappa: float, horizon: float, description: str, **extra: object) -> ScenarioConfig:
    options: dict = {
        "observers": (_CONSERVATION, ObserverSpec("sobolev", orders=(1.0, 2.0)), _CHARACTERISTICS),
        "snapshot_times": (0.0, 0.25, 0.5, horizon),
    }
    options.update(extra)
    return ScenarioConfig(
        name=name,
        alpha=alpha,
        kappa=kappa,
        n=256,
        u0=sine(0.1),
        rho0=cosine(0.1, offset=0.5),
        horizon=horizon,
        control=_SMOOTH_CONTROL,
        description=description,
        **options,
    )


def _build() -> dict[str, ScenarioConfig]:
    scenarios = [
        ScenarioConfig(
            name="zero-forcing-blowup",
            alpha=-1.0,
            kappa=-1.0,
            n=512,
            u0=sine(-1.0),
            rho0=raised_cosine(2.0 * math.pi / math.sqrt(3.0)),
            horizon=0.4,
            control=_BLOWUP_CONTROL,
            dealias=False,
            observers=(_CONSERVATION, _ORIGIN),
            snapshot_times=(0.0, 0.1, 0.2, 0.3),
            description="Symmetric blow-up with a = 0; exact time 1/pi and rate -2.",
        ),
        ScenarioConfig(
            name="neg-half-forcing-blowup",
            alpha=-1.0,
            kappa=-1.0,
            n=512,
            u0=sine(-NEG_HALF_AMPLITUDE),
            rho0=raised_cosine(0.2),
            horizon=1.5,
            control=_BLOWUP_CONTROL,
            dealias=False,
            observers=(_CONSERVATION, _ORIGIN),
            snapshot_times=(0.0, 0.5, 1.0),
            description="Symmetric blow-up with a = -1/2; slope follows a tangent profile.",
        ),
        ScenarioConfig(
            name="zero-density-blowup",
            alpha=-1.0,
            kappa=-1.0,
            n=512,
            u0=sine(-1.0),
            rho0=constant(0.0),
            horizon=0.5,
            control=_BLOWUP_CONTROL,
            dealias=False,
            observers=(_CONSERVATION, _ORIGIN),
            description="Odd velocity without density; a < 0 and the slope breaks before 1/pi.",
        ),
        _generic("conservation-kappa-minus1", -1.0, -1.0, 1.0, "Conservation of a(t) and E(t) with kappa = -1."),
        _generic("conservation-kappa1", -1.0, 1.0, 1.0, "Conservation of a(t) and E(t) with kappa = 1."),
        _generic("dadt-alpha1", 1.0, 1.0, 0.5, "Rate identity for a(t) away from alpha = -1."),
        _generic("transport-alpha0", 0.0, 1.0, 1.0, "Density is transported unchanged when alpha = 0."),
        ScenarioConfig(
            name="global-alpha-minus1",
            alpha=-1.0,
            kappa=1.0,
            n=256,
            u0=sine(1.0),
            rho0=cosine(0.5, offset=1.0),
            horizon=10.0,
            control=StepControl(cfl=0.3, dt_max=1e-2, persistence_threshold=1e3, resolution_tol=1e-6),
            observers=(_CONSERVATION, ObserverSpec("sobolev", orders=(1.0, 2.0)), ObserverSpec("characteristics", seeds=64, every=10)),
            snapshot_times=(0.0, 1.0, 5.0, 10.0),
            description="Sign-definite density with kappa > 0; the solution exists globally.",
        ),
    ]
    for alpha in (-2.0, -1.0, 0.0, 1.0):
        scenarios.append(
            ScenarioConfig(
                name=f"proudman-johnson-alpha{alpha:g}",
                alpha=alpha,
                kappa=1.0,
                n=256,
                u0=sine(0.1),
                rho0=constant(0.0),
                horizon=0.5,
                control=_SMOOTH_CONTROL,
                description="Vanishing density stays zero; the scalar reduction.",
            )
        )
    return {scenario.name: scenario for scenario in scenarios}


SCENARIO_PRESETS: dict[str, ScenarioConfig] = _build()

# published name of the a = 0 blow-up scenario
PRESET_ALIASES: dict[str, str] = {"prop24-case-i": "zero-forcing-blowup"}

SWEEP_PRESETS: dict[str, SweepConfig] = {
    "kappa-dichotomy": SweepConfig(
        base=ScenarioConfig(
            name="kappa-dichotomy",
            alpha=-1.0,
            kappa=1.0,
            n=128,
            u0=sine(-1.0),
            rho0=cosine(0.5, offset=1.0),
            horizon=2.0,
            control=_SWEEP_CONTROL,
            observers=(_CONSERVATION,),
            description="Symmetric data: kappa = -1 breaks, kappa = 1 with positive density persists.",
        ),
        alphas=(-1.0,),
        kappas=(-1.0, 1.0),
        parallelism=2,
    ),
}


def get_preset(name: str) -> ScenarioConfig:
    try:
        return SCENARIO_PRESETS[PRESET_ALIASES.get(name, name)]
    except KeyError:
        raise ScenarioConfigError(
            f"unknown preset {name!r}; see 'hssim list-scenarios'", path="seed_preset"
        ) from None


def get_sweep_preset(name: str) -> SweepConfig:
    try:
        return SWEEP_PRESETS[name]
    except KeyError:
        raise ScenarioConfigError(
            f"unknown sweep preset {name!r}; see 'hssim list-scenarios'", path="seed_preset"
        ) from None


__all__ = [
    "NEG_HALF_AMPLITUDE",
    "PRESET_ALIASES",
    "SCENARIO_PRESETS",
    "SWEEP_PRESETS",
    "get_preset",
    "get_sweep_preset",
]
