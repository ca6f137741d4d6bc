"""Closed-form path-loss models for sub-6 GHz macro-cell planning.

Every model returns the deterministic mean path loss in dB for a given
link geometry. Shadow-fading standard deviations published alongside a
model are carried as catalog metadata only, never added to the returned
value. Constants come from the defining documents: the IEEE 802.16 SUI
channel-model contribution, the ECC-33 report, WINNER II deliverable
D1.1.2 Table 4-4, 3GPP TR 38.901 Table 7.4.1-1, and the COST 231 final
report.

Evaluating a model outside its published frequency/distance validity is
allowed (planners extrapolate all the time); use ``validity_warnings`` to
find out when that happens.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

C_LIGHT = 299792458.0
# breakpoint-distance formulas in WINNER II and TR 38.901 define c = 3.0e8
C_BREAKPOINT = 3.0e8

_CITY_SIZES = ("small", "medium", "large")


@dataclass(frozen=True)
class LinkGeometry:
    """One BS-UE link: distances, carrier frequency, and antenna heights.

    d2d_m is the ground (horizontal) distance, d3d_m the slant distance.
    avg_building_height_m / avg_street_width_m feed the rural-macro NLOS
    clutter terms; city_size selects the Hata mobile-antenna correction.
    """

    d2d_m: float
    d3d_m: float
    f_ghz: float
    h_bs_m: float
    h_ut_m: float
    avg_building_height_m: float = 5.0
    avg_street_width_m: float = 20.0
    city_size: str = "medium"

    def __post_init__(self):
        for label, v in (
            ("d2d_m", self.d2d_m),
            ("d3d_m", self.d3d_m),
            ("h_bs_m", self.h_bs_m),
            ("h_ut_m", self.h_ut_m),
            ("avg_building_height_m", self.avg_building_height_m),
            ("avg_street_width_m", self.avg_street_width_m),
        ):
            if not v > 0:
                raise ValueError(f"{label} must be > 0, got {v!r}")
        if not self.f_ghz > 0:
            raise ValueError(f"f_ghz must be > 0, got {self.f_ghz!r}")
        if self.d3d_m + 1e-9 < self.d2d_m:
            raise ValueError("d3d_m cannot be smaller than d2d_m")
        if self.city_size not in _CITY_SIZES:
            raise ValueError(f"city_size must be one of {_CITY_SIZES}")

    @classmethod
    def at(cls, d2d_m: float, f_ghz: float, h_bs_m: float, h_ut_m: float, **kw) -> "LinkGeometry":
        """Build from ground distance; slant distance follows from heights."""
        d3d = math.hypot(d2d_m, h_bs_m - h_ut_m)
        return cls(d2d_m, d3d, f_ghz, h_bs_m, h_ut_m, **kw)

    @classmethod
    def at_slant(cls, d3d_m: float, f_ghz: float, h_bs_m: float, h_ut_m: float, **kw) -> "LinkGeometry":
        """Build from slant distance; ground distance follows from heights."""
        dh = abs(h_bs_m - h_ut_m)
        if d3d_m < dh:
            raise ValueError(f"slant distance {d3d_m} m shorter than height difference {dh} m")
        d2d = math.sqrt(max(d3d_m * d3d_m - dh * dh, 0.0))
        return cls(d2d, d3d_m, f_ghz, h_bs_m, h_ut_m, **kw)

    def with_distance(self, d2d_m: float) -> "LinkGeometry":
        d3d = math.hypot(d2d_m, self.h_bs_m - self.h_ut_m)
        return replace(self, d2d_m=d2d_m, d3d_m=d3d)

    def with_distances(self, d2d_m: float, d3d_m: float) -> "LinkGeometry":
        return replace(self, d2d_m=d2d_m, d3d_m=d3d_m)


def fspl_db(distance_m: float, f_ghz: float) -> float:
    """Free-space path loss: 20 log10(d_m) + 20 log10(f_GHz) + 32.45."""
    if distance_m <= 0 or f_ghz <= 0:
        raise ValueError("distance and frequency must be > 0")
    return 20.0 * math.log10(distance_m) + 20.0 * math.log10(f_ghz) + 32.45


def fspl(g: LinkGeometry) -> float:
    """Free-space path loss of the slant path."""
    return fspl_db(g.d3d_m, g.f_ghz)


def log_distance(distance_m: float, a0_db: float, gamma: float, d0_m: float = 100.0) -> float:
    """Log-distance mean path loss anchored at reference distance d0."""
    if distance_m <= 0 or d0_m <= 0:
        raise ValueError("distances must be > 0")
    return a0_db + 10.0 * gamma * math.log10(distance_m / d0_m)


# ---------------------------------------------------------------------------
# SUI (IEEE 802.16 Stanford University Interim)

_SUI_TERRAIN = {
    "A": (4.6, 0.0075, 12.6),
    "B": (4.0, 0.0065, 17.1),
    "C": (3.6, 0.005, 20.0),
}
_SUI_D0 = 100.0


def sui(g: LinkGeometry, terrain: str) -> float:
    """SUI model, terrain class A (hilly/dense), B, or C (flat/light).

    A + 10*gamma*log10(d/100) + X_f + X_h with A the free-space loss at
    100 m, gamma = a - b*h_bs + c/h_bs, X_f the frequency correction above
    2 GHz, and X_h the receive-height correction (terrain C uses -20.0
    instead of -10.8 per decade of h_ut/2).
    """
    try:
        a, b, c = _SUI_TERRAIN[terrain.upper()]
    except KeyError:
        raise ValueError(f"unknown SUI terrain {terrain!r}; use A, B, or C") from None
    lam = C_LIGHT / (g.f_ghz * 1e9)
    base = 20.0 * math.log10(4.0 * math.pi * _SUI_D0 / lam)
    gamma = a - b * g.h_bs_m + c / g.h_bs_m
    f_mhz = g.f_ghz * 1000.0
    x_f = 6.0 * math.log10(f_mhz / 2000.0)
    if terrain.upper() in ("A", "B"):
        x_h = -10.8 * math.log10(g.h_ut_m / 2.0)
    else:
        x_h = -20.0 * math.log10(g.h_ut_m / 2.0)
    return base + 10.0 * gamma * math.log10(g.d2d_m / _SUI_D0) + x_f + x_h


def sui_exponent(h_bs_m: float, terrain: str) -> float:
    """Path-loss exponent used by the SUI model for a BS height."""
    a, b, c = _SUI_TERRAIN[terrain.upper()]
    return a - b * h_bs_m + c / h_bs_m


# ---------------------------------------------------------------------------
# ECC-33


def ecc33(g: LinkGeometry, large_city: bool = False) -> float:
    """ECC-33 model: A_fs + A_bm - G_b - G_r (medium-city G_r by default)."""
    d_km = g.d2d_m / 1000.0
    f = g.f_ghz
    lf = math.log10(f)
    ld = math.log10(d_km)
    a_fs = 92.4 + 20.0 * ld + 20.0 * lf
    a_bm = 20.41 + 9.83 * ld + 7.894 * lf + 9.56 * lf * lf
    g_b = math.log10(g.h_bs_m / 200.0) * (13.958 + 5.8 * ld * ld)
    if large_city:
        g_r = 0.759 * g.h_ut_m - 1.862
    else:
        g_r = (42.57 + 13.7 * lf) * (math.log10(g.h_ut_m) - 0.585)
    return a_fs + a_bm - g_b - g_r


# ---------------------------------------------------------------------------
# WINNER II (D1.1.2 Table 4-4): C1 suburban, C2 urban, D1 rural macro

_WINNER_SCENARIOS = ("C1", "C2", "D1")


def winner2(g: LinkGeometry, scenario: str, condition: str) -> float:
    """WINNER II macro path loss for scenario C1, C2, or D1, LOS or NLOS.

    LOS branches are dual-slope around the breakpoint distance
    4*h_bs*h_ut*f/c (C2 uses effective heights reduced by 1 m).
    """
    scenario = scenario.upper()
    condition = condition.upper()
    if scenario not in _WINNER_SCENARIOS:
        raise ValueError(f"unknown WINNER II scenario {scenario!r}")
    if condition not in ("LOS", "NLOS"):
        raise ValueError("condition must be LOS or NLOS")
    d = g.d2d_m
    hbs, hut = g.h_bs_m, g.h_ut_m
    lf5 = math.log10(g.f_ghz / 5.0)
    ld = math.log10(d)

    if condition == "NLOS":
        if scenario == "D1":
            return (
                25.1 * ld + 55.4
                - 0.13 * (hbs - 25.0) * math.log10(d / 100.0)
                - 0.9 * (hut - 1.5)
                + 21.3 * lf5
            )
        const = 31.46 if scenario == "C1" else 34.46
        return (44.9 - 6.55 * math.log10(hbs)) * ld + const + 5.83 * math.log10(hbs) + 23.0 * lf5

    f_hz = g.f_ghz * 1e9
    if scenario == "C2":
        hbs_eff, hut_eff = hbs - 1.0, hut - 1.0
        if hbs_eff <= 0 or hut_eff <= 0:
            raise ValueError("C2 LOS needs antenna heights above 1 m")
        d_bp = 4.0 * hbs_eff * hut_eff * f_hz / C_BREAKPOINT
        if d <= d_bp:
            return 26.0 * ld + 39.0 + 20.0 * lf5
        return (
            40.0 * ld + 13.47
            - 14.0 * math.log10(hbs_eff) - 14.0 * math.log10(hut_eff)
            + 6.0 * lf5
        )
    d_bp = 4.0 * hbs * hut * f_hz / C_BREAKPOINT
    if scenario == "C1":
        if d <= d_bp:
            return 23.8 * ld + 41.2 + 20.0 * lf5
        return (
            40.0 * ld + 11.65
            - 16.2 * math.log10(hbs) - 16.2 * math.log10(hut)
            + 3.8 * lf5
        )
    # D1 LOS
    if d <= d_bp:
        return 21.5 * ld + 44.2 + 20.0 * lf5
    return (
        40.0 * ld + 10.5
        - 18.5 * math.log10(hbs) - 18.5 * math.log10(hut)
        + 1.5 * lf5
    )


# ---------------------------------------------------------------------------
# 3GPP TR 38.901 Table 7.4.1-1: RMa and UMa


def _rma_pl1(d3d: float, f_ghz: float, h: float) -> float:
    return (
        20.0 * math.log10(40.0 * math.pi * d3d * f_ghz / 3.0)
        + min(0.03 * h**1.72, 10.0) * math.log10(d3d)
        - min(0.044 * h**1.72, 14.77)
        + 0.002 * math.log10(h) * d3d
    )


def _rma_los(g: LinkGeometry) -> float:
    h = g.avg_building_height_m
    d_bp = 2.0 * math.pi * g.h_bs_m * g.h_ut_m * g.f_ghz * 1e9 / C_BREAKPOINT
    if g.d2d_m <= d_bp:
        return _rma_pl1(g.d3d_m, g.f_ghz, h)
    # second slope anchored at the slant distance of the breakpoint location,
    # which keeps the dual-slope curve exactly continuous
    d3d_bp = math.hypot(d_bp, g.h_bs_m - g.h_ut_m)
    return _rma_pl1(d3d_bp, g.f_ghz, h) + 40.0 * math.log10(g.d3d_m / d3d_bp)


def _uma_los(g: LinkGeometry) -> float:
    h_e = 1.0  # effective environment height; deterministic for h_ut <= 13 m
    d_bp = 4.0 * (g.h_bs_m - h_e) * (g.h_ut_m - h_e) * g.f_ghz * 1e9 / C_BREAKPOINT
    if g.d2d_m <= d_bp:
        return 28.0 + 22.0 * math.log10(g.d3d_m) + 20.0 * math.log10(g.f_ghz)
    return (
        28.0 + 40.0 * math.log10(g.d3d_m) + 20.0 * math.log10(g.f_ghz)
        - 9.0 * math.log10(d_bp**2 + (g.h_bs_m - g.h_ut_m) ** 2)
    )


def tr38901(g: LinkGeometry, scenario: str, condition: str) -> float:
    """TR 38.901 RMa/UMa path loss; NLOS is lower-bounded by the LOS value."""
    scenario = scenario.upper()
    condition = condition.upper()
    if scenario not in ("RMA", "UMA"):
        raise ValueError(f"unknown TR 38.901 scenario {scenario!r}; use RMA or UMA")
    if condition not in ("LOS", "NLOS"):
        raise ValueError("condition must be LOS or NLOS")
    lf = math.log10(g.f_ghz)
    if scenario == "RMA":
        los = _rma_los(g)
        if condition == "LOS":
            return los
        h, w = g.avg_building_height_m, g.avg_street_width_m
        nlos = (
            161.04
            - 7.1 * math.log10(w)
            + 7.5 * math.log10(h)
            - (24.37 - 3.7 * (h / g.h_bs_m) ** 2) * math.log10(g.h_bs_m)
            + (43.42 - 3.1 * math.log10(g.h_bs_m)) * (math.log10(g.d3d_m) - 3.0)
            + 20.0 * lf
            - (3.2 * math.log10(11.75 * g.h_ut_m) ** 2 - 4.97)
        )
        return max(los, nlos)
    los = _uma_los(g)
    if condition == "LOS":
        return los
    nlos = 13.54 + 39.08 * math.log10(g.d3d_m) + 20.0 * lf - 0.6 * (g.h_ut_m - 1.5)
    return max(los, nlos)


def uma_breakpoint_m(g: LinkGeometry) -> float:
    """UMa LOS breakpoint (ground) distance for the given geometry."""
    h_e = 1.0
    return 4.0 * (g.h_bs_m - h_e) * (g.h_ut_m - h_e) * g.f_ghz * 1e9 / C_BREAKPOINT


def rma_breakpoint_m(g: LinkGeometry) -> float:
    """RMa LOS breakpoint (ground) distance for the given geometry."""
    return 2.0 * math.pi * g.h_bs_m * g.h_ut_m * g.f_ghz * 1e9 / C_BREAKPOINT


# ---------------------------------------------------------------------------
# Hata-Okumura and COST 231 Hata


def _mobile_antenna_correction(f_mhz: float, h_ut: float, city_size: str) -> float:
    if city_size == "large":
        if f_mhz <= 300.0:
            return 8.29 * math.log10(1.54 * h_ut) ** 2 - 1.1
        return 3.2 * math.log10(11.75 * h_ut) ** 2 - 4.97
    return (1.1 * math.log10(f_mhz) - 0.7) * h_ut - (1.56 * math.log10(f_mhz) - 0.8)


def hata_okumura(g: LinkGeometry, environment: str = "urban") -> float:
    """Hata-Okumura closed form; environment urban, suburban, or open."""
    f_mhz = g.f_ghz * 1000.0
    d_km = g.d2d_m / 1000.0
    lf = math.log10(f_mhz)
    a = _mobile_antenna_correction(f_mhz, g.h_ut_m, g.city_size)
    urban = (
        69.55 + 26.16 * lf - 13.82 * math.log10(g.h_bs_m) - a
        + (44.9 - 6.55 * math.log10(g.h_bs_m)) * math.log10(d_km)
    )
    if environment == "urban":
        return urban
    if environment == "suburban":
        return urban - 2.0 * math.log10(f_mhz / 28.0) ** 2 - 5.4
    if environment == "open":
        return urban - 4.78 * lf * lf + 18.33 * lf - 40.94
    raise ValueError(f"unknown environment {environment!r}")


def cost231_hata(g: LinkGeometry, environment: str = "urban") -> float:
    """COST 231 Hata extension; adds 3 dB in metropolitan (urban) areas.

    The open-area variant reuses the Okumura open-land correction, which
    COST 231 itself does not define but is common planning practice.
    """
    f_mhz = g.f_ghz * 1000.0
    d_km = g.d2d_m / 1000.0
    lf = math.log10(f_mhz)
    a = _mobile_antenna_correction(f_mhz, g.h_ut_m, g.city_size)
    pl = (
        46.3 + 33.9 * lf - 13.82 * math.log10(g.h_bs_m) - a
        + (44.9 - 6.55 * math.log10(g.h_bs_m)) * math.log10(d_km)
    )
    if environment == "urban":
        return pl + 3.0
    if environment == "suburban":
        return pl
    if environment == "open":
        return pl - 4.78 * lf * lf + 18.33 * lf - 40.94
    raise ValueError(f"unknown environment {environment!r}")


def hata_family(g: LinkGeometry, variant: str, environment: str = "urban") -> float:
    """Dispatch between the original Hata-Okumura and COST 231 Hata forms."""
    variant = variant.upper()
    if variant == "HATA_OKUMURA":
        return hata_okumura(g, environment)
    if variant == "COST231_HATA":
        return cost231_hata(g, environment)
    raise ValueError(f"unknown Hata variant {variant!r}")


# ---------------------------------------------------------------------------
# Two-ray ground reflection


def two_ray(g: LinkGeometry) -> float:
    """Full two-ray field sum (direct + ground bounce, reflection -1), dB.

    Oscillates below the crossover distance 4*h_bs*h_ut/lambda and tends to
    the 40 log10(d) asymptote beyond it.
    """
    lam = C_LIGHT / (g.f_ghz * 1e9)
    k = 2.0 * math.pi / lam
    d_los = math.hypot(g.d2d_m, g.h_bs_m - g.h_ut_m)
    d_ref = math.hypot(g.d2d_m, g.h_bs_m + g.h_ut_m)
    field = cmath.exp(-1j * k * d_los) / d_los - cmath.exp(-1j * k * d_ref) / d_ref
    amplitude = abs(field) * lam / (4.0 * math.pi)
    return -20.0 * math.log10(amplitude)


def two_ray_asymptote(g: LinkGeometry) -> float:
    """Far-field two-ray loss 40 log10(d) - 20 log10(h_bs) - 20 log10(h_ut)."""
    return (
        40.0 * math.log10(g.d2d_m)
        - 20.0 * math.log10(g.h_bs_m)
        - 20.0 * math.log10(g.h_ut_m)
    )


def two_ray_crossover_m(g: LinkGeometry) -> float:
    """Distance beyond which the two-ray loss grows monotonically."""
    lam = C_LIGHT / (g.f_ghz * 1e9)
    return 4.0 * g.h_bs_m * g.h_ut_m / lam


# ---------------------------------------------------------------------------
# Model catalog


@dataclass(frozen=True)
class ModelInfo:
    """Catalog entry: evaluator plus published validity and sigma metadata."""

    model_id: str
    evaluate: Optional[Callable[[LinkGeometry], float]]
    freq_range_ghz: tuple[float, float]
    dist_range_m: tuple[float, float]
    published_sigma_db: Optional[float] = None
    condition: str = "N/A"
    parameters: tuple[str, ...] = ()


MODEL_CATALOG: dict[str, ModelInfo] = {
    info.model_id: info
    for info in [
        ModelInfo("FSPL", fspl, (0.0, math.inf), (0.0, math.inf)),
        ModelInfo(
            "LOG_DISTANCE", None, (0.0, math.inf), (0.0, math.inf),
            parameters=("a0_db", "gamma", "d0_m"),
        ),
        ModelInfo("SUI_A", lambda g: sui(g, "A"), (1.0, 4.0), (100.0, 8000.0)),
        ModelInfo("SUI_B", lambda g: sui(g, "B"), (1.0, 4.0), (100.0, 8000.0)),
        ModelInfo("SUI_C", lambda g: sui(g, "C"), (1.0, 4.0), (100.0, 8000.0)),
        ModelInfo("ECC33", ecc33, (3.4, 3.8), (1000.0, 10000.0)),
        ModelInfo(
            "WINNER2_C1_LOS", lambda g: winner2(g, "C1", "LOS"),
            (2.0, 6.0), (50.0, 5000.0), condition="LOS",
        ),
        ModelInfo(
            "WINNER2_C1_NLOS", lambda g: winner2(g, "C1", "NLOS"),
            (2.0, 6.0), (50.0, 5000.0), published_sigma_db=8.0, condition="NLOS",
        ),
        ModelInfo(
            "WINNER2_C2_LOS", lambda g: winner2(g, "C2", "LOS"),
            (2.0, 6.0), (50.0, 5000.0), condition="LOS",
        ),
        ModelInfo(
            "WINNER2_C2_NLOS", lambda g: winner2(g, "C2", "NLOS"),
            (2.0, 6.0), (50.0, 5000.0), published_sigma_db=8.0, condition="NLOS",
        ),
        ModelInfo(
            "WINNER2_D1_LOS", lambda g: winner2(g, "D1", "LOS"),
            (2.0, 6.0), (50.0, 5000.0), condition="LOS",
        ),
        ModelInfo(
            "WINNER2_D1_NLOS", lambda g: winner2(g, "D1", "NLOS"),
            (2.0, 6.0), (50.0, 5000.0), published_sigma_db=8.0, condition="NLOS",
        ),
        ModelInfo(
            "TR38901_RMA_LOS", lambda g: tr38901(g, "RMA", "LOS"),
            (0.5, 100.0), (10.0, 10000.0), condition="LOS",
        ),
        ModelInfo(
            "TR38901_RMA_NLOS", lambda g: tr38901(g, "RMA", "NLOS"),
            (0.5, 100.0), (10.0, 5000.0), published_sigma_db=8.0, condition="NLOS",
        ),
        ModelInfo(
            "TR38901_UMA_LOS", lambda g: tr38901(g, "UMA", "LOS"),
            (0.5, 100.0), (10.0, 5000.0), published_sigma_db=4.0, condition="LOS",
        ),
        ModelInfo(
            "TR38901_UMA_NLOS", lambda g: tr38901(g, "UMA", "NLOS"),
            (0.5, 100.0), (10.0, 5000.0), published_sigma_db=6.0, condition="NLOS",
        ),
        ModelInfo("HATA_OKUMURA", hata_okumura, (0.15, 1.5), (1000.0, 20000.0)),
        ModelInfo("COST231_HATA", cost231_hata, (1.5, 2.0), (1000.0, 20000.0)),
        ModelInfo("TWO_RAY", two_ray, (0.0, math.inf), (0.0, math.inf)),
    ]
}


def get_model(model_id: str) -> ModelInfo:
    try:
        return MODEL_CATALOG[model_id.upper()]
    except KeyError:
        known = ", ".join(sorted(MODEL_CATALOG))
        raise ValueError(f"unknown model id {model_id!r}; known: {known}") from None


def comparable_models() -> list[str]:
    """Ids of all models evaluable without free parameters."""
    return [mid for mid, info in MODEL_CATALOG.items() if info.evaluate is not None]


def validity_warnings(model_id: str, g: LinkGeometry) -> list[str]:
    """Human-readable reasons the geometry sits outside published validity."""
    info = get_model(model_id)
    out = []
    flo, fhi = info.freq_range_ghz
    if not flo <= g.f_ghz <= fhi:
        out.append(
            f"{info.model_id}: frequency {g.f_ghz:g} GHz outside validity "
            f"[{flo:g}, {fhi:g}] GHz"
        )
    dlo, dhi = info.dist_range_m
    if not dlo <= g.d2d_m <= dhi:
        out.append(
            f"{info.model_id}: distance {g.d2d_m:g} m outside validity "
            f"[{dlo:g}, {dhi:g}] m"
        )
    if info.model_id.startswith("SUI"):
        if not 10.0 <= g.h_bs_m <= 80.0:
            out.append(f"{info.model_id}: BS height {g.h_bs_m:g} m outside [10, 80] m")
        if not 2.0 <= g.h_ut_m <= 10.0:
            out.append(f"{info.model_id}: UE height {g.h_ut_m:g} m outside [2, 10] m")
    if info.model_id == "TWO_RAY":
        crossover = two_ray_crossover_m(g)
        if g.d2d_m < crossover:
            out.append(
                f"TWO_RAY: distance {g.d2d_m:g} m inside the oscillatory region "
                f"(crossover {crossover:.0f} m)"
            )
    return out


@dataclass
class PredictionSeries:
    """Model curve sampled over a distance sweep, with per-point validity."""

    model_id: str
    distances_m: list[float]
    path_loss_db: list[float]
    point_warnings: list[list[str]]


def predict_series(model_id: str, template: LinkGeometry, distances_m) -> PredictionSeries:
    """Evaluate one model over a sorted sweep of ground distances.

    The slant distance is recomputed per point from the template heights.
    """
    info = get_model(model_id)
    if info.evaluate is None:
        raise ValueError(f"{info.model_id} needs fitted parameters; evaluate it directly")
    distances = [float(d) for d in distances_m]
    if any(d <= 0 for d in distances):
        raise ValueError("distances must be positive")
    if any(b < a for a, b in zip(distances, distances[1:])):
        raise ValueError("distances must be sorted ascending")
    values, warns = [], []
    for d in distances:
        g = template.with_distance(d)
        values.append(info.evaluate(g))
        warns.append(validity_warnings(info.model_id, g))
    return PredictionSeries(info.model_id, distances, values, warns)


def catalog_json() -> list[dict]:
    """Catalog metadata in a JSON-friendly shape (for the CLI dump)."""

    def _num(v):
        return None if math.isinf(v) else v

    return [
        {
            "id": info.model_id,
            "condition": info.condition,
            "freq_range_ghz": [_num(info.freq_range_ghz[0]), _num(info.freq_range_ghz[1])],
            "dist_range_m": [_num(info.dist_range_m[0]), _num(info.dist_range_m[1])],
            "published_sigma_db": info.published_sigma_db,
            "parameters": list(info.parameters),
        }
        for info in MODEL_CATALOG.values()
    ]
