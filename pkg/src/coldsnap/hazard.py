"""Damage-function models: mortality risk, occupant outcomes, productivity,
and the freeze-damage index.

The mortality model maps indoor temperature to a relative risk (RR >= 1,
equal to 1 at the comfort minimum), averages it over the event to get a
per-occupant mortality probability, then resolves each occupant through a
probability tree: at-risk event -> pre-existing condition -> care access ->
survival. Productivity maps indoor temperature to relative work performance
in [0, 1]. The winter freeze index accumulates (temperature deficit x
moisture excess) whenever both cross their critical levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import defaults
from .errors import ConfigurationError

_GRID_STEP_C = 0.1


def _fit_polynomial(points, degree: int):
    """Least-squares polynomial fit; returns (coefficients, max abs residual)."""
    xs = np.array([p[0] for p in points], dtype=float)
    ys = np.array([p[1] for p in points], dtype=float)
    if len(xs) <= degree:
        raise ConfigurationError(f"need more than {degree} points for a degree-{degree} fit")
    coeffs = np.polyfit(xs, ys, degree)
    residual = float(np.abs(np.polyval(coeffs, xs) - ys).max())
    return coeffs, residual


def _grid(lo: float, hi: float) -> np.ndarray:
    return np.arange(lo, hi + _GRID_STEP_C / 2, _GRID_STEP_C)


@dataclass(frozen=True)
class RRModel:
    """Quartic relative-risk-of-mortality curve, minimum normalized to 1."""

    coefficients: tuple[float, float, float, float, float]  # quartic, highest power first
    t_min_c: float
    t_max_c: float
    fit_points: tuple = ()
    fit_residual: float = 0.0

    def __post_init__(self):
        if self.t_max_c <= self.t_min_c:
            raise ConfigurationError("invalid temperature range for mortality curve")
        grid_min = float(np.polyval(self.coefficients, _grid(self.t_min_c, self.t_max_c)).min())
        if not (1.0 - 1e-9) <= grid_min <= (1.0 + 1e-6):
            raise ConfigurationError(
                f"mortality curve minimum over its range is {grid_min!r}; expected 1 "
                "(renormalize via RRModel.from_points)"
            )

    @classmethod
    def from_points(cls, points, t_min_c: float, t_max_c: float) -> "RRModel":
        """Fit a quartic to (temperature, risk) anchors and normalize min -> 1."""
        coeffs, residual = _fit_polynomial(points, 4)
        grid_min = float(np.polyval(coeffs, _grid(t_min_c, t_max_c)).min())
        if grid_min <= 0:
            raise ConfigurationError("fitted mortality curve is non-positive over its range")
        coeffs = coeffs / grid_min
        return cls(
            coefficients=tuple(float(c) for c in coeffs),
            t_min_c=t_min_c,
            t_max_c=t_max_c,
            fit_points=tuple((float(t), float(v)) for t, v in points),
            fit_residual=residual,
        )

    @classmethod
    def default(cls) -> "RRModel":
        lo, hi = defaults.RR_VALID_RANGE_C
        return cls.from_points(defaults.RR_CURVE_ANCHORS, lo, hi)

    def evaluate(self, t_in_c):
        """RR at clamp(t, valid range); floors at 1 to absorb fit wiggle."""
        t = np.clip(np.asarray(t_in_c, dtype=float), self.t_min_c, self.t_max_c)
        return np.maximum(np.polyval(self.coefficients, t), 1.0 - 1e-9)

    def provenance(self) -> dict:
        return {
            "coefficients_high_to_low": list(self.coefficients),
            "valid_range_c": [self.t_min_c, self.t_max_c],
            "fit_points": [list(p) for p in self.fit_points],
            "fit_max_abs_residual": self.fit_residual,
        }


def relative_risk(t_in_c, model: RRModel):
    value = model.evaluate(t_in_c)
    return float(value) if np.isscalar(t_in_c) else value


def base_mortality(t_in_c, model: RRModel, delta: float = 0.0) -> float:
    """Mortality probability from a temperature trace: mean excess RR plus delta."""
    t = np.asarray(t_in_c, dtype=float)
    if t.size == 0:
        raise ConfigurationError("empty temperature trace")
    excess = float(model.evaluate(t).mean()) - 1.0
    return float(min(max(excess + delta, 0.0), 1.0))


@dataclass(frozen=True)
class ProductivityModel:
    """Cubic relative-performance curve, maximum normalized to 1, clamped to [0, 1]."""

    coefficients: tuple[float, float, float, float]  # cubic, highest power first
    t_min_c: float
    t_max_c: float
    fit_points: tuple = ()
    fit_residual: float = 0.0

    def __post_init__(self):
        grid_max = float(np.polyval(self.coefficients, _grid(self.t_min_c, self.t_max_c)).max())
        if not (1.0 - 1e-6) <= grid_max <= (1.0 + 1e-9):
            raise ConfigurationError(
                f"productivity curve maximum over its range is {grid_max!r}; expected 1"
            )

    @classmethod
    def from_points(cls, points, t_min_c: float, t_max_c: float) -> "ProductivityModel":
        coeffs, residual = _fit_polynomial(points, 3)
        grid_max = float(np.polyval(coeffs, _grid(t_min_c, t_max_c)).max())
        if grid_max <= 0:
            raise ConfigurationError("fitted productivity curve is non-positive over its range")
        coeffs = coeffs / grid_max
        return cls(
            coefficients=tuple(float(c) for c in coeffs),
            t_min_c=t_min_c,
            t_max_c=t_max_c,
            fit_points=tuple((float(t), float(v)) for t, v in points),
            fit_residual=residual,
        )

    @classmethod
    def default(cls) -> "ProductivityModel":
        lo, hi = defaults.PRODUCTIVITY_VALID_RANGE_C
        return cls.from_points(defaults.PRODUCTIVITY_ANCHORS, lo, hi)

    def evaluate(self, t_in_c):
        t = np.clip(np.asarray(t_in_c, dtype=float), self.t_min_c, self.t_max_c)
        return np.clip(np.polyval(self.coefficients, t), 0.0, 1.0)

    def provenance(self) -> dict:
        return {
            "coefficients_high_to_low": list(self.coefficients),
            "valid_range_c": [self.t_min_c, self.t_max_c],
            "fit_points": [list(p) for p in self.fit_points],
            "fit_max_abs_residual": self.fit_residual,
        }


def productivity(t_in_c, model: ProductivityModel):
    value = model.evaluate(t_in_c)
    return float(value) if np.isscalar(t_in_c) else value


@dataclass(frozen=True)
class WinterIndexParams:
    """Critical levels for freeze damage accumulation."""

    t_crit_c: float = defaults.WI_T_CRIT_C
    rh_crit_pct: float = defaults.WI_RH_CRIT_PCT
    indoor_rh_pct: float | None = None  # None: use the outdoor humidity series

    def __post_init__(self):
        if not 0.0 <= self.rh_crit_pct <= 100.0:
            raise ConfigurationError("critical humidity must lie in [0, 100]")


def winter_index_sum(t_in_c, rh_pct, params: WinterIndexParams) -> float:
    """Accumulated freeze index: sum of (T_crit - T)(RH - RH_crit) over
    steps where T < T_crit and RH > RH_crit; zero otherwise."""
    t = np.asarray(t_in_c, dtype=float)
    if params.indoor_rh_pct is not None:
        rh = np.full(t.shape, float(params.indoor_rh_pct))
    else:
        rh = np.asarray(rh_pct, dtype=float)
        if rh.shape != t.shape:
            raise ConfigurationError(
                f"humidity length {rh.shape} does not match trace length {t.shape}"
            )
    gate = (t < params.t_crit_c) & (rh > params.rh_crit_pct)
    if not gate.any():
        return 0.0
    contrib = (params.t_crit_c - t[gate]) * (rh[gate] - params.rh_crit_pct)
    return float(contrib.sum())


def _normal_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


@dataclass(frozen=True)
class TruncNormal:
    """Normal(mean, std) restricted to [lo, hi] by rejection sampling."""

    mean: float
    std: float
    lo: float
    hi: float

    def __post_init__(self):
        if self.std <= 0:
            raise ConfigurationError(f"std must be positive, got {self.std}")
        if self.lo > self.hi:
            raise ConfigurationError(f"empty support [{self.lo}, {self.hi}]")
        if self.acceptance_probability() < 1e-6:
            raise ConfigurationError(
                f"window [{self.lo}, {self.hi}] captures almost none of "
                f"Normal({self.mean}, {self.std}); rejection sampling would stall"
            )

    def acceptance_probability(self) -> float:
        return _normal_cdf((self.hi - self.mean) / self.std) - _normal_cdf(
            (self.lo - self.mean) / self.std
        )

    def sample(self, rng: np.random.Generator, size: int | None = None):
        """Draw by rejection: resample any value falling outside [lo, hi]."""
        if size is None:
            while True:
                value = rng.normal(self.mean, self.std)
                if self.lo <= value <= self.hi:
                    return float(value)
        out = rng.normal(self.mean, self.std, size=size)
        bad = (out < self.lo) | (out > self.hi)
        while bad.any():
            out[bad] = rng.normal(self.mean, self.std, size=int(bad.sum()))
            bad = (out < self.lo) | (out > self.hi)
        return out


def sample_truncated_normal(params: TruncNormal, rng: np.random.Generator, size=None):
    return params.sample(rng, size)


class OutcomeStatus(str, Enum):
    UNAFFECTED = "unaffected"
    INJURED_RECOVERED_HOME = "injured_recovered_home"
    INJURED_RECOVERED_HOSPITAL = "injured_recovered_hospital"
    DEATH = "death"


class Condition(str, Enum):
    CARDIAC = "cardiac"
    RESPIRATORY = "respiratory"
    HYPOTHERMIA_FROST = "hypothermia_frost"
    NONE = "none"


CONDITIONS = (Condition.CARDIAC, Condition.RESPIRATORY, Condition.HYPOTHERMIA_FROST)

# Integer codes for the vectorized outcome path.
_STATUS_UNAFFECTED, _STATUS_HOME, _STATUS_HOSPITAL, _STATUS_DEATH = 0, 1, 2, 3


@dataclass(frozen=True)
class OccupantOutcome:
    status: OutcomeStatus
    condition: Condition
    accessed_healthcare: bool
    insured: bool

    def __post_init__(self):
        if (self.condition is Condition.NONE) != (self.status is OutcomeStatus.UNAFFECTED):
            raise ConfigurationError("condition must be none exactly for unaffected occupants")


def _pct(stats: tuple) -> TruncNormal:
    return TruncNormal(*stats)


@dataclass(frozen=True)
class HazardConfig:
    """All damage-model parameters for one run."""

    rr_model: RRModel
    productivity_model: ProductivityModel
    wi_params: WinterIndexParams
    delta: float = defaults.MORTALITY_DURATION_DELTA
    pre_cardiac: TruncNormal = field(
        default_factory=lambda: _pct(defaults.HEALTH_STATS_PCT["pre_existing_cardiac"]))
    pre_respiratory: TruncNormal = field(
        default_factory=lambda: _pct(defaults.HEALTH_STATS_PCT["pre_existing_respiratory"]))
    healthcare_access: TruncNormal = field(
        default_factory=lambda: _pct(defaults.HEALTH_STATS_PCT["healthcare_access"]))
    health_insurance: TruncNormal = field(
        default_factory=lambda: _pct(defaults.HEALTH_STATS_PCT["health_insurance"]))
    home_insurance: TruncNormal = field(
        default_factory=lambda: _pct(defaults.HEALTH_STATS_PCT["home_insurance"]))
    hospital_survival: dict[Condition, TruncNormal] = field(
        default_factory=lambda: {Condition(k): _pct(v)
                                 for k, v in defaults.HOSPITAL_SURVIVAL_PCT.items()})
    home_survival: dict[Condition, TruncNormal] = field(
        default_factory=lambda: {Condition(k): _pct(v)
                                 for k, v in defaults.HOME_SURVIVAL_PCT.items()})

    @classmethod
    def default(cls) -> "HazardConfig":
        return cls(
            rr_model=RRModel.default(),
            productivity_model=ProductivityModel.default(),
            wi_params=WinterIndexParams(),
        )


def simulate_occupant_outcome(p_mort: float, probs: dict, rng: np.random.Generator) -> OccupantOutcome:
    """Resolve one occupant through the outcome tree with fixed probabilities.

    `probs` keys: p_pre_c, p_pre_r, p_access, p_heal_ins, hospital_surv and
    home_surv (each a mapping condition -> survival probability). The
    respiratory branch is renormalized by (1 - p_pre_c) so both pre-existing
    marginals match their configured rates despite sequential drawing.
    """
    for key in ("p_pre_c", "p_pre_r", "p_access", "p_heal_ins"):
        if not 0.0 <= probs[key] <= 1.0:
            raise ConfigurationError(f"{key} must lie in [0, 1]")
    insured = bool(rng.random() < probs["p_heal_ins"])
    if not rng.random() < p_mort:
        return OccupantOutcome(OutcomeStatus.UNAFFECTED, Condition.NONE, False, insured)

    u = rng.random()
    p_c = probs["p_pre_c"]
    p_r = probs["p_pre_r"]
    if u < p_c:
        condition = Condition.CARDIAC
    elif p_c < 1.0 and rng.random() < p_r / (1.0 - p_c):
        condition = Condition.RESPIRATORY
    else:
        condition = Condition.HYPOTHERMIA_FROST

    accessed = bool(rng.random() < probs["p_access"])
    surv_table = probs["hospital_surv"] if accessed else probs["home_surv"]
    survived = bool(rng.random() < surv_table[condition])
    if not survived:
        return OccupantOutcome(OutcomeStatus.DEATH, condition, accessed, insured)
    status = OutcomeStatus.INJURED_RECOVERED_HOSPITAL if accessed else OutcomeStatus.INJURED_RECOVERED_HOME
    return OccupantOutcome(status, condition, accessed, insured)


@dataclass(frozen=True)
class OutcomeBatch:
    """Vectorized occupant outcomes for one trial (integer status codes)."""

    status: np.ndarray      # 0 unaffected, 1 home-recovered, 2 hospital-recovered, 3 death
    condition: np.ndarray   # index into CONDITIONS, -1 for none
    insured: np.ndarray     # health-insurance flag per occupant

    @property
    def n_death(self) -> int:
        return int((self.status == _STATUS_DEATH).sum())

    @property
    def n_injured(self) -> int:
        return int(((self.status == _STATUS_HOME) | (self.status == _STATUS_HOSPITAL)).sum())


def simulate_outcomes(p_mort: np.ndarray, cfg: HazardConfig, rng: np.random.Generator) -> OutcomeBatch:
    """Resolve many occupants at once, drawing per-occupant probabilities.

    Each occupant gets fresh draws of their pre-existing-condition rates,
    access, insurance, and survival probabilities from the configured
    distributions, then walks the same tree as the scalar path.
    """
    p_mort = np.asarray(p_mort, dtype=float)
    n = p_mort.shape[0]
    status = np.zeros(n, dtype=np.int8)
    condition = np.full(n, -1, dtype=np.int8)

    insured = rng.random(n) < cfg.health_insurance.sample(rng, n) / 100.0
    at_risk = rng.random(n) < p_mort
    idx = np.flatnonzero(at_risk)
    if idx.size == 0:
        return OutcomeBatch(status, condition, insured)

    m = idx.size
    p_c = cfg.pre_cardiac.sample(rng, m) / 100.0
    p_r = cfg.pre_respiratory.sample(rng, m) / 100.0
    u_cond = rng.random(m)
    is_cardiac = u_cond < p_c
    # Renormalized second branch keeps the respiratory marginal at its rate.
    u_resp = rng.random(m)
    is_resp = ~is_cardiac & (u_resp < p_r / np.maximum(1.0 - p_c, 1e-12))
    cond = np.full(m, 2, dtype=np.int8)  # hypothermia/frost unless overridden
    cond[is_cardiac] = 0
    cond[is_resp] = 1
    condition[idx] = cond

    accessed = rng.random(m) < cfg.healthcare_access.sample(rng, m) / 100.0
    survival_p = np.empty(m)
    # Fixed (venue, condition) draw order keeps results execution-order free.
    for venue, table in ((True, cfg.hospital_survival), (False, cfg.home_survival)):
        for c_i, cond_name in enumerate(CONDITIONS):
            mask = (accessed == venue) & (cond == c_i)
            count = int(mask.sum())
            if count:
                survival_p[mask] = table[cond_name].sample(rng, count) / 100.0
    survived = rng.random(m) < survival_p

    status[idx[~survived]] = _STATUS_DEATH
    status[idx[survived & accessed]] = _STATUS_HOSPITAL
    status[idx[survived & ~accessed]] = _STATUS_HOME
    return OutcomeBatch(status, condition, insured)


def outcome_tree_probabilities(p_mort: float, p_pre_c: float, p_pre_r: float,
                               p_access: float, hospital_surv: dict, home_surv: dict) -> dict:
    """Closed-form outcome marginals for fixed tree probabilities."""
    p_cond = {
        Condition.CARDIAC: p_pre_c,
        Condition.RESPIRATORY: p_pre_r,
        Condition.HYPOTHERMIA_FROST: 1.0 - p_pre_c - p_pre_r,
    }
    death = hospital = home = 0.0
    for c in CONDITIONS:
        death += p_cond[c] * (p_access * (1.0 - hospital_surv[c]) + (1.0 - p_access) * (1.0 - home_surv[c]))
        hospital += p_cond[c] * p_access * hospital_surv[c]
        home += p_cond[c] * (1.0 - p_access) * home_surv[c]
    return {
        "death": p_mort * death,
        "injured_recovered_hospital": p_mort * hospital,
        "injured_recovered_home": p_mort * home,
        "unaffected": 1.0 - p_mort,
        "condition_given_at_risk": {c.value: p_cond[c] for c in CONDITIONS},
    }
