"""Experiment configuration: a versioned YAML file with tagged records.

Validation is strict: unknown keys are rejected at every level so stale or
misspelled fields never silently change an archived experiment.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import yaml

from .criteria import RiskCriterion, build_criterion
from .dist import (
    Gaussian,
    PiecewiseLinearCDF,
    PointMass,
    RewardDistribution,
    TwoPoint,
    Uniform,
)
from .errors import ConfigError, DomainError
from .policy import (
    Bad1OraclePolicy,
    Bad2OraclePolicy,
    Policy,
    SimplePolicy,
    UcbParams,
    UcbPolicy,
)

__all__ = ["ExperimentConfig", "load_config", "parse_config", "parse_distribution"]

CONFIG_VERSION = 1

_ESTIMATOR_NAMES = ("performance", "proxy-regret", "horizon-gap", "reference-regret")


@dataclass
class ExperimentConfig:
    version: int
    seed: int
    arms: list[RewardDistribution]
    criterion: RiskCriterion
    certificate_overrides: dict = field(default_factory=dict)
    policies: list[dict] = field(default_factory=list)
    horizons: list[int] = field(default_factory=list)
    checkpoints: list[int] | None = None
    replications: int = 100
    mixtures: list[list[float]] = field(default_factory=list)
    estimators: tuple[str, ...] = _ESTIMATOR_NAMES
    reference: dict | str = "best-arm"
    grid_resolution: float | None = None
    ucb_alpha: float = 3.0
    check_options: dict = field(default_factory=dict)
    output: str | None = None

    def resolve_policy(self, spec: dict) -> Policy:
        """Build a policy, resolving UCB radii from the criterion's
        certificate when not overridden."""
        spec = dict(spec)
        kind = spec.pop("kind")
        spec.pop("label", None)
        if kind == "simple":
            policy = SimplePolicy(spec.pop("p"))
            _reject_extra("policy", spec)
            return policy
        if kind == "bad1-oracle":
            _reject_extra("policy", spec)
            return Bad1OraclePolicy()
        if kind == "bad2-oracle":
            _reject_extra("policy", spec)
            return Bad2OraclePolicy()
        if kind == "ucb":
            alpha = spec.pop("alpha", self.ucb_alpha)
            overrides = dict(self.certificate_overrides)
            overrides.update(
                {k: spec.pop(k) for k in ("a", "b", "q") if k in spec}
            )
            _reject_extra("policy", spec)
            cert = self.criterion.stability_certificate(self.arms, **overrides)
            if cert is None:
                raise ConfigError(
                    f"criterion {self.criterion.tag!r} has no stability certificate "
                    "for these arms; supply a, b, q explicitly"
                )
            return UcbPolicy(UcbParams(cert.a, cert.b, cert.q, alpha))
        raise ConfigError(f"unknown policy kind {kind!r}")

    def policy_objects(self) -> list[tuple[str, Policy]]:
        out = []
        for spec in self.policies:
            policy = self.resolve_policy(spec)
            label = spec.get("label", _default_policy_label(spec))
            out.append((label, policy))
        return out


def _default_policy_label(spec: dict) -> str:
    kind = spec["kind"]
    if kind == "simple":
        return "simple[" + ",".join(f"{w:g}" for w in spec["p"]) + "]"
    return kind


def _reject_extra(context: str, mapping: dict) -> None:
    if mapping:
        raise ConfigError(f"unknown {context} keys: {sorted(mapping)}")


def _require(mapping: dict, key: str, context: str):
    if key not in mapping:
        raise ConfigError(f"{context} is missing required key {key!r}")
    return mapping.pop(key)


def parse_distribution(spec: dict) -> RewardDistribution:
    """Tagged record -> distribution. Kinds: gaussian, point-mass, uniform,
    bernoulli-scaled, piecewise-linear-cdf."""
    if not isinstance(spec, dict):
        raise ConfigError(f"distribution spec must be a mapping, got {spec!r}")
    spec = dict(spec)
    kind = _require(spec, "kind", "distribution")
    try:
        if kind == "gaussian":
            out = Gaussian(_require(spec, "mean", kind), _require(spec, "stddev", kind))
        elif kind == "point-mass":
            out = PointMass(_require(spec, "value", kind))
        elif kind == "uniform":
            out = Uniform(_require(spec, "lo", kind), _require(spec, "hi", kind))
        elif kind == "bernoulli-scaled":
            out = TwoPoint(
                _require(spec, "p", kind),
                _require(spec, "lo", kind),
                _require(spec, "hi", kind),
            )
        elif kind == "piecewise-linear-cdf":
            knots = _require(spec, "knots", kind)
            out = PiecewiseLinearCDF.from_pairs([(float(y), float(f)) for y, f in knots])
        else:
            raise ConfigError(f"unknown distribution kind {kind!r}")
    except DomainError as exc:
        raise ConfigError(f"invalid {kind} distribution: {exc}") from exc
    _reject_extra(f"{kind} distribution", spec)
    return out


def _parse_criterion(spec: dict):
    if not isinstance(spec, dict):
        raise ConfigError(f"criterion spec must be a mapping, got {spec!r}")
    spec = dict(spec)
    kind = _require(spec, "kind", "criterion")
    overrides = spec.pop("certificate", {})
    if not isinstance(overrides, dict) or set(overrides) - {"a", "b", "q"}:
        raise ConfigError("criterion certificate override allows only keys a, b, q")
    try:
        criterion = build_criterion(kind, **spec)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    return criterion, overrides


_KNOWN_KEYS = {
    "version",
    "seed",
    "arms",
    "criterion",
    "policies",
    "horizons",
    "checkpoints",
    "replications",
    "mixtures",
    "estimators",
    "reference",
    "grid_resolution",
    "ucb_alpha",
    "check",
    "output",
}


def parse_config(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a mapping")
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "version" not in raw:
        raise ConfigError("config is missing required key 'version'")
    if raw["version"] != CONFIG_VERSION:
        raise ConfigError(
            f"unsupported config version {raw['version']!r}; expected {CONFIG_VERSION}"
        )
    if "seed" not in raw:
        raise ConfigError("config is missing required key 'seed'")
    if "arms" not in raw or not raw["arms"]:
        raise ConfigError("config needs a non-empty 'arms' list")
    if "criterion" not in raw:
        raise ConfigError("config is missing required key 'criterion'")

    arms = [parse_distribution(s) for s in raw["arms"]]
    criterion, overrides = _parse_criterion(raw["criterion"])

    estimators = tuple(raw.get("estimators", _ESTIMATOR_NAMES))
    bad = set(estimators) - set(_ESTIMATOR_NAMES)
    if bad:
        raise ConfigError(f"unknown estimators {sorted(bad)}; known: {_ESTIMATOR_NAMES}")

    mixtures = [list(map(float, p)) for p in raw.get("mixtures", [])]
    for p in mixtures:
        if len(p) != len(arms):
            raise ConfigError(f"mixture weight vector {p} does not match {len(arms)} arms")

    cfg = ExperimentConfig(
        version=int(raw["version"]),
        seed=int(raw["seed"]),
        arms=arms,
        criterion=criterion,
        certificate_overrides=overrides,
        policies=list(raw.get("policies", [])),
        horizons=[int(t) for t in raw.get("horizons", [])],
        checkpoints=[int(c) for c in raw["checkpoints"]] if raw.get("checkpoints") else None,
        replications=int(raw.get("replications", 100)),
        mixtures=mixtures,
        estimators=estimators,
        reference=raw.get("reference", "best-arm"),
        grid_resolution=raw.get("grid_resolution"),
        ucb_alpha=float(raw.get("ucb_alpha", 3.0)),
        check_options=dict(raw.get("check", {})),
        output=raw.get("output"),
    )
    if cfg.replications < 1:
        raise ConfigError(f"replications must be >= 1, got {cfg.replications}")
    for spec in cfg.policies:
        if not isinstance(spec, dict) or "kind" not in spec:
            raise ConfigError(f"policy spec must be a mapping with 'kind': {spec!r}")
    return cfg


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            raw = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"could not parse {path}: {exc}") from exc
    return parse_config(raw)
