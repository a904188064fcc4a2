"""
Synthetic Lexicons
Generates lexicons with known single- or two-regime exponents, used as ground
truth for every fitting routine.

    f(i)  = C * i^-alpha1                              i <= i*
    f(i)  = C * i*^(alpha2 - alpha1) * i^-alpha2       i >  i*
    mu(i) = D * i^-gamma1                              i <= i*
    mu(i) = D * i*^(gamma2 - gamma1) * i^-gamma2       i >  i*

Sense counts are floored at 1.

Noise is multiplicative lognormal, exp(sigma * z). The z values come from
the PCG64 generator seeded with ``seed``: 53-bit integers k give uniforms
(k + 0.5) / 2^53 on the open interval, mapped to standard normals by the
inverse normal CDF. The first n normals perturb frequencies, the next n
perturb sense counts.
"""

from typing import Any, Dict, Iterable, Mapping, NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from scipy.special import ndtri

from zipflaws.errors import IntegerizeError, SynthSpecError
from zipflaws.lexicon import LexiconRecord, RankedLexicon

UNIFORM_BITS = 53


class SynthSpec(BaseModel):
    """Generator parameters; alpha2, gamma2 and i_star default to a single regime"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(ge=4)
    alpha1: float = Field(gt=0)
    alpha2: float = Field(gt=0)
    i_star: int
    C: float = Field(default=1000.0, gt=0)
    gamma1: float = Field(default=0.0, ge=0)
    gamma2: float = Field(ge=0)
    D: float = Field(default=1.0, ge=1)
    noise_sigma: float = Field(default=0.0, ge=0)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="before")
    @classmethod
    def _single_regime_defaults(cls, data: Any) -> Any:
        if not isinstance(data, Mapping):
            return data
        data = dict(data)
        if data.get("alpha2") is None and "alpha1" in data:
            data["alpha2"] = data["alpha1"]
        if data.get("gamma2") is None:
            data["gamma2"] = data.get("gamma1", 0.0)
        if data.get("i_star") is None and "n" in data:
            data["i_star"] = data["n"]
        return data

    @model_validator(mode="after")
    def _check_breakpoint(self) -> "SynthSpec":
        if not 1 <= self.i_star <= self.n:
            raise ValueError(f"i_star must lie in [1, n={self.n}], got {self.i_star}")
        return self

    @property
    def continuity_constant(self) -> float:
        """Regime-2 prefactor, forced by continuity at i*"""
        return self.C * self.i_star ** (self.alpha2 - self.alpha1)

    @property
    def is_single_regime(self) -> bool:
        return self.alpha1 == self.alpha2 and self.gamma1 == self.gamma2


class RoundingDistortion(NamedTuple):
    changed: int
    max_abs_change: float
    mean_rel_change: float
    total_before: float
    total_after: int


class IntegerizeResult(NamedTuple):
    lexicon: RankedLexicon
    distortion: RoundingDistortion


def make_synth_spec(values: Mapping[str, Any]) -> SynthSpec:
    """Validate raw values, reporting failures as SynthSpecError"""
    try:
        return SynthSpec.model_validate(dict(values))
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'spec'}: {err['msg']}" for err in e.errors()
        )
        raise SynthSpecError(f"invalid synthetic spec: {problems}") from None


def parse_synth_spec(lines: Iterable[str]) -> SynthSpec:
    """Read a flat key=value file ('#' comments allowed)"""
    return make_synth_spec(read_synth_values(lines))


def read_synth_values(lines: Iterable[str]) -> Dict[str, str]:
    """Raw key=value pairs, unvalidated so callers can merge overrides first"""
    values: Dict[str, str] = {}
    for line_number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise SynthSpecError(f"spec line {line_number}: expected key=value, got {line!r}")
        values[key.strip()] = value.strip()
    return values


def format_synth_spec(spec: SynthSpec) -> str:
    return "".join(f"{key}={value!r}\n" if isinstance(value, float) else f"{key}={value}\n"
                   for key, value in spec.model_dump().items())


def standard_normals(seed: int, size: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed))
    k = rng.integers(0, 2 ** UNIFORM_BITS, size=size, dtype=np.uint64)
    u = (k.astype(float) + 0.5) / float(2 ** UNIFORM_BITS)
    return ndtri(u)


def generate(spec: SynthSpec) -> RankedLexicon:
    """Real-valued lexicon following the spec, sorted and re-ranked after noise"""
    n = spec.n
    i = np.arange(1, n + 1, dtype=float)
    low_ranks = i <= spec.i_star
    frequencies = np.where(
        low_ranks,
        spec.C * i ** -spec.alpha1,
        spec.continuity_constant * i ** -spec.alpha2,
    )
    senses = np.where(
        low_ranks,
        spec.D * i ** -spec.gamma1,
        spec.D * spec.i_star ** (spec.gamma2 - spec.gamma1) * i ** -spec.gamma2,
    )
    if spec.noise_sigma > 0:
        z = standard_normals(spec.seed, 2 * n)
        frequencies = frequencies * np.exp(spec.noise_sigma * z[:n])
        senses = senses * np.exp(spec.noise_sigma * z[n:])
    senses = np.maximum(senses, 1.0)

    width = len(str(n))
    lemmas = [f"w{k:0{width}d}" for k in range(1, n + 1)]
    return _ranked(lemmas, frequencies.tolist(), senses.tolist())


def integerize(lexicon: RankedLexicon, mode: str = "round") -> IntegerizeResult:
    """
    Convert frequencies to integer counts >= 1.

    round is half-up; floor truncates. Values that would map below 1 are
    rejected rather than clipped.
    """
    frequencies = lexicon.frequencies
    if mode == "round":
        converted = np.floor(frequencies + 0.5)
    elif mode == "floor":
        converted = np.floor(frequencies)
    else:
        raise IntegerizeError(f"unknown integerize mode {mode!r}; use 'round' or 'floor'")
    below = int(np.count_nonzero(converted < 1))
    if below:
        raise IntegerizeError(f"{below} frequencies would become smaller than 1 with mode {mode!r}")

    change = np.abs(converted - frequencies)
    distortion = RoundingDistortion(
        changed=int(np.count_nonzero(change)),
        max_abs_change=float(change.max()),
        mean_rel_change=float(np.mean(change / frequencies)),
        total_before=float(frequencies.sum()),
        total_after=int(converted.sum()),
    )
    integers = [int(v) for v in converted]
    return IntegerizeResult(_ranked(list(lexicon.lemmas), integers, lexicon.senses.tolist()), distortion)


def _ranked(lemmas, frequencies, senses) -> RankedLexicon:
    order = sorted(range(len(lemmas)), key=lambda k: (-frequencies[k], lemmas[k]))
    return RankedLexicon(tuple(
        LexiconRecord(position, lemmas[k], frequencies[k], senses[k])
        for position, k in enumerate(order, start=1)
    ))
