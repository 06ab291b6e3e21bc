"""Central-potential catalog, singularity classes and closed-form references.

Every family is a small frozen dataclass with an ``evaluate(r)`` method that
accepts scalars or arrays (r > 0).  Families serialize to
``{"family": <name>, "params": {...}}``.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, fields
from typing import ClassVar

import numpy as np
from scipy import integrate, special

from .discretization import ATOMIC, Convention

__all__ = [
    "Coulomb", "Harmonic", "PowerLaw", "Logarithmic", "SHO", "ChargedOscillator",
    "SexticSingular", "GSHO", "Hulthen", "Yukawa", "NPO", "FAMILIES",
    "SingularityClass", "evaluate", "classify", "exact_reference",
    "reference_series", "hermite_integral", "airy_zeros", "from_dict",
    "from_json", "to_dict", "HULTHEN_B",
]


def _radii(r):
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0)):
        raise ValueError("potentials are evaluated at r > 0 only")
    return r


def _out(v, r_in):
    return float(v) if np.ndim(r_in) == 0 else v


class _Potential:
    family: ClassVar[str]

    def evaluate(self, r):
        r_arr = _radii(r)
        return _out(self._v(r_arr), r)

    def _v(self, r):  # pragma: no cover - abstract
        raise NotImplementedError

    def params(self) -> dict:
        return {k: float(v) for k, v in asdict(self).items()}

    def to_dict(self) -> dict:
        return {"family": self.family, "params": self.params()}

    def replace(self, **changes):
        data = self.params()
        data.update(changes)
        return type(self)(**data)


@dataclass(frozen=True)
class Coulomb(_Potential):
    Z: float = 1.0
    family: ClassVar[str] = "coulomb"

    def _v(self, r):
        return -self.Z / r


@dataclass(frozen=True)
class Harmonic(_Potential):
    """``k r^2``; ``k = 0`` gives the free particle."""

    k: float = 0.5
    family: ClassVar[str] = "harmonic"

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("harmonic constant k must be >= 0")

    def _v(self, r):
        return self.k * r * r


@dataclass(frozen=True)
class PowerLaw(_Potential):
    """``A sgn(nu) r^nu`` with A > 0, nu != 0."""

    A: float = 1.0
    nu: float = 1.0
    family: ClassVar[str] = "power_law"

    def __post_init__(self):
        if not self.A > 0:
            raise ValueError("power-law coupling A must be > 0")
        if self.nu == 0:
            raise ValueError("power-law exponent nu must be nonzero; use Logarithmic")

    def _v(self, r):
        return self.A * math.copysign(1.0, self.nu) * r**self.nu


@dataclass(frozen=True)
class Logarithmic(_Potential):
    A: float = 1.0
    family: ClassVar[str] = "logarithmic"

    def __post_init__(self):
        if not self.A > 0:
            raise ValueError("logarithmic coupling A must be > 0")

    def _v(self, r):
        return self.A * np.log(r)


@dataclass(frozen=True)
class SHO(_Potential):
    """Spiked oscillator ``r^2 + lam r^(-alpha)``."""

    lam: float = 0.0
    alpha: float = 4.0
    family: ClassVar[str] = "sho"

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("spike exponent alpha must be > 0")

    def _v(self, r):
        return r * r + self.lam * r ** (-self.alpha)


@dataclass(frozen=True)
class ChargedOscillator(_Potential):
    """``r^2 + lam / r`` (spiked oscillator with alpha = 1)."""

    lam: float = 0.0
    family: ClassVar[str] = "charged_oscillator"

    def _v(self, r):
        return r * r + self.lam / r

    def as_sho(self) -> SHO:
        return SHO(lam=self.lam, alpha=1.0)


@dataclass(frozen=True)
class SexticSingular(_Potential):
    """``a r^2 + b / r^4 + c / r^6`` with a, c > 0."""

    a: float = 1.0
    b: float = 0.0
    c: float = 1.0
    family: ClassVar[str] = "sextic_singular"

    def __post_init__(self):
        if not (self.a > 0 and self.c > 0):
            raise ValueError("sextic potential needs a > 0 and c > 0")

    def _v(self, r):
        r2 = r * r
        return self.a * r2 + self.b / (r2 * r2) + self.c / (r2 * r2 * r2)


@dataclass(frozen=True)
class GSHO(_Potential):
    """Generalized spiked oscillator ``r^2 + A / r^2 + lam r^(-alpha)``."""

    A: float = 0.0
    lam: float = 0.0
    alpha: float = 4.0
    family: ClassVar[str] = "gsho"

    def __post_init__(self):
        if self.A < 0:
            raise ValueError("GSHO requires A >= 0")
        if not self.alpha > 0:
            raise ValueError("spike exponent alpha must be > 0")

    def _v(self, r):
        return r * r + self.A / (r * r) + self.lam * r ** (-self.alpha)


@dataclass(frozen=True)
class Hulthen(_Potential):
    """``-Z delta e^(-delta r) / (1 - e^(-delta r))``."""

    Z: float = 1.0
    delta: float = 0.1
    family: ClassVar[str] = "hulthen"

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError("Hulthen screening delta must be >= 0")

    def _v(self, r):
        if self.delta == 0:
            return -self.Z / r
        # expm1 keeps full precision as delta*r -> 0, where V -> -Z/r + Z delta/2
        return -self.Z * self.delta / np.expm1(self.delta * r)


@dataclass(frozen=True)
class Yukawa(_Potential):
    """``-Z e^(-lam r) / r``."""

    Z: float = 1.0
    lam: float = 0.1
    family: ClassVar[str] = "yukawa"

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("Yukawa screening lam must be >= 0")

    def _v(self, r):
        return -self.Z * np.exp(-self.lam * r) / r


@dataclass(frozen=True)
class NPO(_Potential):
    """Non-polynomial oscillator ``r^2 + lam r^2 / (1 + g r^2)``."""

    g: float = 1.0
    lam: float = 0.0
    family: ClassVar[str] = "npo"

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError("NPO requires g > 0")

    def _v(self, r):
        r2 = r * r
        return r2 + self.lam * r2 / (1.0 + self.g * r2)


FAMILIES = {cls.family: cls for cls in (
    Coulomb, Harmonic, PowerLaw, Logarithmic, SHO, ChargedOscillator,
    SexticSingular, GSHO, Hulthen, Yukawa, NPO)}


def from_dict(data: dict):
    """Build a potential from ``{"family": ..., "params": {...}}``."""
    if not isinstance(data, dict):
        raise ValueError("potential must be a JSON object")
    if "family" not in data:
        raise ValueError("potential is missing required field 'family'")
    extra = set(data) - {"family", "params"}
    if extra:
        raise ValueError(f"potential has unknown field(s): {sorted(extra)}")
    name = data["family"]
    cls = FAMILIES.get(name)
    if cls is None:
        raise ValueError(f"unknown potential family {name!r}; choose from {sorted(FAMILIES)}")
    params = data.get("params", {})
    if not isinstance(params, dict):
        raise ValueError("potential 'params' must be an object")
    allowed = {f.name for f in fields(cls)}
    unknown = set(params) - allowed
    if unknown:
        raise ValueError(f"unknown parameter(s) for {name}: {sorted(unknown)}; allowed {sorted(allowed)}")
    for key, value in params.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError(f"parameter {name}.{key} must be a number")
    return cls(**{k: float(v) for k, v in params.items()})


def from_json(text: str):
    return from_dict(json.loads(text))


def to_dict(spec) -> dict:
    return spec.to_dict()


def evaluate(spec, r):
    """Potential value at ``r > 0`` (scalar or array)."""
    return spec.evaluate(r)


# ---------------------------------------------------------------------------
# classification

class SingularityClass(enum.Enum):
    REGULAR = "regular"
    TRANSITION = "transition"
    SINGULAR_REPULSIVE = "singular_repulsive"
    SINGULAR_ATTRACTIVE = "singular_attractive"


_PROBE_R = 10.0 ** -np.arange(2, 11)


def classify(spec) -> SingularityClass:
    """Classify by the small-r behaviour of ``r^2 V(r)``.

    ``r^2 V`` is sampled at r = 1e-2 .. 1e-10 and its local power-law exponent
    taken from the two innermost samples: a positive exponent means the limit
    is zero (regular), a vanishing one a finite limit (transition), a negative
    one divergence whose sign decides repulsive/attractive.
    """
    with np.errstate(all="ignore"):
        s = _PROBE_R**2 * np.asarray(spec.evaluate(_PROBE_R), dtype=float)
    last = s[-1]
    if last == 0.0 or abs(last) < 1e-12:
        return SingularityClass.REGULAR
    if not np.isfinite(last):
        return (SingularityClass.SINGULAR_REPULSIVE if last > 0
                else SingularityClass.SINGULAR_ATTRACTIVE)
    prev = s[-2]
    if prev == 0.0 or np.sign(prev) != np.sign(last):
        slope = 1.0
    else:
        slope = math.log(abs(last / prev)) / math.log(_PROBE_R[-1] / _PROBE_R[-2])
    if slope > 0.05:
        return SingularityClass.REGULAR
    if slope < -0.05:
        return (SingularityClass.SINGULAR_REPULSIVE if last > 0
                else SingularityClass.SINGULAR_ATTRACTIVE)
    return SingularityClass.TRANSITION


# ---------------------------------------------------------------------------
# closed forms

_CONSTRAINT_RTOL = 1e-9


def airy_zeros(count: int) -> np.ndarray:
    """Magnitudes ``a_k > 0`` of the first ``count`` zeros ``Ai(-a_k) = 0``.

    Newton iteration on Ai seeded by the large-k asymptotic expansion.
    """
    out = np.empty(count)
    for k in range(1, count + 1):
        t = 3.0 * math.pi * (4 * k - 1) / 8.0
        a = t ** (2.0 / 3.0) * (1 + 5 / 48 * t**-2 - 5 / 36 * t**-4
                                 + 77125 / 82944 * t**-6)
        for _ in range(50):
            ai, aip, _, _ = special.airy(-a)
            step = ai / (-aip)
            a -= step
            if abs(step) <= 1e-15 * a:
                break
        else:
            raise RuntimeError(f"Airy zero {k} did not converge")
        out[k - 1] = a
    return out


def _coulomb_energy(Z, n, c):
    return -Z * Z / (4.0 * c * n * n)


def _harmonic_energy(k, n_r, l_eff, c):
    return 2.0 * math.sqrt(c * k) * (2 * n_r + l_eff + 1.5)


def _effective_l(l, extra, c):
    """l' with l'(l'+1) = l(l+1) + extra / c, regular branch; None if complex."""
    disc = (l + 0.5) ** 2 + extra / c
    if disc < 0:
        return None
    return math.sqrt(disc) - 0.5


def _close(lhs, rhs):
    return abs(lhs - rhs) <= _CONSTRAINT_RTOL * max(1.0, abs(lhs), abs(rhs))


def _charged_oscillator_elementary(lam, l, n_r, max_degree=40):
    """Elementary (polynomial x Gaussian) solutions of -u'' + (r^2 + lam/r) u.

    Returns E for the state with ``n_r`` nodes when ``lam`` makes the series
    terminate, else None.
    """
    s = l + 1
    for m in range(max_degree + 1):
        E = 2 * (m + s) + 1
        a = [1.0]
        for k in range(1, m + 2):
            prev2 = a[k - 2] if k >= 2 else 0.0
            a.append((lam * a[k - 1] + (2 * (k - 2 + s) + 1 - E) * prev2) / (k * (k + 2 * s - 1)))
        scale = max(abs(x) for x in a[: m + 1])
        if abs(a[m + 1]) > _CONSTRAINT_RTOL * scale:
            continue
        roots = np.roots(a[m::-1]) if m > 0 else np.array([])
        nodes = int(np.sum((np.abs(roots.imag) < 1e-9) & (roots.real > 0)))
        if nodes == n_r:
            return float(E)
    return None


def exact_reference(spec, l: int, n_r: int, convention: Convention = ATOMIC):
    """Closed-form energy of state ``(n_r, l)`` if one is known, else None.

    The value is in the requested convention (kinetic prefactor and report
    scale applied).  Conditionally exact families return None when their
    parameter constraint is not met.
    """
    c = convention.c
    e = _exact_unscaled(spec, l, n_r, c)
    return None if e is None else e * convention.report_scale


def _exact_unscaled(spec, l, n_r, c):
    n = n_r + l + 1
    if isinstance(spec, Coulomb):
        return _coulomb_energy(spec.Z, n, c)
    if isinstance(spec, Harmonic):
        return None if spec.k == 0 else _harmonic_energy(spec.k, n_r, l, c)
    if isinstance(spec, PowerLaw):
        if spec.nu == -1:
            return _coulomb_energy(spec.A, n, c)
        if spec.nu == 2:
            return _harmonic_energy(spec.A, n_r, l, c)
        if spec.nu == 1 and l == 0:
            return c ** (1 / 3) * spec.A ** (2 / 3) * airy_zeros(n_r + 1)[n_r]
        return None
    if isinstance(spec, ChargedOscillator):
        spec = spec.as_sho()
    if isinstance(spec, SHO):
        spec = GSHO(A=0.0, lam=spec.lam, alpha=spec.alpha)
    if isinstance(spec, GSHO):
        extra = spec.A
        if spec.alpha == 2:
            extra += spec.lam
        elif spec.lam != 0:
            if spec.alpha == 1 and spec.A == 0:
                # scale r -> c^(1/4) t to reach unit kinetic prefactor
                e1 = _charged_oscillator_elementary(spec.lam * c ** -0.75, l, n_r)
                return None if e1 is None else math.sqrt(c) * e1
            return None
        l_eff = _effective_l(l, extra, c)
        return None if l_eff is None else _harmonic_energy(1.0, n_r, l_eff, c)
    if isinstance(spec, SexticSingular):
        if n_r != 0:
            return None
        a, b, cc = spec.a / c, spec.b / c, spec.c / c
        if 2.0 + b / math.sqrt(cc) <= 0:
            return None
        if not _close((2 * math.sqrt(cc) + b) ** 2, cc * ((2 * l + 1) ** 2 + 8 * math.sqrt(a * cc))):
            return None
        return c * math.sqrt(a) * (4.0 + b / math.sqrt(cc))
    if isinstance(spec, Hulthen):
        Zp = spec.Z / (2.0 * c)
        if spec.delta == 0:
            return _coulomb_energy(spec.Z, n, c)
        if l != 0:
            return None
        n = n_r + 1
        d = spec.delta / Zp
        if n * n >= 2.0 / d:
            return None
        return 2.0 * c * Zp * Zp * (-(d * d) / (8.0 * n * n) * (2.0 / d - n * n) ** 2)
    if isinstance(spec, Yukawa):
        return _coulomb_energy(spec.Z, n, c) if spec.lam == 0 else None
    if isinstance(spec, NPO):
        if spec.lam == 0:
            return _harmonic_energy(1.0, n_r, l, c)
        if n_r != 0:
            return None
        g = spec.g * math.sqrt(c)
        lam_needed = -2.0 * g * (g * (2 * l + 3) + 2.0)
        if not _close(spec.lam, lam_needed):
            return None
        return math.sqrt(c) * (spec.lam / g + 2 * l + 7)
    return None


# ---------------------------------------------------------------------------
# asymptotic / perturbative reference series (diagnostics only)

HULTHEN_B = (math.e - 1) ** -1 * ((math.e - 1) ** 2 / math.e - 1)

_CO_COULOMB = (-0.25, 12.0, -1032.0, 348864.0, -211519200.0, 188054861568.0)


def _co_strong_terms(mu):
    return (3 * mu**-2, math.sqrt(3), 7 * mu**2 / 36, 37 * mu**4 / (432 * math.sqrt(3)),
            2573 * mu**6 / 139968, 168233 * mu**8 / (2239488 * math.sqrt(27)))


def hermite_integral(n: int, g: float) -> float:
    """``int_0^inf exp(-x^2) H_n(x)^2 (1 - g x^2) / (1 + g x^2) dx``.

    Adaptive quadrature on the norm-scaled integrand; accurate to ~1e-12
    relative to the Hermite norm ``sqrt(pi) 2^n n! / 2``.
    """
    if not 0 <= n <= 20:
        raise ValueError("hermite_integral supports 0 <= n <= 20")
    if not g > 0:
        raise ValueError("g must be > 0")
    norm = math.sqrt(math.pi) * 2.0**n * math.factorial(n) / 2.0

    def f(x):
        return math.exp(-x * x) * special.eval_hermite(n, x) ** 2 * (1 - g * x * x) / (1 + g * x * x) / norm

    # integrand is negligible beyond x ~ sqrt(2n+1) + 8
    cut = math.sqrt(2 * n + 1) + 9.0
    val, _ = integrate.quad(f, 0.0, cut, epsabs=1e-13, epsrel=1e-13, limit=400)
    return val * norm


def reference_series(spec, regime: str, order: int = 2, n: int = 0, l: int = 0) -> float:
    """Truncated asymptotic or perturbative energy estimate.

    These are diagnostics, not convergent expansions.  Supported pairs:

    ==================  ============  ===========================================
    family              regime        meaning
    ==================  ============  ===========================================
    charged_oscillator  ``coulomb``   large negative lam, up to 6 terms (p^2 units)
    charged_oscillator  ``strong``    large positive lam, up to 6 terms (p^2 units)
    sho / gsho(A=0)     ``weak``      small-lam ground state by alpha band (p^2)
    sho alpha=5/2       ``strong``    large-lam ground state, up to 4 terms (p^2)
    hulthen             ``ecker_weizel``  state (n, l), atomic units
    npo                 ``small``     1D state n, small lam/g (p^2 units)
    npo                 ``large_g``   1D state n <= 3, large g (p^2 units)
    ==================  ============  ===========================================
    """
    if isinstance(spec, ChargedOscillator):
        lam = spec.lam
        if regime == "coulomb":
            if not 1 <= order <= len(_CO_COULOMB):
                raise ValueError(f"order must be 1..{len(_CO_COULOMB)}")
            return lam * lam * sum(cf * lam ** (-4 * i) for i, cf in enumerate(_CO_COULOMB[:order]))
        if regime == "strong":
            if not lam > 0:
                raise ValueError("strong-coupling series needs lam > 0")
            terms = _co_strong_terms((2.0 / lam) ** (1 / 3))
            if not 1 <= order <= len(terms):
                raise ValueError(f"order must be 1..{len(terms)}")
            return float(sum(terms[:order]))
    if isinstance(spec, GSHO) and spec.A == 0:
        spec = SHO(lam=spec.lam, alpha=spec.alpha)
    if isinstance(spec, SHO):
        a, lam = spec.alpha, spec.lam
        if regime == "weak":
            return _sho_weak(a, lam, order)
        if regime == "strong" and a == 2.5:
            x = (4.0 / (5.0 * lam)) ** (4 / 9)
            terms = (9 / 5 * (5 * lam / 4) ** (4 / 9), math.sqrt(4.5), 77 / 288 * x,
                     -1967 / 27648 * math.sqrt(2 / 9) * x * x)
            if not 1 <= order <= 4:
                raise ValueError("order must be 1..4")
            return float(sum(terms[:order]))
    if isinstance(spec, Hulthen) and regime == "ecker_weizel":
        if not 0 <= l < n:
            raise ValueError("need n >= 1 and 0 <= l < n")
        d = spec.delta / spec.Z
        ll = l * (l + 1)
        e = (-0.5 * (1 / n - n * d / 2) ** 2
             + d * d * ll * HULTHEN_B / 8 * (4 / (n * n * d) + 2 - ll * HULTHEN_B / (n * n)))
        return spec.Z**2 * e
    if isinstance(spec, NPO):
        lp = spec.lam / spec.g
        if regime == "small":
            norm = math.sqrt(math.pi) * 2.0**n * math.factorial(n)
            return 2 * n + 1 + 0.5 * lp - lp * hermite_integral(n, spec.g) / norm
        if regime == "large_g":
            g = spec.g
            sp = math.sqrt(math.pi)
            corr = {
                0: 1 - sp * g**-0.5 + 2.5 / g,
                1: 1 - 1.5 / g + 2 * sp * g**-1.5,
                2: 1 - 0.5 * sp * g**-0.5 + 2.25 / g,
                3: 1 - 1.5 / g + 1.5 * sp * g**-1.5,
            }
            if n not in corr:
                raise ValueError("large-g series available for n = 0..3 only")
            return 2 * n + 1 + lp * corr[n]
    raise ValueError(f"no reference series for {spec.family!r} in regime {regime!r}")


def _sho_weak(a, lam, order):
    if not lam > 0:
        raise ValueError("weak-coupling series needs lam > 0")
    if a <= 2.5:
        raise ValueError("weak-coupling ground-state series needs alpha > 5/2")
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    euler = 0.5772156649
    if a == 3:
        terms = (3 - 4 / math.sqrt(math.pi) * lam * math.log(lam),
                 -10 * euler / math.sqrt(math.pi) * lam)
    else:
        nu = 1.0 / (a - 2.0)
        lead = 4 * nu ** (2 * nu) * math.gamma(1 - nu) / (math.sqrt(math.pi) * math.gamma(1 + nu)) * lam**nu
        if a >= 4:
            terms = (3 + lead, 0.0)
        elif a > 3:
            terms = (3 + lead, -4 * nu * math.gamma((3 - 1 / nu) / 2) / ((1 - nu) * math.sqrt(math.pi)) * lam)
        else:
            terms = (3 + lead, 2 * math.gamma((3 - a) / 2) / math.sqrt(math.pi) * lam)
    return float(sum(terms[:order]))
