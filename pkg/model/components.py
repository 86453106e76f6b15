import math
from enum import Enum
from dataclasses import dataclass, field





#Scalar guards shared by every evaluator
EIGHT_NINTHS = 8.0 / 9.0
DEGENERACY_EPS = 1e-12
SINGULAR_EPS = 1e-14
ENDPOINT_GUARD = 1e-6




class GeometryError(Exception):
    """Base class of every domain failure raised by the library."""


class DegenerateConstant(GeometryError):
    pass


class OutsideAdmissibleRegion(GeometryError):
    pass


class SingularDenominator(GeometryError):
    pass


class SingularAngle(GeometryError):
    pass


class NegativeRadicand(GeometryError):
    pass


class ZeroC(GeometryError):
    pass


class InadmissibleStart(GeometryError):
    pass


class NonFiniteState(GeometryError):
    pass


class GridTooSmall(GeometryError):
    pass


class NonUniformGrid(GeometryError):
    pass


class ConfigError(Exception):
    """Malformed run configuration (usage error)."""




class Branch(Enum):
    LOW_POS = 'LowPos'
    HIGH_POS = 'HighPos'
    NEG = 'Neg'


class ImSign(Enum):
    PLUS = 'Plus'
    MINUS = 'Minus'

    @property
    def factor(self):
        return 1.0 if self is ImSign.PLUS else -1.0


class AlphaSide(Enum):
    ACUTE = 'AcuteSide'
    OBTUSE = 'ObtuseSide'


class StopReason(Enum):
    SPAN_EXHAUSTED = 'SpanExhausted'
    ENDPOINT_PROXIMITY = 'EndpointProximity'
    STEP_UNDERFLOW = 'StepUnderflow'




def parse_enum(enum_cls, value):
    """Accepts either the enum member, its value ('LowPos') or its name ('low_pos')."""
    if isinstance(value, enum_cls):
        return value
    text = str(value).strip()
    for member in enum_cls:
        if text.lower() in (member.value.lower(), member.name.lower()):
            return member
    raise ConfigError(f"unknown {enum_cls.__name__} value: {value!r}")




@dataclass(frozen=True)
class SinSqInterval:
    lo: float
    hi: float
    branch: Branch
    hi_closed: bool = False

    def __post_init__(self):
        if not (0.0 < self.lo < self.hi <= 1.0):
            raise OutsideAdmissibleRegion(f"empty sin^2 interval ({self.lo}, {self.hi})")

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def midpoint(self):
        return 0.5 * (self.lo + self.hi)

    def contains(self, s, guard=0.0):
        upper = self.hi if self.hi_closed else self.hi - guard
        if self.hi_closed:
            return self.lo + guard < s <= upper
        return self.lo + guard < s < upper

    def singular_distance(self, s):
        """Distance of s to the nearest endpoint where the family degenerates."""
        lower = s - self.lo
        if self.hi_closed:
            return lower
        return min(lower, self.hi - s)

    def describe(self):
        close = ']' if self.hi_closed else ')'
        return f"({self.lo:g}, {self.hi:g}{close}"




@dataclass(frozen=True)
class ModelParams:
    b: float
    c3: float
    branch: Branch
    rho: float = None
    im_sign: ImSign = ImSign.PLUS
    alpha_side: AlphaSide = AlphaSide.ACUTE
    delta: float = ENDPOINT_GUARD

    def __post_init__(self):
        if not (self.b > 0.0 and math.isfinite(self.b)):
            raise DegenerateConstant(f"b must be positive, got {self.b}")
        if self.c3 == 0.0 or abs(8.0 - 9.0 * self.c3) < DEGENERACY_EPS:
            raise DegenerateConstant(f"c3 = {self.c3} is excluded")

        positive = self.branch in (Branch.LOW_POS, Branch.HIGH_POS)
        if positive != (self.c3 > 0.0):
            raise DegenerateConstant(f"branch {self.branch.value} is incompatible with c3 = {self.c3}")

        #rho defaults to the only value the k1 = 0 family admits
        if self.rho is None:
            object.__setattr__(self, 'rho', -3.0 * self.b * self.b)

    @property
    def c4(self):
        return -self.c3 if self.c3 < 0.0 else 0.0

    def with_rho(self, rho):
        return ModelParams(
            b=self.b, c3=self.c3, branch=self.branch, rho=rho,
            im_sign=self.im_sign, alpha_side=self.alpha_side, delta=self.delta
        )

    def as_dict(self):
        return {
            'b': self.b, 'c3': self.c3, 'c4': self.c4, 'rho': self.rho,
            'branch': self.branch.value, 'im_sign': self.im_sign.value,
            'alpha_side': self.alpha_side.value, 'delta': self.delta
        }




@dataclass(frozen=True)
class SecondFundamentalPoint:
    alpha: float
    a: complex
    tau: complex
    y: float
    c: complex
    c_modulus: float
    theta: float
    nu: float
    mu: complex
    g: float




@dataclass(frozen=True)
class HopfCoefficients:
    phi1_coeff: complex
    phi2_coeff: complex
    q_coeff: complex
    qprime_coeff: complex
    c1: complex
    c2: complex
    gamma: complex
    k1: float




@dataclass
class ResidualEntry:
    name: str
    relation: str
    max_abs_residual: float
    tolerance: float
    kind: str = 'analytic'
    convergence_order: float = None
    detail: dict = field(default_factory=dict)

    @property
    def verdict(self):
        #nan never passes
        return bool(self.max_abs_residual <= self.tolerance)
