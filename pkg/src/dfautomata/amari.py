"""Piecewise-constant reduction of the Amari field equation.

For a field equal to ``u`` on a domain of measure ``|A|`` (and 0 elsewhere)
with constant kernel value ``w``, the amplitude obeys the scalar ODE

    tau du/dt = -u + |A| w f(u)

whose fixed points solve ``u = |A| w f(u)``.  A fixed point is stable when
``|A| w f'(u0) < 1``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

ACTIVATIONS = ("sigmoid", "identity", "heaviside", "tanh")


@dataclass(frozen=True)
class SigmoidParams:
    beta: float = 1.0
    theta: float = 0.0

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("sigmoid gain beta must be positive")


def activation(u, params: SigmoidParams | None = None, kind: str = "sigmoid"):
    """Evaluate ``f(u)`` elementwise.

    ``sigmoid`` is ``1 / (1 + exp(-beta (u - theta)))``; ``heaviside`` steps
    from 0 to 1 at ``theta`` (``f(theta) = 1``); ``tanh`` and ``identity``
    ignore ``params``.
    """
    params = params or SigmoidParams()
    u = np.asarray(u, dtype=float)
    if kind == "sigmoid":
        # logistic via tanh avoids overflow for large |beta (u - theta)|
        out = 0.5 * (1.0 + np.tanh(0.5 * params.beta * (u - params.theta)))
    elif kind == "identity":
        out = u.copy()
    elif kind == "heaviside":
        out = np.where(u >= params.theta, 1.0, 0.0)
    elif kind == "tanh":
        out = np.tanh(u)
    else:
        raise ValueError(f"unknown activation {kind!r}; choose from {ACTIVATIONS}")
    return out[()] if out.ndim == 0 else out


def activation_derivative(u, params: SigmoidParams | None = None, kind: str = "sigmoid"):
    params = params or SigmoidParams()
    u = np.asarray(u, dtype=float)
    if kind == "sigmoid":
        f = activation(u, params, kind)
        out = params.beta * f * (1.0 - f)
    elif kind == "identity":
        out = np.ones_like(u)
    elif kind == "heaviside":
        out = np.zeros_like(u)
    elif kind == "tanh":
        out = 1.0 - np.tanh(u) ** 2
    else:
        raise ValueError(f"unknown activation {kind!r}")
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class ConstantFieldConfig:
    domain_measure: float
    kernel_value: float
    kind: str = "sigmoid"
    sigmoid: SigmoidParams = field(default_factory=SigmoidParams)
    tau: float = 1.0
    scan_step: float = 1e-3
    bracket: tuple[float, float] | None = None

    def __post_init__(self):
        if not self.domain_measure > 0:
            raise ValueError("domain measure |A| must be positive")
        if not self.tau > 0:
            raise ValueError("time constant tau must be positive")
        if self.kind not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.kind!r}")
        if not self.scan_step > 0:
            raise ValueError("scan step must be positive")

    @property
    def gain(self):
        """The product ``|A| w``."""
        return self.domain_measure * self.kernel_value

    def f(self, u):
        return activation(u, self.sigmoid, self.kind)

    def df(self, u):
        return activation_derivative(u, self.sigmoid, self.kind)

    def rhs(self, u):
        """Right-hand side ``-u + |A| w f(u)`` (before dividing by tau)."""
        return -np.asarray(u, dtype=float) + self.gain * self.f(u)

    def satisfies_zero_rest(self):
        """Whether ``f(0) == 0``, which the density-automaton construction needs."""
        return float(self.f(0.0)) == 0.0

    def scan_bracket(self):
        if self.bracket is not None:
            return self.bracket
        if self.kind == "identity":
            return (-0.5, 0.5)
        # |f| <= 1 for the bounded activations, so every root has |u| <= |A| w
        negative_range = self.kind == "tanh" or self.gain < 0
        lo = -0.5 - abs(self.gain) if negative_range else -0.5
        return (lo, abs(self.gain) + 0.5)


@dataclass(frozen=True)
class FixedPoint:
    u0: float
    stability: str
    criterion_value: float


@dataclass(frozen=True)
class FixedPointReport:
    points: tuple[FixedPoint, ...]
    no_bracket: bool = False

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    @property
    def pattern(self):
        return [p.stability for p in self.points]

    def to_dict(self):
        return {"points": [asdict(p) for p in self.points], "no_bracket": self.no_bracket}

    @classmethod
    def from_dict(cls, data):
        return cls(tuple(FixedPoint(**p) for p in data["points"]), data.get("no_bracket", False))

    def table(self) -> str:
        header = "|A|w f'(u0)"
        lines = [f"{'u0':>14}  {header:>12}  stability"]
        for p in self.points:
            lines.append(f"{p.u0:>14.10f}  {p.criterion_value:>12.6f}  {p.stability}")
        if self.no_bracket:
            lines.append("(no sign change found on the scan bracket)")
        return "\n".join(lines)


def classify(criterion: float, tol: float = 1e-9) -> str:
    if abs(criterion - 1.0) <= tol:
        return "marginal"
    return "stable" if criterion < 1.0 else "unstable"


def _bisect(g, lo, hi, tol=1e-12):
    glo = g(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (gm < 0) == (glo < 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _heaviside_fixed_points(cfg: ConstantFieldConfig):
    theta, c = cfg.sigmoid.theta, cfg.gain
    # plateaus: f = 0 below theta, f = 1 from theta on; f' = 0 on both
    roots = []
    if 0.0 < theta:
        roots.append(0.0)
    if c >= theta:
        roots.append(c)
    return FixedPointReport(tuple(FixedPoint(u, "stable", 0.0) for u in sorted(set(roots))),
                            no_bracket=not roots)


def find_fixed_points(cfg: ConstantFieldConfig) -> FixedPointReport:
    """Roots of ``|A| w f(u) - u`` via a sign-change scan refined by bisection."""
    if cfg.kind == "heaviside":
        return _heaviside_fixed_points(cfg)

    def g(u):
        return float(cfg.gain * cfg.f(u) - u)

    lo, hi = cfg.scan_bracket()
    num = int(round((hi - lo) / cfg.scan_step)) + 1
    grid = np.linspace(lo, hi, num)
    values = cfg.gain * cfg.f(grid) - grid
    roots = []
    for k in range(num):
        if values[k] == 0.0:
            roots.append(float(grid[k]))
        elif k + 1 < num and values[k] * values[k + 1] < 0:
            roots.append(_bisect(g, float(grid[k]), float(grid[k + 1])))
    points = []
    for u0 in roots:
        crit = float(cfg.gain * cfg.df(u0))
        points.append(FixedPoint(u0, classify(crit), crit))
    return FixedPointReport(tuple(points), no_bracket=not points)


def integrate(cfg: ConstantFieldConfig, u_init: float, dt: float, steps: int) -> np.ndarray:
    """Explicit Euler trajectory ``u[k+1] = u[k] + dt/tau (-u[k] + |A| w f(u[k]))``."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    if dt / cfg.tau > 1:
        raise ValueError("dt/tau must not exceed 1")
    traj = np.empty(steps + 1)
    traj[0] = u_init
    rate = dt / cfg.tau
    for k in range(steps):
        traj[k + 1] = traj[k] + rate * float(cfg.rhs(traj[k]))
    return traj


def plot_data(cfg: ConstantFieldConfig, num: int = 401):
    """Columns ``u``, ``|A| w f(u)`` over the scan bracket for comparison plots."""
    lo, hi = cfg.scan_bracket()
    u = np.linspace(lo, hi, num)
    return u, cfg.gain * cfg.f(u)


def finite_difference_slope(cfg: ConstantFieldConfig, u0: float, h: float = 1e-6) -> float:
    return float((cfg.rhs(u0 + h) - cfg.rhs(u0 - h)) / (2 * h))


def bistable_config() -> ConstantFieldConfig:
    """Sigmoid field with three fixed points (beta=10, theta=0.5, |A| w = 1)."""
    return ConstantFieldConfig(1.0, 1.0, "sigmoid", SigmoidParams(10.0, 0.5))

