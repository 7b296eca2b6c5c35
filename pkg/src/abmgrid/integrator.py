"""Adams-Bashforth-Moulton predictor-corrector integration on a free grid.

The engine advances an ODE system y' = f(x, y) with explicit
(Adams-Bashforth) predictions optionally refined by an implicit
(Adams-Moulton) correction, in PECE form:

    Predict   y_AB at x + dx from the last N stored derivatives,
    Evaluate  f(x + dx, y_AB),
    Correct   y_AM from those derivatives plus the new one (N+1 nodes),
    Evaluate  f(x + dx, y_AM), which is what enters the history.

Quadrature weights are rebuilt each step from the actual node
abscissae, so the grid never needs to be uniform; the step-size
controller exploits that freedom by scaling dx against the fractional
correction |y_AM - y_AB| relative to a target correction E.  Growth is
capped geometrically; shrinking is uncapped down to an optional floor.
Steps are never rejected: the correction always ships and only the
*next* step size responds.

Bootstrapping: the first step has a one-node history and runs at order
1, the second at order 2, and so on until the configured order is
reached, so a single initial condition suffices.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .quadrature import quadrature_weights

__all__ = [
    "Mode",
    "IntegratorConfig",
    "NodeHistory",
    "StepRecord",
    "Trajectory",
    "IntegrationError",
    "MaxStepsExceeded",
    "NonFiniteState",
    "CallbackFailure",
    "ab_predict",
    "am_correct",
    "fractional_correction",
    "next_step_size",
    "integrate",
]


class Mode(enum.Enum):
    """Stepping discipline for one integration."""

    AB_FIXED = "ab-fixed"          # explicit only, constant dx
    ABM_FIXED = "abm-fixed"        # predictor-corrector, constant dx
    ABM_ADAPTIVE = "abm-adaptive"  # predictor-corrector, controlled dx


@dataclass(frozen=True)
class IntegratorConfig:
    """Immutable knobs for one integration.

    ``order_ab`` is the number of history nodes the explicit prediction
    uses once bootstrapping has finished; the implicit correction always
    uses one node more (the N and N+1 tandem).  ``target_correction``
    is the dimensionless fractional correction E the adaptive
    controller steers toward.
    """

    order_ab: int
    target_correction: float = 1e-8
    dx_initial: float = 0.01
    dx_min: float = 0.0
    growth_cap: float = 3.0
    mode: Mode = Mode.ABM_ADAPTIVE
    max_steps: int = 1_000_000

    def __post_init__(self):
        if self.order_ab < 1:
            raise ValueError("order_ab must be >= 1")
        if not self.target_correction > 0.0:
            raise ValueError("target_correction must be positive")
        if not self.dx_initial > 0.0:
            raise ValueError("dx_initial must be positive")
        if self.dx_min < 0.0:
            raise ValueError("dx_min must be non-negative")
        if self.dx_initial < self.dx_min:
            raise ValueError("dx_initial must be >= dx_min")
        if not self.growth_cap > 1.0:
            raise ValueError("growth_cap must exceed 1")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")


class NodeHistory:
    """Ring buffer of accepted nodes (x, y, y').

    Abscissae must be strictly increasing; the oldest node is evicted
    once ``capacity`` is exceeded.  Stored derivatives are the ones
    evaluated at the *corrected* states, which is what makes the PECE
    accounting exactly two evaluations per step.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self._nodes = deque(maxlen=capacity)

    def __len__(self):
        return len(self._nodes)

    @property
    def capacity(self) -> int:
        return self._nodes.maxlen

    def append(self, x: float, y: np.ndarray, dy: np.ndarray) -> None:
        if self._nodes and x <= self._nodes[-1][0]:
            raise ValueError(
                f"abscissae must be strictly increasing; got {x!r} after "
                f"{self._nodes[-1][0]!r}")
        self._nodes.append((float(x), np.array(y, dtype=float, copy=True),
                            np.array(dy, dtype=float, copy=True)))

    def tail(self, n: int):
        """Most recent ``n`` nodes as (abscissae, derivative rows)."""
        if not 1 <= n <= len(self._nodes):
            raise ValueError(f"cannot take {n} nodes from {len(self._nodes)}")
        nodes = list(self._nodes)[-n:]
        xs = np.array([node[0] for node in nodes])
        dys = np.array([node[2] for node in nodes])
        return xs, dys

    @property
    def newest(self):
        return self._nodes[-1]


@dataclass(frozen=True)
class StepRecord:
    """One accepted step.

    ``epsilon`` is the signed per-component fractional correction;
    ``epsilon_max`` is the magnitude of its largest component, the
    scalar the controller acts on.  ``capped``/``floored`` report
    whether the controller's choice of the *next* step size hit the
    growth cap or the minimum-step floor on this step.
    """

    index: int
    x_next: float
    dx: float
    y_ab: np.ndarray
    y_am: np.ndarray
    epsilon: np.ndarray
    epsilon_max: float
    effective_order: int
    capped: bool = False
    floored: bool = False


class Trajectory:
    """Accepted steps of one integration plus bookkeeping totals."""

    def __init__(self, x0: float, y0: np.ndarray):
        self.x0 = float(x0)
        self.y0 = np.array(y0, dtype=float, copy=True)
        self.records: list[StepRecord] = []
        self.n_evals = 0
        self.halted = False  # True when a state predicate stopped the run

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def x(self) -> np.ndarray:
        return np.array([r.x_next for r in self.records])

    @property
    def y(self) -> np.ndarray:
        return np.array([r.y_am for r in self.records])

    @property
    def dx(self) -> np.ndarray:
        return np.array([r.dx for r in self.records])

    @property
    def epsilon_max(self) -> np.ndarray:
        return np.array([r.epsilon_max for r in self.records])

    @property
    def final_x(self) -> float:
        return self.records[-1].x_next if self.records else self.x0

    @property
    def final_y(self) -> np.ndarray:
        return self.records[-1].y_am if self.records else self.y0


class IntegrationError(RuntimeError):
    """Base failure; carries the partial trajectory accepted so far."""

    def __init__(self, message: str, trajectory: Trajectory):
        super().__init__(message)
        self.trajectory = trajectory


class MaxStepsExceeded(IntegrationError):
    pass


class NonFiniteState(IntegrationError):
    pass


class CallbackFailure(IntegrationError):
    pass


def ab_predict(abscissae: Sequence[float], derivatives: np.ndarray,
               y: np.ndarray, dx: float) -> np.ndarray:
    """Explicit prediction at the last abscissa + dx.

    ``abscissae`` are the history node positions (strictly increasing,
    most recent last) and ``derivatives`` the matching derivative rows.
    One weight set serves every component of y.
    """
    offsets = np.asarray(abscissae, dtype=float) - float(abscissae[-1])
    weights = quadrature_weights(offsets, dx)
    return y + weights @ np.asarray(derivatives, dtype=float)


def am_correct(abscissae: Sequence[float], derivatives: np.ndarray,
               y: np.ndarray, predicted_derivative: np.ndarray,
               dx: float) -> np.ndarray:
    """Implicit correction using the history plus the predicted node.

    ``predicted_derivative`` is f evaluated at (x + dx, y_AB); it joins
    the stencil as the node at offset +dx, raising the interpolant
    order by one relative to the prediction.
    """
    offsets = np.asarray(abscissae, dtype=float) - float(abscissae[-1])
    offsets = np.append(offsets, dx)
    weights = quadrature_weights(offsets, dx)
    increment = weights[:-1] @ np.asarray(derivatives, dtype=float)
    return y + increment + weights[-1] * np.asarray(predicted_derivative,
                                                    dtype=float)


def fractional_correction(y_ab: np.ndarray, y_am: np.ndarray):
    """Signed per-component correction and its largest magnitude.

    Each component is (y_am - y_ab) / |y_ab|; a component whose
    predicted value is exactly zero falls back to the absolute
    difference so the controller always sees a finite number.
    """
    y_ab = np.asarray(y_ab, dtype=float)
    y_am = np.asarray(y_am, dtype=float)
    denom = np.where(np.abs(y_ab) > 0.0, np.abs(y_ab), 1.0)
    epsilon = (y_am - y_ab) / denom
    return epsilon, float(np.max(np.abs(epsilon)))


def _controlled_step(epsilon_max: float, config: IntegratorConfig,
                     effective_am_order: int, dx_current: float):
    """Next step size plus whether the cap or the floor decided it."""
    if epsilon_max == 0.0:
        ratio = config.growth_cap
        capped = True
    else:
        raw = (config.target_correction / epsilon_max) ** (
            1.0 / effective_am_order)
        capped = raw >= config.growth_cap
        ratio = min(raw, config.growth_cap)
    dx_next = ratio * dx_current
    floored = dx_next < config.dx_min
    if floored:
        dx_next = config.dx_min
    return dx_next, capped, floored


def next_step_size(epsilon_max: float, config: IntegratorConfig,
                   effective_am_order: int, dx_current: float) -> float:
    """Step size the adaptive controller selects for the next step.

    The scaling ratio is (E / epsilon_max)^(1/effective_am_order),
    clipped at the growth cap (taken outright when epsilon_max is 0)
    and floored at dx_min.
    """
    if dx_current <= 0.0:
        raise ValueError("dx_current must be positive")
    if effective_am_order < 2:
        raise ValueError("effective_am_order must be >= 2")
    return _controlled_step(epsilon_max, config, effective_am_order,
                            dx_current)[0]


def integrate(system: Callable[[float, np.ndarray], np.ndarray],
              y0, x0: float, config: IntegratorConfig, *,
              x_end: Optional[float] = None,
              halt: Optional[Callable[[float, np.ndarray], bool]] = None,
              sink: Optional[Callable[[StepRecord], None]] = None
              ) -> Trajectory:
    """Integrate y' = system(x, y) from (x0, y0).

    Exactly one stop condition is required: ``x_end`` clamps the final
    step so the trajectory lands on the endpoint without overshooting;
    ``halt`` stops after the first accepted step whose corrected state
    satisfies the predicate.  Both may be given, in which case
    whichever fires first ends the run.  Each accepted step is passed
    to ``sink`` as it happens.

    Raises :class:`MaxStepsExceeded`, :class:`NonFiniteState`, or
    :class:`CallbackFailure`; each carries the partial trajectory in
    its ``trajectory`` attribute.
    """
    if x_end is None and halt is None:
        raise ValueError("provide x_end, halt, or both")
    y = np.atleast_1d(np.asarray(y0, dtype=float)).copy()
    if y.ndim != 1:
        raise ValueError("y0 must be a scalar or 1-D vector")
    if not np.all(np.isfinite(y)):
        raise ValueError("y0 must be finite")
    x = float(x0)
    if x_end is not None and not x_end > x:
        raise ValueError("x_end must exceed x0")

    trajectory = Trajectory(x, y)

    def evaluate(xq: float, yq: np.ndarray) -> np.ndarray:
        try:
            dy = system(xq, yq)
        except Exception as exc:
            raise CallbackFailure(
                f"derivative callback failed at x={xq!r}: {exc}",
                trajectory) from exc
        dy = np.atleast_1d(np.asarray(dy, dtype=float))
        if dy.shape != y.shape:
            raise CallbackFailure(
                f"derivative shape {dy.shape} != state shape {y.shape}",
                trajectory)
        trajectory.n_evals += 1
        return dy

    history = NodeHistory(config.order_ab + 1)
    history.append(x, y, evaluate(x, y))
    dx = config.dx_initial
    end_tol = 0.0 if x_end is None else 1e-14 * max(1.0, abs(x_end))

    for index in range(config.max_steps):
        if x_end is not None and x >= x_end - end_tol:
            return trajectory
        clamped = x_end is not None and x + dx >= x_end
        if clamped:
            dx = x_end - x
        effective_order = min(len(history), config.order_ab)
        abscissae, derivatives = history.tail(effective_order)
        x_next = x_end if clamped else x + dx

        y_ab = ab_predict(abscissae, derivatives, y, dx)
        if config.mode is Mode.AB_FIXED:
            y_am = y_ab
            epsilon = np.zeros_like(y)
            epsilon_max = 0.0
            dy_next = evaluate(x_next, y_ab)
        else:
            dy_predicted = evaluate(x_next, y_ab)
            y_am = am_correct(abscissae, derivatives, y, dy_predicted, dx)
            dy_next = evaluate(x_next, y_am)
            epsilon, epsilon_max = fractional_correction(y_ab, y_am)
        if not (np.all(np.isfinite(y_am)) and np.all(np.isfinite(dy_next))):
            raise NonFiniteState(
                f"non-finite state or derivative at x={x_next!r}", trajectory)

        capped = floored = False
        dx_taken = dx
        if config.mode is Mode.ABM_ADAPTIVE and not clamped:
            dx, capped, floored = _controlled_step(
                epsilon_max, config, effective_order + 1, dx)

        record = StepRecord(index=index, x_next=x_next, dx=dx_taken,
                            y_ab=y_ab, y_am=y_am, epsilon=epsilon,
                            epsilon_max=epsilon_max,
                            effective_order=effective_order,
                            capped=capped, floored=floored)
        trajectory.records.append(record)
        if sink is not None:
            sink(record)
        history.append(x_next, y_am, dy_next)
        x, y = x_next, y_am

        if halt is not None and halt(x, y):
            trajectory.halted = True
            return trajectory

    if x_end is not None and x >= x_end - end_tol:
        return trajectory
    raise MaxStepsExceeded(
        f"stop condition not reached within {config.max_steps} steps",
        trajectory)
