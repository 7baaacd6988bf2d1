"""Randomized search for quantile points of log-concave laws.

The problem of maximizing the comparable mass subject to the two index
constraints lifts to maximizing v over the convex body

    {(v, x) : log P(X above x) >= log(1 - tau) + v,
              log P(X below x) >= log(tau) + v,
              log pbar <= v <= 0,  x in a bounding box}

whenever the law is log-concave, since both orthant probabilities are then
log-concave in x.  The body is explored with hit-and-run chains whose
stationary density is proportional to exp(a v); a simulated-annealing
schedule raises a until the chains concentrate at the top.  Probabilities
enter only through two (log) evaluation callbacks, which can be closed
forms or a conservative Monte Carlo oracle.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, InfeasibleStart, NotInBody, TauOutOfRange

_BISECT_TOL = 1e-9
_BISECT_MAX = 80


@dataclass
class SolveProblem:
    log_below: object          # x -> log P(X below x), -inf allowed
    log_above: object          # x -> log P(X above x)
    tau: float
    pbar: float                # known positive lower bound on the optimum
    box: tuple                 # (lo, hi) arrays bounding the search in x

    def __post_init__(self):
        if not 0.0 < self.tau < 1.0:
            raise TauOutOfRange(self.tau)
        if not 0.0 < self.pbar < 1.0:
            raise DataError(f"pbar must lie in (0, 1), got {self.pbar}")
        lo, hi = self.box
        self.lo = np.asarray(lo, float)
        self.hi = np.asarray(hi, float)
        if np.any(self.hi <= self.lo):
            raise DataError("empty bounding box")
        self.dim = self.lo.size
        self._log_tau = math.log(self.tau)
        self._log_1mtau = math.log(1.0 - self.tau)
        self._vmin = math.log(self.pbar)
        self.n_evals = 0

    @classmethod
    def from_model(cls, model, tau, pbar, pad=0.0):
        lo, hi = model.support_box()
        lo = np.asarray(lo, float) - pad
        hi = np.asarray(hi, float) + pad

        def log_below(x):
            p = model.prob_below(x)
            return math.log(p) if p > 0 else -math.inf

        def log_above(x):
            p = model.prob_above(x)
            return math.log(p) if p > 0 else -math.inf

        return cls(log_below, log_above, tau, pbar, (lo, hi))

    def contains(self, v, x):
        """Membership of a lifted point in the feasible body."""
        if v < self._vmin - 1e-15 or v > 0.0:
            return False
        if np.any(x < self.lo) or np.any(x > self.hi):
            return False
        self.n_evals += 1
        if self.log_below(x) < self._log_tau + v:
            return False
        return self.log_above(x) >= self._log_1mtau + v


def mc_probability_oracle(sampler, order, n, seed=0):
    """Monte Carlo replacement for the closed-form tail callbacks.

    Draws a reference sample once, then estimates each probability by a
    share, shrunk by three standard errors so the reported body is contained
    in the true one with high probability.
    """
    rng = np.random.default_rng(seed)
    ref = sampler(n, rng)

    def _log_share(mask_fn, x):
        p = float(np.mean(mask_fn(ref, x)))
        p -= 3.0 * math.sqrt(max(p * (1.0 - p), 0.0) / n)
        return math.log(p) if p > 0 else -math.inf

    def log_below(x):
        return _log_share(order.leq_mask, x)

    def log_above(x):
        return _log_share(order.geq_mask, x)

    return log_below, log_above


@dataclass
class SolveResult:
    x: np.ndarray
    p: float                   # e^{v} at the best feasible lifted point
    v: float
    tau: float
    trace: list                # best v after each phase
    phases: int
    chains: int
    n_evals: int
    diagnostics: dict = field(default_factory=dict)


def _initial_states(problem, k, rng, budget=100_000):
    """Rejection sampling of feasible lifted points from the bounding box."""
    states = []
    width = problem.hi - problem.lo
    for _ in range(budget):
        v = rng.uniform(problem._vmin, 0.0)
        x = problem.lo + width * rng.uniform(size=problem.dim)
        if problem.contains(v, x):
            states.append(np.concatenate([[v], x]))
            if len(states) >= k:
                break
    if not states:
        raise InfeasibleStart(
            "no feasible point found; pbar may exceed the attainable mass")
    while len(states) < k:
        states.append(states[len(states) % len(states)].copy())
    return [s.copy() for s in states[:k]]


def _chord(problem, state, direction):
    """Extent [t_minus, t_plus] of the feasible segment through a state."""
    v, x = state[0], state[1:]
    if not problem.contains(v, x):
        raise NotInBody("hit-and-run started outside the body")
    lo = np.concatenate([[problem._vmin], problem.lo])
    hi = np.concatenate([[0.0], problem.hi])

    def box_limit(sign):
        t = math.inf
        for j in range(state.size):
            d = sign * direction[j]
            if d > 1e-300:
                t = min(t, (hi[j] - state[j]) / d)
            elif d < -1e-300:
                t = min(t, (lo[j] - state[j]) / d)
        return t

    def boundary(sign):
        t_max = box_limit(sign)
        if not math.isfinite(t_max):
            t_max = 1e6
        probe = state + sign * t_max * direction
        if problem.contains(probe[0], probe[1:]):
            return sign * t_max
        inside, outside = 0.0, t_max
        for _ in range(_BISECT_MAX):
            if outside - inside <= _BISECT_TOL:
                break
            mid = (inside + outside) / 2.0
            probe = state + sign * mid * direction
            if problem.contains(probe[0], probe[1:]):
                inside = mid
            else:
                outside = mid
        return sign * inside

    return boundary(-1.0), boundary(+1.0)


def _sample_on_chord(rng, t_lo, t_hi, rate):
    """Draw t on [t_lo, t_hi] with density proportional to exp(rate * t)."""
    span = t_hi - t_lo
    if span <= 0:
        return t_lo
    c = rate * span
    u = rng.uniform()
    if abs(c) < 1e-12:
        return t_lo + u * span
    if c > 700:
        return t_hi + math.log(u) / rate if u > 0 else t_hi
    return t_lo + math.log1p(u * math.expm1(c)) / rate


def hit_and_run_step(problem, state, a, rng, chol):
    """One hit-and-run move targeting exp(a v) on the lifted body."""
    direction = chol @ rng.standard_normal(state.size)
    norm = np.linalg.norm(direction)
    if norm == 0:
        return state
    direction /= norm
    t_lo, t_hi = _chord(problem, state, direction)
    t = _sample_on_chord(rng, t_lo, t_hi, a * direction[0])
    nxt = state + t * direction
    if problem.contains(nxt[0], nxt[1:]):
        return nxt
    # Chord endpoints can round a hair outside the body; pull back.
    for _ in range(8):
        t *= 0.9
        nxt = state + t * direction
        if problem.contains(nxt[0], nxt[1:]):
            return nxt
    return state


def anneal_optimize(problem, eps=0.05, delta=0.1, chains=None,
                    steps_per_phase=25, seed=0, max_phases=60):
    """Annealed hit-and-run maximization of v over the lifted body.

    The rate schedule multiplies by (1 + 1/sqrt(d)) each phase, starting at
    pbar over the running best mass; the phase count follows the usual
    sqrt(d) log(1/(eps delta)) budget with the running best substituted for
    the unknown optimum, and then keeps going until the rate resolves a
    relative gap well inside eps.  Proposal directions are Gaussian with
    covariance adapted to the previous phase's states.
    """
    d = problem.dim
    if chains is None:
        chains = max(8, d * math.ceil(math.log(d) + 1)) if d > 1 else 8
    rng = np.random.default_rng(seed)
    states = _initial_states(problem, chains, rng)
    best = max(states, key=lambda s: s[0]).copy()

    width = np.concatenate([[-problem._vmin], problem.hi - problem.lo])
    cov = np.diag((width / 4.0) ** 2)
    chol = np.linalg.cholesky(cov + 1e-8 * np.eye(d + 1))
    growth = 1.0 + 1.0 / math.sqrt(d)
    a_cap = 20.0 * (d + 1) / eps
    trace = []
    phase = 0
    while phase < max_phases:
        phase += 1
        p_best = max(math.exp(best[0]), problem.pbar)
        a = (problem.pbar / p_best) * growth ** phase
        m = math.ceil(math.sqrt(d) * math.log(
            2.0 * p_best * (d + math.log(1.0 / delta)) / (problem.pbar * eps)))
        collected = []
        for c in range(chains):
            s = states[c]
            for _ in range(steps_per_phase):
                s = hit_and_run_step(problem, s, a, rng, chol)
                if s[0] > best[0]:
                    best = s.copy()
            states[c] = s
            collected.append(s)
        trace.append(float(best[0]))
        block = np.array(collected)
        if block.shape[0] > d + 1:
            cov = np.cov(block.T) + 1e-8 * np.eye(d + 1)
            chol = np.linalg.cholesky(cov)
        if phase >= m and a >= a_cap:
            break
    return SolveResult(
        x=best[1:].copy(),
        p=float(math.exp(best[0])),
        v=float(best[0]),
        tau=problem.tau,
        trace=trace,
        phases=phase,
        chains=chains,
        n_evals=problem.n_evals,
        diagnostics={"rate_final": a, "budget_phases": m,
                     "monotone_trace": all(b >= a_ for a_, b in zip(trace, trace[1:]))},
    )
