"""Principal-subspace construction.

Two selection methods: the ADAPT macro/micro loop (append the pool operator
with the largest commutator gradient, re-optimize, stop when every pool
gradient is below epsilon) and MP2 screening (keep doubles whose
perturbative amplitude exceeds epsilon_bar, plus the spin-conserving
singles).  Three parameter initialization strategies are supported,
including the generator-informed one that seeds a new parameter with the
Newton step of the local quadratic model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import json
import warnings

import numpy as np

from .hamio import (
    FermionExcitation,
    Mp2Amplitudes,
    jordan_wigner_generator,
)
from .pauli import PauliSum
from .simulator import AnsatzFactor, AnsatzState, StateVector, apply_pauli_sum
from .vqe import CostFunction, minimize

INIT_STRATEGIES = ("hf_zero", "recycled", "generator_informed")


@dataclass
class SelectionConfig:
    method: str = "adapt"              # "adapt" or "mp2s"
    epsilon: float = 1e-3              # ADAPT gradient threshold (Hartree)
    epsilon_bar: float = 1e-4          # MP2 amplitude threshold (dimensionless)
    init_strategy: str = "recycled"
    max_operators: int = 100
    allow_duplicates: bool = True

    def __post_init__(self):
        if self.method not in ("adapt", "mp2s"):
            raise ValueError(f"unknown selection method {self.method!r}")
        if self.init_strategy not in INIT_STRATEGIES:
            raise ValueError(f"unknown init strategy {self.init_strategy!r}")
        if self.epsilon <= 0 or self.epsilon_bar <= 0:
            raise ValueError("selection thresholds must be positive")


@dataclass
class MacroIterationRecord:
    iteration: int
    excitation_label: str
    gradient: float
    energy: float
    expectation_evals_cum: int
    selection_grad_evals_cum: int
    parameters: List[float]

    def to_json(self) -> str:
        return json.dumps(
            {
                "iter": self.iteration,
                "chosen": self.excitation_label,
                "gradient_hartree": self.gradient,
                "energy_hartree": self.energy,
                "expectation_evals_cum": self.expectation_evals_cum,
                "selection_grad_evals_cum": self.selection_grad_evals_cum,
                "parameters": self.parameters,
            }
        )


@dataclass
class SelectionTrace:
    records: List[MacroIterationRecord] = field(default_factory=list)
    converged: bool = False
    total_expectation_evals: int = 0
    selection_grad_evals: int = 0
    final_pool_gradients: Optional[np.ndarray] = None

    def to_jsonl(self) -> str:
        return "\n".join(r.to_json() for r in self.records)


def pool_gradients(
    state: StateVector,
    pool: Sequence[FermionExcitation],
    h: PauliSum,
    h_state: Optional[np.ndarray] = None,
) -> np.ndarray:
    """<state|[H, G_i]|state> for every pool member.

    With Hermitian H and anti-Hermitian G the commutator expectation reduces
    to 2*Re<H state|G state>, so H is applied once for the whole pool.
    """
    if h_state is None:
        h_state = apply_pauli_sum(state, h)
    grads = np.zeros(len(pool))
    for i, x in enumerate(pool):
        g = jordan_wigner_generator(x, state.n_qubits)
        grads[i] = 2.0 * np.real(np.vdot(h_state, apply_pauli_sum(state, g)))
    return grads


def generator_informed_init(
    state_prev: StateVector, g_k: PauliSum, h: PauliSum
) -> float:
    """Quadratic-model seed -<[H,G]>/<[[H,G],G]> on the previous state.

    Returns 0 when the curvature denominator is numerically degenerate.
    """
    h_state = apply_pauli_sum(state_prev, h)
    u = apply_pauli_sum(state_prev, g_k)
    num = 2.0 * np.real(np.vdot(h_state, u))
    gu = apply_pauli_sum(u, g_k)
    den = 2.0 * np.real(np.vdot(h_state, gu)) + 2.0 * np.real(
        np.vdot(u, apply_pauli_sum(u, h))
    )
    if abs(den) < 1e-10:
        return 0.0
    return -num / den


def initialize_parameters(
    strategy: str, prev_opt: Sequence[float], theta_new: float = 0.0
) -> np.ndarray:
    """Initial parameter vector after appending one operator."""
    if strategy == "hf_zero":
        return np.zeros(len(prev_opt) + 1)
    if strategy == "recycled":
        return np.append(np.asarray(prev_opt, dtype=float), 0.0)
    if strategy == "generator_informed":
        return np.append(np.asarray(prev_opt, dtype=float), theta_new)
    raise ValueError(f"unknown init strategy {strategy!r}")


def adapt_vqe(
    h: PauliSum,
    pool: Sequence[FermionExcitation],
    cfg: SelectionConfig,
    n_qubits: int,
    n_electrons: int,
    grad_tol: float = 1e-8,
    max_iter: int = 10000,
) -> Tuple[AnsatzState, SelectionTrace]:
    """ADAPT-VQE macro loop with full expectation-evaluation accounting."""
    if cfg.method != "adapt":
        raise ValueError("adapt_vqe requires cfg.method == 'adapt'")

    ansatz = AnsatzState(n_qubits, n_electrons, [])
    trace = SelectionTrace()
    theta_opt = np.zeros(0)
    total_evals = 0

    # warm the generator cache so pool sweeps are mapping-free
    for x in pool:
        jordan_wigner_generator(x, n_qubits)

    while True:
        cost = CostFunction(h, ansatz)
        state = cost.state(theta_opt)
        grads = pool_gradients(state, pool, h)
        total_evals += len(pool)
        trace.selection_grad_evals += len(pool)
        trace.final_pool_gradients = grads

        candidates = np.abs(grads)
        if not cfg.allow_duplicates:
            present = set(ansatz.excitations)
            for i, x in enumerate(pool):
                if x in present:
                    candidates[i] = -1.0
        best = int(np.argmax(candidates))  # ties: first in canonical pool order

        if np.max(np.abs(grads)) < cfg.epsilon:
            trace.converged = True
            break
        if len(ansatz.factors) >= cfg.max_operators:
            trace.converged = False
            break

        chosen = pool[best]
        g_chosen = jordan_wigner_generator(chosen, n_qubits)
        if cfg.init_strategy == "generator_informed":
            theta_new = generator_informed_init(state, g_chosen, h)
            total_evals += 2  # one single- and one double-commutator expectation
        else:
            theta_new = 0.0
        theta0 = initialize_parameters(cfg.init_strategy, theta_opt, theta_new)

        ansatz = AnsatzState(
            n_qubits,
            n_electrons,
            ansatz.factors + [AnsatzFactor(chosen, 0.0, principal=True)],
        )
        cost = CostFunction(h, ansatz)
        result = minimize(cost, theta0, grad_tol=grad_tol, max_iter=max_iter)
        theta_opt = result.parameters
        ansatz = ansatz.with_parameters(theta_opt)
        total_evals += cost.total_expectation_evaluations

        trace.records.append(
            MacroIterationRecord(
                iteration=len(trace.records) + 1,
                excitation_label=chosen.label,
                gradient=float(grads[best]),
                energy=result.energy,
                expectation_evals_cum=total_evals,
                selection_grad_evals_cum=trace.selection_grad_evals,
                parameters=[float(v) for v in theta_opt],
            )
        )

    trace.total_expectation_evals = total_evals
    return ansatz, trace


def mp2s_ansatz(
    amps: Mp2Amplitudes,
    pool: Sequence[FermionExcitation],
    cfg: SelectionConfig,
    n_qubits: int,
    n_electrons: int,
) -> AnsatzState:
    """Screened-MP2 ansatz: |t|-sorted doubles above epsilon_bar, then singles.

    Doubles are applied to the reference first, ordered by descending |t|;
    spin-conserving singles follow in canonical pool order with zero initial
    parameters (their MP2 amplitudes vanish for canonical orbitals).
    """
    if cfg.method != "mp2s":
        raise ValueError("mp2s_ansatz requires cfg.method == 'mp2s'")

    screened = [
        (x, amps.values[x])
        for x in pool
        if x.rank == 2 and x in amps.values and abs(amps.values[x]) > cfg.epsilon_bar
    ]
    screened.sort(key=lambda item: -abs(item[1]))
    if not screened:
        warnings.warn(
            "MP2 screening kept no doubles; building a singles-only ansatz",
            stacklevel=2,
        )

    factors = [AnsatzFactor(x, float(t), principal=True) for x, t in screened]
    singles = [x for x in pool if x.rank == 1]
    factors += [AnsatzFactor(x, 0.0, principal=True) for x in singles]
    return AnsatzState(n_qubits, n_electrons, factors)
