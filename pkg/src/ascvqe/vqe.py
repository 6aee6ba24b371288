"""Cost function, exact gradients and the micro-iteration minimizer.

Expectation-evaluation accounting: every energy evaluation counts 1, each
parameter-shift component counts 2 (two shifted energies), and an analytic
gradient of an N-parameter ansatz counts N (one commutator expectation per
component).  Counters only ever increase.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import minimize as scipy_minimize

from .hamio import jordan_wigner_generator
from .pauli import PauliSum
from .simulator import (
    AnsatzState,
    NonHermitianObservableError,
    StateVector,
    apply_excitation_exponential,
    apply_pauli_sum,
    expectation,
    hf_reference,
    prepare_state,
)


class OptimizerDivergenceError(RuntimeError):
    """Non-finite energy encountered during optimization."""

    def __init__(self, message: str, trace: Optional[list] = None):
        super().__init__(message)
        self.trace = trace or []


@dataclass
class IterationRecord:
    iteration: int
    energy: float
    grad_inf_norm: float
    fevals_cum: int
    parameters: List[float]

    def to_json(self) -> str:
        return json.dumps(
            {
                "iter": self.iteration,
                "energy_hartree": self.energy,
                "grad_inf_norm": self.grad_inf_norm,
                "fevals_cum": self.fevals_cum,
                "parameters": self.parameters,
            }
        )


@dataclass
class OptimizationResult:
    parameters: np.ndarray
    energy: float
    iterations: int
    total_expectation_evaluations: int
    converged: bool
    trace: List[IterationRecord] = field(default_factory=list)

    def trace_jsonl(self) -> str:
        return "\n".join(r.to_json() for r in self.trace)


class CostFunction:
    """VQE energy <Phi0| U(theta)^† H U(theta) |Phi0> with evaluation counters."""

    def __init__(self, hamiltonian: PauliSum, template: AnsatzState):
        if hamiltonian.n_qubits != template.n_qubits:
            raise ValueError("Hamiltonian and ansatz qubit counts differ")
        self.hamiltonian = hamiltonian
        self.template = template
        self.function_evals = 0
        self.gradient_evals = 0
        self._generators = [
            jordan_wigner_generator(x, template.n_qubits)
            for x in template.excitations
        ]

    @property
    def n_parameters(self) -> int:
        return len(self.template.factors)

    @property
    def total_expectation_evaluations(self) -> int:
        return self.function_evals + self.gradient_evals

    def _check_theta(self, theta: Sequence[float]) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.n_parameters,):
            raise ValueError(
                f"parameter vector length {theta.shape} != {self.n_parameters}"
            )
        return theta

    def state(self, theta: Sequence[float]) -> StateVector:
        """Prepared ansatz state; does not touch the counters."""
        theta = self._check_theta(theta)
        return prepare_state(self.template.with_parameters(theta))

    def energy(self, theta: Sequence[float]) -> float:
        theta = self._check_theta(theta)
        value = expectation(self.state(theta), self.hamiltonian)
        self.function_evals += 1
        return value

    def parameter_shift_gradient(self, theta: Sequence[float], i: int) -> float:
        """Two-point pi/2 shift rule for component i; costs 2 energy evaluations."""
        theta = self._check_theta(theta)
        if not 0 <= i < self.n_parameters:
            raise IndexError(f"parameter index {i} out of range")
        shift = np.zeros_like(theta)
        shift[i] = np.pi / 2.0
        return 0.5 * (self.energy(theta + shift) - self.energy(theta - shift))

    def analytic_gradient(self, theta: Sequence[float]) -> np.ndarray:
        """Exact gradient via commutator insertion, one reverse sweep.

        Component k equals <psi| H ... U_{k+1} G_k U_k ... |Phi0> + c.c., the
        commutator form of the derivative of the k-th factor.
        """
        theta = self._check_theta(theta)
        psi = self.state(theta)
        h_psi = apply_pauli_sum(psi, self.hamiltonian)
        return self._reverse_sweep(theta, psi, h_psi)

    def energy_and_gradient(self, theta: Sequence[float]):
        """Energy and analytic gradient sharing one state preparation."""
        theta = self._check_theta(theta)
        psi = self.state(theta)
        h_psi = apply_pauli_sum(psi, self.hamiltonian)
        value = complex(np.vdot(psi.amplitudes, h_psi))
        if abs(value.imag) > 1e-8:
            raise NonHermitianObservableError(
                f"imaginary expectation residue {value.imag:.3e}"
            )
        self.function_evals += 1
        return value.real, self._reverse_sweep(theta, psi, h_psi)

    def _reverse_sweep(
        self, theta: np.ndarray, psi: StateVector, h_psi: np.ndarray
    ) -> np.ndarray:
        n = self.n_parameters
        grad = np.zeros(n)
        if n == 0:
            return grad
        bra = StateVector(psi.n_qubits, h_psi)
        ket = psi
        for k in range(n - 1, -1, -1):
            g = self._generators[k]
            grad[k] = 2.0 * np.real(
                np.vdot(bra.amplitudes, apply_pauli_sum(ket, g))
            )
            if k > 0:
                ket = apply_excitation_exponential(ket, g, -theta[k], check=False)
                bra = apply_excitation_exponential(bra, g, -theta[k], check=False)
        self.gradient_evals += n
        return grad


def minimize(
    c: CostFunction,
    theta0: Sequence[float],
    grad_tol: float = 1e-8,
    max_iter: int = 10000,
) -> OptimizationResult:
    """Quasi-Newton (L-BFGS-B) descent fed by the analytic gradient.

    Converged when the gradient infinity norm falls below grad_tol; returns
    the best-seen point.  Deterministic for fixed inputs.
    """
    theta0 = np.asarray(theta0, dtype=float)
    if not np.all(np.isfinite(theta0)):
        raise ValueError("non-finite initial parameters")
    if theta0.shape != (c.n_parameters,):
        raise ValueError("initial parameter length mismatch")

    trace: List[IterationRecord] = []
    last = {"x": None, "f": None, "g": None}
    best = {"x": theta0.copy(), "f": np.inf}

    if c.n_parameters == 0:
        e = c.energy(theta0)
        return OptimizationResult(
            parameters=theta0,
            energy=e,
            iterations=0,
            total_expectation_evaluations=c.total_expectation_evaluations,
            converged=True,
            trace=[IterationRecord(0, e, 0.0, c.total_expectation_evaluations, [])],
        )

    def fun(x: np.ndarray) -> float:
        f, g = c.energy_and_gradient(x)
        if not np.isfinite(f):
            raise OptimizerDivergenceError(
                f"non-finite energy {f} at parameters {x.tolist()}", trace
            )
        last["x"], last["f"], last["g"] = x.copy(), f, g
        if f < best["f"]:
            best["x"], best["f"] = x.copy(), f
        return f

    def jac(x: np.ndarray) -> np.ndarray:
        if last["x"] is not None and np.array_equal(x, last["x"]):
            return last["g"]
        fun(x)
        return last["g"]

    def callback(xk: np.ndarray) -> None:
        if last["x"] is not None and np.array_equal(xk, last["x"]):
            f, g = last["f"], last["g"]
        else:
            f = c.energy(xk)
            g = c.analytic_gradient(xk)
        trace.append(
            IterationRecord(
                iteration=len(trace) + 1,
                energy=float(f),
                grad_inf_norm=float(np.max(np.abs(g))),
                fevals_cum=c.total_expectation_evaluations,
                parameters=[float(v) for v in xk],
            )
        )

    result = scipy_minimize(
        fun,
        theta0,
        jac=jac,
        method="L-BFGS-B",
        callback=callback,
        # a deep correction history copes much better with the nearly
        # degenerate landscapes of large ansatze than the default of 10
        options={
            "maxiter": max_iter,
            "gtol": grad_tol,
            "ftol": 1e-14,
            "maxcor": 30,
        },
    )

    x_final = result.x if result.fun <= best["f"] else best["x"]
    grad_final = c.analytic_gradient(x_final)
    e_final = c.energy(x_final)
    converged = bool(np.max(np.abs(grad_final), initial=0.0) < grad_tol)
    trace.append(
        IterationRecord(
            iteration=len(trace) + 1,
            energy=float(e_final),
            grad_inf_norm=float(np.max(np.abs(grad_final), initial=0.0)),
            fevals_cum=c.total_expectation_evaluations,
            parameters=[float(v) for v in x_final],
        )
    )
    return OptimizationResult(
        parameters=np.asarray(x_final, dtype=float),
        energy=float(e_final),
        iterations=int(result.nit),
        total_expectation_evaluations=c.total_expectation_evaluations,
        converged=converged,
        trace=trace,
    )
