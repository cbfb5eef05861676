"""Time-domain simulation: Lindblad evolution, staged flux pulses, chevrons.

The master equation dρ/dt = -i[H, ρ] + Σ_k D[L_k]ρ is integrated with a
fixed-step classical Runge-Kutta (RK4) scheme. Because H is piecewise
constant per pulse stage the generator is linear and constant on each
stage, so the RK4 update is a fixed matrix acting on vec(ρ); for small
Hilbert spaces the module builds that one-step propagator once and
applies powers of it, which is bit-for-bit the same map as stepping
sequentially but far cheaper. Larger spaces fall back to direct RK4 with
matrix products.

Vacuum-Rabi chevrons run in the excitation-conserving (rotating-wave)
model, whose dynamics starting from a single excitation stays exactly in
the 5-dimensional zero-plus-one-excitation block; relaxation only moves
population down into that block and dephasing keeps it there, so the
projection is exact, not an approximation.

Units at the interface: linear GHz for frequencies, MHz for detunings
and couplings where noted, ns for times, µs for coherence times.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, IntegrationError, PhysicsError
from .fock import HilbertSpace, OperatorMatrix, lowering_operator, number_operator
from .device import TWO_PI, DeviceParams, OperatingPoint, build_hamiltonian

TRACE_TOL = 1e-8

POSITIVITY_TOL = 1e-8

# above this Hilbert-space size the vectorized one-step propagator
# (size² by size² matrix) stops being worth its memory
PROPAGATOR_SIZE_LIMIT = 36

DEFAULT_SUBSPACE_STEP_NS = 0.005


# ---------------------------------------------------------------------------
# schedule and state types


@dataclass(frozen=True)
class Stage:
    """One piecewise-constant segment of a pulse schedule.

    ``prep`` of "pi_q1" or "pi_q2" applies an instantaneous ideal
    population flip of that qubit's lowest two levels at the start of
    the stage (drive parameters are not modeled).
    """

    duration_ns: float
    point: OperatingPoint
    prep: str | None = None

    def __post_init__(self):
        if not (math.isfinite(self.duration_ns) and self.duration_ns >= 0):
            raise ConfigError(f"stage duration must be >= 0 ns, got {self.duration_ns}")
        if self.prep not in (None, "pi_q1", "pi_q2"):
            raise ConfigError(f"unknown prep tag {self.prep!r}")


@dataclass(frozen=True)
class PulseSchedule:
    """Ordered stages plus an optional fixed prep-to-readout interval.

    When ``prep_to_readout_ns`` is set, the schedule is padded after the
    last stage so the total time from the first stage to readout is
    fixed; padding evolves at ``padding_point`` (default: the last
    stage's operating point) with dissipation, mirroring a fixed-delay
    measurement protocol.
    """

    stages: tuple[Stage, ...]
    prep_to_readout_ns: float | None = None
    padding_point: OperatingPoint | None = None

    def __init__(self, stages, prep_to_readout_ns=None, padding_point=None):
        stages = tuple(stages)
        if not stages:
            raise ConfigError("a schedule needs at least one stage")
        total = sum(s.duration_ns for s in stages)
        if prep_to_readout_ns is not None and prep_to_readout_ns < total - 1e-9:
            raise ConfigError(
                f"prep-to-readout interval {prep_to_readout_ns} ns is shorter than "
                f"the stage total {total} ns"
            )
        object.__setattr__(self, "stages", stages)
        object.__setattr__(self, "prep_to_readout_ns", prep_to_readout_ns)
        object.__setattr__(self, "padding_point", padding_point)

    def resolved_stages(self) -> tuple[Stage, ...]:
        """Stages with the fixed-interval padding stage appended if any."""
        total = sum(s.duration_ns for s in self.stages)
        if self.prep_to_readout_ns is None or self.prep_to_readout_ns <= total + 1e-9:
            return self.stages
        point = self.padding_point or self.stages[-1].point
        pad = Stage(self.prep_to_readout_ns - total, point)
        return self.stages + (pad,)


@dataclass
class DensityState:
    """Density matrix on a HilbertSpace."""

    space: HilbertSpace
    rho: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.rho, dtype=complex)
        if m.shape != (self.space.size, self.space.size):
            raise ConfigError("density matrix shape must match the space")
        self.rho = m

    @classmethod
    def ground(cls, space: HilbertSpace) -> "DensityState":
        rho = np.zeros((space.size, space.size), dtype=complex)
        rho[0, 0] = 1.0
        return cls(space, rho)

    @classmethod
    def single_excitation(cls, space: HilbertSpace, mode_index: int) -> "DensityState":
        idx = space.single_excitation_indices()[mode_index]
        rho = np.zeros((space.size, space.size), dtype=complex)
        rho[idx, idx] = 1.0
        return cls(space, rho)

    def validate(self, trace_tol: float = TRACE_TOL) -> None:
        tr = self.rho.trace()
        if abs(tr - 1.0) > trace_tol:
            raise IntegrationError(f"density-matrix trace drifted to {tr:.12f}")
        herm = np.abs(self.rho - self.rho.conj().T).max()
        if herm > 1e-10:
            raise IntegrationError(f"density matrix not Hermitian (defect {herm:.2e})")
        evals = np.linalg.eigvalsh(self.rho)
        if evals.min() < -POSITIVITY_TOL:
            raise IntegrationError(
                f"density matrix lost positivity (min eigenvalue {evals.min():.2e})"
            )

    def purity(self) -> float:
        return float(np.real(np.trace(self.rho @ self.rho)))


@dataclass
class TraceSeries:
    """Observable expectation values on a uniform time grid."""

    times_ns: np.ndarray
    expectations: dict[str, np.ndarray]
    final_state: DensityState


# ---------------------------------------------------------------------------
# collapse operators


def collapse_operators(
    params: DeviceParams,
    space: HilbertSpace,
    resonator_rate_per_us: float = 0.0,
) -> list[OperatorMatrix]:
    """Standard open-system operators from the device coherence times.

    Per qubit: a relaxation operator √(1/T1)·a and a pure-dephasing
    operator √(2/T_φ)·a†a with 1/T_φ = 1/T2 − 1/(2T1). Rates are per ns.
    Infinite lifetimes contribute nothing; with everything infinite the
    list is empty and evolution is unitary. Resonator loss defaults to
    zero (no measured rate) but can be switched on.
    """
    ops: list[OperatorMatrix] = []
    for qubit, mode in ((1, 2), (2, 3)):
        t1_us = getattr(params, f"t1_qubit{qubit}")
        t2_us = getattr(params, f"t2_qubit{qubit}")
        if t1_us <= 0 or t2_us <= 0:
            raise ConfigError(f"coherence times of qubit {qubit} must be positive")
        if t2_us > 2.0 * t1_us + 1e-12:
            raise ConfigError(f"t2_qubit{qubit} exceeds 2*t1_qubit{qubit}")
        gamma1 = 0.0 if math.isinf(t1_us) else 1.0 / (t1_us * 1e3)
        inv_t2 = 0.0 if math.isinf(t2_us) else 1.0 / (t2_us * 1e3)
        gamma_phi = inv_t2 - 0.5 * gamma1
        if gamma_phi < -1e-15:
            raise ConfigError(f"negative dephasing rate for qubit {qubit}")
        if gamma1 > 0:
            ops.append(math.sqrt(gamma1) * lowering_operator(space, mode))
        if gamma_phi > 1e-15:
            ops.append(math.sqrt(2.0 * gamma_phi) * number_operator(space, mode))
    if resonator_rate_per_us > 0:
        kappa = resonator_rate_per_us / 1e3
        for mode in (0, 1):
            ops.append(math.sqrt(kappa) * lowering_operator(space, mode))
    return ops


# ---------------------------------------------------------------------------
# integrator core


def _superoperator(h: np.ndarray, collapse: list[np.ndarray]) -> np.ndarray:
    """Lindblad generator on row-major vec(ρ): vec(AρB) = (A⊗Bᵀ)vec(ρ)."""
    n = h.shape[0]
    eye = np.eye(n, dtype=complex)
    s = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for l in collapse:
        ldl = l.conj().T @ l
        s += np.kron(l, l.conj())
        s -= 0.5 * (np.kron(ldl, eye) + np.kron(eye, ldl.T))
    return s


def _rk4_step_propagator(s: np.ndarray, h_step: float) -> np.ndarray:
    """Matrix of one RK4 step for the linear system dv/dt = S v.

    For a constant generator the classical RK4 update is exactly the
    degree-4 Taylor polynomial of exp(h S).
    """
    n = s.shape[0]
    hs = h_step * s
    out = np.eye(n, dtype=complex) + hs
    term = hs
    for k in (2.0, 3.0, 4.0):
        term = term @ hs / k
        out += term
    return out


def _matrix_power_apply(base: np.ndarray, exponent: int, vec: np.ndarray) -> np.ndarray:
    """base^exponent @ vec by binary powering."""
    result = vec
    factor = base
    e = exponent
    while e > 0:
        if e & 1:
            result = factor @ result
        e >>= 1
        if e:
            factor = factor @ factor
    return result


def _rk4_direct(
    rho: np.ndarray,
    a_eff: np.ndarray,
    collapse: list[np.ndarray],
    duration: float,
    h_step: float,
) -> np.ndarray:
    """Fixed-step RK4 on the matrix form of the master equation.

    a_eff = -iH - ½ Σ L†L, so the right-hand side is
    a_eff ρ + ρ a_eff† + Σ L ρ L†.
    """
    if duration <= 0:
        return rho
    nsteps = max(1, math.ceil(duration / h_step))
    h = duration / nsteps
    a_dag = a_eff.conj().T
    l_dags = [l.conj().T for l in collapse]

    def rhs(r: np.ndarray) -> np.ndarray:
        out = a_eff @ r + r @ a_dag
        for l, ld in zip(collapse, l_dags):
            out += l @ r @ ld
        return out

    for _ in range(nsteps):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * h * k1)
        k3 = rhs(rho + 0.5 * h * k2)
        k4 = rhs(rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return rho


class _StagePropagator:
    """Advances a density matrix under one constant-generator stage."""

    def __init__(self, h: np.ndarray, collapse: list[np.ndarray], h_step: float):
        self.size = h.shape[0]
        self.h_step = h_step
        self.collapse = collapse
        if self.size <= PROPAGATOR_SIZE_LIMIT:
            self.super = _superoperator(h, collapse)
            self._cache: dict[tuple[float, int], np.ndarray] = {}
            self.a_eff = None
        else:
            self.super = None
            a = -1j * h
            for l in collapse:
                a -= 0.5 * (l.conj().T @ l)
            self.a_eff = a

    def advance(self, rho: np.ndarray, duration: float) -> np.ndarray:
        if duration <= 0:
            return rho
        nsteps = max(1, math.ceil(duration / self.h_step - 1e-9))
        h = duration / nsteps
        if self.super is not None:
            key = (round(h, 15), 0)
            if key not in self._cache:
                self._cache[key] = _rk4_step_propagator(self.super, h)
            step = self._cache[key]
            vec = _matrix_power_apply(step, nsteps, rho.reshape(-1))
            return vec.reshape(self.size, self.size)
        return _rk4_direct(rho, self.a_eff, self.collapse, duration, h)


def _pi_flip_matrix(space: HilbertSpace, mode_index: int) -> np.ndarray:
    """Unitary swapping levels 0 and 1 of one mode (identity elsewhere)."""
    d = space.dims[mode_index]
    local = np.eye(d, dtype=complex)
    local[0, 0] = local[1, 1] = 0.0
    local[0, 1] = local[1, 0] = 1.0
    from .fock import embed_operator

    return embed_operator(space, mode_index, local).elements


def default_step_ns(max_freq_ghz: float) -> float:
    """Step rule: min(0.01 ns, 1/(200 · f_max))."""
    f = max(abs(max_freq_ghz), 1e-9)
    return min(0.01, 1.0 / (200.0 * f))


def evolve(
    params: DeviceParams,
    schedule: PulseSchedule,
    initial: DensityState,
    space: HilbertSpace,
    observables: dict[str, OperatorMatrix],
    n_samples: int = 201,
    step_ns: float | None = None,
    include_counter_rotating: bool = True,
    frame_ghz: float = 0.0,
    dissipation: bool = True,
    collapse: list[OperatorMatrix] | None = None,
) -> TraceSeries:
    """Integrate the master equation through a staged schedule.

    Observable expectations are sampled on a uniform grid of
    ``n_samples`` points over the total schedule duration (padding
    included). ``frame_ghz`` subtracts that frequency times the total
    excitation number from every stage Hamiltonian; this is an exact
    frame change for the excitation-conserving model (counter-rotating
    off) and reduces integrator stiffness dramatically, but is invalid
    with counter-rotating terms on.

    Trace drift beyond 1e-8 at any sample aborts with diagnostics.
    """
    if initial.space.size != space.size:
        raise ConfigError("initial state lives on a different space")
    if frame_ghz != 0.0 and include_counter_rotating:
        raise ConfigError(
            "a rotating frame is only exact for the excitation-conserving model; "
            "disable counter-rotating terms or use frame_ghz=0"
        )
    initial.validate()
    stages = schedule.resolved_stages()
    total = sum(s.duration_ns for s in stages)
    if n_samples < 2:
        raise ConfigError("need at least 2 sample points")

    if collapse is None:
        collapse = collapse_operators(params, space) if dissipation else []
    l_mats = [c.elements for c in collapse]

    frame_shift = None
    if frame_ghz != 0.0:
        from .fock import total_number_operator

        frame_shift = TWO_PI * frame_ghz * total_number_operator(space).elements

    if step_ns is None:
        f_candidates = [
            abs(params.resonator_freq_a - frame_ghz),
            abs(params.resonator_freq_b - frame_ghz),
        ]
        for st in stages:
            f_candidates.append(abs(st.point.qubit_freq_1 - frame_ghz))
            f_candidates.append(abs(st.point.qubit_freq_2 - frame_ghz))
        step_ns = default_step_ns(max(f_candidates))

    propagators = []
    for st in stages:
        h = build_hamiltonian(
            params, st.point, space, include_counter_rotating=include_counter_rotating
        ).elements
        if frame_shift is not None:
            h = h - frame_shift
        propagators.append(_StagePropagator(h, l_mats, step_ns))

    sample_times = np.linspace(0.0, total, n_samples)
    obs_names = list(observables)
    obs_mats = [observables[k].elements for k in obs_names]
    records = {k: np.empty(n_samples) for k in obs_names}

    rho = initial.rho.copy()
    t_now = 0.0
    stage_idx = 0
    stage_end = stages[0].duration_ns
    if stages[0].prep:
        u = _pi_flip_matrix(space, 2 if stages[0].prep == "pi_q1" else 3)
        rho = u @ rho @ u.conj().T

    for i, ts in enumerate(sample_times):
        # cross stage boundaries up to the sample time
        while ts > stage_end + 1e-9 and stage_idx + 1 < len(stages):
            rho = propagators[stage_idx].advance(rho, stage_end - t_now)
            t_now = stage_end
            stage_idx += 1
            stage_end += stages[stage_idx].duration_ns
            if stages[stage_idx].prep:
                u = _pi_flip_matrix(space, 2 if stages[stage_idx].prep == "pi_q1" else 3)
                rho = u @ rho @ u.conj().T
        rho = propagators[stage_idx].advance(rho, ts - t_now)
        t_now = ts
        tr = rho.trace().real
        if abs(tr - 1.0) > TRACE_TOL:
            raise IntegrationError(
                f"trace drifted to {tr:.12f} at t = {ts:.3f} ns "
                f"(step {step_ns} ns, stage {stage_idx})"
            )
        for name, mat in zip(obs_names, obs_mats):
            records[name][i] = np.real(np.trace(mat @ rho))

    return TraceSeries(sample_times, records, DensityState(space, rho))


# ---------------------------------------------------------------------------
# closed-form two-level reference


def two_level_transfer(g_eff_mhz: float, delta12_mhz: float, t_ns) -> np.ndarray | float:
    """Excitation-transfer probability of the resonant exchange model.

    P(t) = [4g² / (Δ² + 4g²)] · sin²(π √(4g² + Δ²) t) with g and Δ in
    linear frequency and t in matching time units. Peak value
    4g²/(Δ²+4g²); on resonance the first full transfer is at
    t = 1/(4g).
    """
    g = g_eff_mhz * 1e-3  # GHz, pairs with t in ns
    d = delta12_mhz * 1e-3
    denom = d * d + 4.0 * g * g
    if denom == 0.0:
        return np.zeros_like(np.asarray(t_ns, dtype=float)) if np.ndim(t_ns) else 0.0
    amp = 4.0 * g * g / denom
    f = math.sqrt(denom)
    t = np.asarray(t_ns, dtype=float)
    p = amp * np.sin(math.pi * f * t) ** 2
    return p if np.ndim(t_ns) else float(p)


# ---------------------------------------------------------------------------
# chevron


@dataclass
class ChevronMap:
    """Qubit-1 population versus interaction time and qubit detuning."""

    detunings_mhz: np.ndarray
    taus_ns: np.ndarray
    p1: np.ndarray  # shape (len(detunings), len(taus))
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.p1.shape != (len(self.detunings_mhz), len(self.taus_ns)):
            raise ConfigError("chevron population matrix has the wrong shape")
        if self.p1.min() < -1e-6 or self.p1.max() > 1.0 + 1e-6:
            raise IntegrationError(
                f"population outside [0, 1]: range [{self.p1.min():.2e}, {self.p1.max():.2e}]"
            )

    def to_csv(self, contrast_scale: float | None = None, contrast_baseline: float = 0.0) -> str:
        buf = io.StringIO()
        header = "detuning_mhz,tau_ns,p1"
        if contrast_scale is not None:
            header += ",contrast"
        buf.write(header + "\n")
        for i, d in enumerate(self.detunings_mhz):
            for j, t in enumerate(self.taus_ns):
                row = f"{d:.9g},{t:.9g},{self.p1[i, j]:.9f}"
                if contrast_scale is not None:
                    row += f",{contrast_scale * self.p1[i, j] + contrast_baseline:.9f}"
                buf.write(row + "\n")
        return buf.getvalue()

    def column(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        return self.taus_ns, self.p1[i]


def _single_excitation_block(
    params: DeviceParams,
    point: OperatingPoint,
    space: HilbertSpace,
    collapse: list[np.ndarray],
    frame_ghz: float,
) -> tuple[np.ndarray, list[np.ndarray], tuple[int, ...]]:
    """Project H (rotating-wave) and collapse operators onto N ≤ 1.

    The excitation-conserving Hamiltonian never couples the block
    {|vac>, one quantum in any single mode} to anything outside it, and
    the relaxation and dephasing operators map the block into itself,
    so dynamics started inside is exact.
    """
    idx = (0,) + space.single_excitation_indices()
    sel = np.ix_(idx, idx)
    h = build_hamiltonian(params, point, space, include_counter_rotating=False).elements
    if frame_ghz:
        from .fock import total_number_operator

        h = h - TWO_PI * frame_ghz * total_number_operator(space).elements
    return h[sel], [l[sel] for l in collapse], idx


def vacuum_rabi_chevron(
    params: DeviceParams,
    bias: OperatingPoint,
    q2_target: float,
    q1_offsets_mhz,
    taus_ns,
    space: HilbertSpace | None = None,
    prep_to_readout_ns: float | None = None,
    step_ns: float = DEFAULT_SUBSPACE_STEP_NS,
    dissipation: bool = True,
) -> ChevronMap:
    """Vacuum-Rabi population map under the staged flux protocol.

    For each qubit-1 offset: qubit 2 starts excited at the bias point
    (ideal instantaneous π preparation), both qubits are stepped to the
    interaction point (qubit 2 at ``q2_target``, qubit 1 offset by the
    column's detuning), held for τ, and the qubit-1 excited population
    is recorded. With ``prep_to_readout_ns`` set, the state is further
    evolved at the bias point until that fixed total delay before
    readout. Runs in the excitation-conserving model on the exact
    single-excitation block.

    τ values must form a uniform ascending grid starting at 0.
    """
    if space is None:
        space = HilbertSpace((3, 3, 3, 3))
    margin = 3.0 * params.max_qubit_resonator_coupling
    for f_res, tag in ((params.resonator_freq_a, "a"), (params.resonator_freq_b, "b")):
        if abs(q2_target - f_res) < margin:
            raise PhysicsError(
                f"interaction point {q2_target} GHz is within {margin * 1e3:.1f} MHz of "
                f"resonator {tag}; the exchange picture breaks down there"
            )
    taus = np.asarray(taus_ns, dtype=float)
    if taus.ndim != 1 or taus.size < 2:
        raise ConfigError("chevron needs at least 2 interaction times")
    dt = np.diff(taus)
    if abs(taus[0]) > 1e-12 or dt.min() <= 0 or (dt.max() - dt.min()) > 1e-9:
        raise ConfigError("interaction times must be a uniform ascending grid from 0")
    dtau = float(dt[0])
    offsets = np.asarray(q1_offsets_mhz, dtype=float)
    if offsets.ndim != 1 or offsets.size < 1:
        raise ConfigError("need at least one detuning offset")
    if prep_to_readout_ns is not None and prep_to_readout_ns < taus[-1] - 1e-9:
        raise ConfigError(
            f"prep-to-readout interval {prep_to_readout_ns} ns shorter than the "
            f"longest interaction time {taus[-1]} ns"
        )

    collapse = (
        [c.elements for c in collapse_operators(params, space)] if dissipation else []
    )
    frame = q2_target  # exact frame change in the excitation-conserving model
    n_tau = taus.size

    # padding propagators at the bias point, if a fixed delay is requested
    pad_powers = None
    if prep_to_readout_ns is not None:
        h_bias, l_bias, _ = _single_excitation_block(params, bias, space, collapse, frame)
        s_bias = _superoperator(h_bias, l_bias)
        nsub = max(1, math.ceil(dtau / step_ns - 1e-9))
        step_dtau = _matrix_power_apply(
            _rk4_step_propagator(s_bias, dtau / nsub), nsub, np.eye(s_bias.shape[0], dtype=complex)
        )
        base_dur = prep_to_readout_ns - taus[-1]
        if base_dur > 1e-9:
            nb = max(1, math.ceil(base_dur / step_ns - 1e-9))
            pad_base = _matrix_power_apply(
                _rk4_step_propagator(s_bias, base_dur / nb),
                nb,
                np.eye(s_bias.shape[0], dtype=complex),
            )
        else:
            pad_base = np.eye(s_bias.shape[0], dtype=complex)
        pad_powers = [pad_base]
        for _ in range(n_tau - 1):
            pad_powers.append(pad_powers[-1] @ step_dtau)

    block_dim = space.n_modes + 1
    q1_slot = 3  # position of the qubit-1 single-excitation state in the block
    q2_slot = 4
    p1 = np.empty((offsets.size, n_tau))

    for i, off in enumerate(offsets):
        point = OperatingPoint(q2_target + off * 1e-3, q2_target)
        h_blk, l_blk, _ = _single_excitation_block(params, point, space, collapse, frame)
        s = _superoperator(h_blk, l_blk)
        nsub = max(1, math.ceil(dtau / step_ns - 1e-9))
        step = _matrix_power_apply(
            _rk4_step_propagator(s, dtau / nsub), nsub, np.eye(s.shape[0], dtype=complex)
        )
        rho = np.zeros((block_dim, block_dim), dtype=complex)
        rho[q2_slot, q2_slot] = 1.0
        vec = rho.reshape(-1)
        for j in range(n_tau):
            if j > 0:
                vec = step @ vec
            out = vec
            if pad_powers is not None:
                out = pad_powers[n_tau - 1 - j] @ vec
            rho_out = out.reshape(block_dim, block_dim)
            tr = rho_out.trace().real
            if abs(tr - 1.0) > TRACE_TOL:
                raise IntegrationError(f"trace drifted to {tr:.12f} in chevron column {i}")
            p1[i, j] = rho_out[q1_slot, q1_slot].real

    p1 = np.clip(p1, 0.0, 1.0)
    meta = {
        "bias_q1_ghz": bias.qubit_freq_1,
        "bias_q2_ghz": bias.qubit_freq_2,
        "q2_target_ghz": q2_target,
        "step_ns": step_ns,
        "prep_to_readout_ns": prep_to_readout_ns,
        "dissipation": dissipation,
        "dims": list(space.dims),
    }
    return ChevronMap(offsets, taus, p1, meta)


def contrast_map(p1_series, scale: float, baseline: float):
    """Affine readout-contrast model: scale · p1 + baseline."""
    if not (math.isfinite(scale) and math.isfinite(baseline)):
        raise ConfigError("contrast scale and baseline must be finite")
    return scale * np.asarray(p1_series, dtype=float) + baseline
