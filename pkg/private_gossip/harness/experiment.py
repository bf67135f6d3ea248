"""
Monte Carlo experiment workflow.

An experiment is a compiled LangGraph StateGraph:

    prepare_topology -> (retry with the next seed while the RGG is disconnected)
                     -> configure_noise -> simulate_seeds -> aggregate_trace

simulate_seeds runs R independent seeds (base_seed .. base_seed + R - 1). Each
seed runs the private protocol and, on the same edge sequence, standard
gossip. Seeds may run in a process pool; results are reduced in seed order so
the output does not depend on scheduling.
"""

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Literal, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from langchain_core.runnables import RunnableConfig
from langgraph.graph import END, START, StateGraph

from private_gossip.harness.config import build_config
from private_gossip.harness.schemas import RELATIVE_ERROR_FLOOR, ExperimentConfig, Trace
from private_gossip.harness.state import ExperimentState, SeedResult
from private_gossip.simulation.baseline import baseline_run
from private_gossip.simulation.engine import init, run
from private_gossip.simulation.randomness import RandomStream
from private_gossip.simulation.state import NoiseParams, StepRecord
from private_gossip.theory.bounds import theorem_bound
from private_gossip.theory.duality import initial_dual_gap
from private_gossip.theory.rates import rate_report
from private_gossip.topology.edgelist import read_edge_list
from private_gossip.topology.graph import GENERATORS, Graph, build_random_geometric
from private_gossip.utils.errors import ConfigError, ConnectivityError, SetupError

logger = logging.getLogger(__name__)

MAX_GRAPH_ATTEMPTS = 100
THREADS_ENV = "GOSSIP_THREADS"


class SeedTask(NamedTuple):
    graph: Graph
    params: NoiseParams
    values: List[float]
    iterations: int
    stride: int
    seed: int


def simulate_seed(task: SeedTask) -> SeedResult:
    """Private run and paired baseline for one seed."""
    t: List[int] = []
    relative: List[float] = []
    drift_sq: List[float] = []
    baseline: List[float] = []

    def probe(rec: StepRecord) -> None:
        t.append(rec.t)
        relative.append(rec.relative_error)
        drift_sq.append(rec.mean_drift ** 2)

    state = init(task.graph, task.values, task.params)
    run(state, task.iterations, RandomStream(task.seed), probe, task.stride)
    baseline_run(
        task.graph,
        task.values,
        task.iterations,
        RandomStream(task.seed),
        lambda rec: baseline.append(rec.relative_error),
        task.stride,
    )
    logger.debug("[HARNESS] seed %d done: final relative error %.3e", task.seed, relative[-1])
    return SeedResult(
        seed=task.seed,
        t=t,
        relative_error=relative,
        drift_sq=drift_sq,
        baseline=baseline,
        gap0=initial_dual_gap(task.values),
    )


def worker_count(config: Optional[RunnableConfig] = None) -> int:
    """Worker processes: configurable 'workers', else GOSSIP_THREADS; 0 or unset means all cores."""
    configured = ((config or {}).get("configurable") or {}).get("workers")
    if configured is None:
        raw = os.getenv(THREADS_ENV, "").strip()
        try:
            configured = int(raw) if raw else 0
        except ValueError as exc:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if configured < 0:
        raise ConfigError(f"worker count must be nonnegative, got {configured}")
    return configured if configured > 0 else (os.cpu_count() or 1)


def _build_fixed_topology(cfg: ExperimentConfig) -> Graph:
    if cfg.graph == "file":
        return read_edge_list(cfg.edges_path)
    return GENERATORS[cfg.graph](cfg.n)


# Workflow nodes

def prepare_topology(state: ExperimentState, config: RunnableConfig) -> Dict[str, Any]:
    """Build the graph; a disconnected RGG moves on to the next graph seed."""
    cfg = state["experiment"]
    seed = state.get("graph_seed", cfg.graph_seed)
    attempts = state.get("attempts", 0)

    if cfg.graph != "rgg":
        return {"graph": _build_fixed_topology(cfg), "graph_seed": seed, "attempts": attempts + 1}

    if attempts >= MAX_GRAPH_ATTEMPTS:
        raise SetupError(
            f"no connected random geometric graph (n={cfg.n}, r={cfg.resolved_radius():.6g}) "
            f"after {MAX_GRAPH_ATTEMPTS} seeds starting at {cfg.graph_seed}: {state.get('last_error')}"
        )
    try:
        g = build_random_geometric(cfg.n, cfg.resolved_radius(), seed)
    except ConnectivityError as exc:
        logger.info("[HARNESS] graph seed %d rejected (%d components), retrying", seed, exc.component_count)
        return {"graph": None, "graph_seed": seed + 1, "attempts": attempts + 1, "last_error": str(exc)}

    logger.info("[HARNESS] graph seed %d accepted: %s", seed, g.describe())
    return {"graph": g, "graph_seed": seed, "attempts": attempts + 1, "last_error": None}


def route_topology(state: ExperimentState) -> Literal["retry", "ready"]:
    return "ready" if state.get("graph") is not None else "retry"


def configure_noise(state: ExperimentState, config: RunnableConfig) -> Dict[str, Any]:
    """Resolve the noise schedule on the built graph and compute its rates."""
    g = state["graph"]
    params = state["experiment"].noise_params(g)
    report = rate_report(g, params)
    logger.info(
        "[HARNESS] rho=%.6f dominant noise rate=%.6f (%s)", report.rho, report.dominant_rate, report.regime
    )
    return {"params": params, "report": report}


def simulate_seeds(state: ExperimentState, config: RunnableConfig) -> Dict[str, Any]:
    """Run every seed, in parallel when more than one worker is allowed."""
    cfg = state["experiment"]
    g = state["graph"]
    tasks = [
        SeedTask(
            graph=g,
            params=state["params"],
            values=cfg.initial_values(g.n, seed),
            iterations=cfg.iterations,
            stride=cfg.stride,
            seed=seed,
        )
        for seed in range(cfg.base_seed, cfg.base_seed + cfg.seeds)
    ]

    workers = min(worker_count(config), len(tasks))
    logger.info("[HARNESS] %d seeds x %d iterations on %d worker(s)", len(tasks), cfg.iterations, workers)
    if workers <= 1:
        results = [simulate_seed(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(simulate_seed, tasks))
    return {"seed_results": results}


def _floored(values: np.ndarray) -> List[float]:
    return np.where(values < RELATIVE_ERROR_FLOOR, 0.0, values).tolist()


def aggregate_trace(state: ExperimentState, config: RunnableConfig) -> Dict[str, Any]:
    """Seed-ordered reduction of the per-seed curves plus the bound overlay."""
    cfg = state["experiment"]
    g = state["graph"]
    report = state["report"]
    results = sorted(state["seed_results"], key=lambda r: r["seed"])

    t = results[0]["t"]
    relative = np.array([r["relative_error"] for r in results])
    drift_sq = np.array([r["drift_sq"] for r in results])
    baseline = np.array([r["baseline"] for r in results])

    # The bound is linear in the initial gap, so its relative form averages over seeds
    # as rho^t + noise_t * mean(1 / gap0).
    noise_part = theorem_bound(cfg.iterations, g, state["params"], 0.0).values
    inverse_gap = float(np.mean([1.0 / r["gap0"] for r in results]))
    bound = [1.0 if j == 0 else report.rho ** j + noise_part[j - 1] * inverse_gap for j in t]

    trace = Trace(
        t=list(t),
        relative_error=_floored(relative.mean(axis=0)),
        spread_min=_floored(relative.min(axis=0)),
        spread_max=_floored(relative.max(axis=0)),
        drift_sq=drift_sq.mean(axis=0).tolist(),
        bound=bound,
        baseline=_floored(baseline.mean(axis=0)),
        label=cfg.label(),
        meta={
            "config": cfg.model_dump(mode="json"),
            "graph_seed": state["graph_seed"],
            "n": g.n,
            "m": g.m,
            "alpha": report.alpha,
            "rho": report.rho,
            "dominant_rate": report.dominant_rate,
            "regime": report.regime,
            "seeds": [r["seed"] for r in results],
        },
    )
    return {"trace": trace}


def build_topology_graph():
    """Workflow that only resolves the topology (used by sweeps and the theory CLI)."""
    builder = StateGraph(ExperimentState)
    builder.add_node("prepare_topology", prepare_topology)
    builder.add_edge(START, "prepare_topology")
    builder.add_conditional_edges("prepare_topology", route_topology, {"retry": "prepare_topology", "ready": END})
    return builder.compile()


def build_experiment_graph():
    """Full experiment workflow."""
    builder = StateGraph(ExperimentState)

    builder.add_node("prepare_topology", prepare_topology)
    builder.add_node("configure_noise", configure_noise)
    builder.add_node("simulate_seeds", simulate_seeds)
    builder.add_node("aggregate_trace", aggregate_trace)

    builder.add_edge(START, "prepare_topology")
    builder.add_conditional_edges(
        "prepare_topology", route_topology, {"retry": "prepare_topology", "ready": "configure_noise"}
    )
    builder.add_edge("configure_noise", "simulate_seeds")
    builder.add_edge("simulate_seeds", "aggregate_trace")
    builder.add_edge("aggregate_trace", END)

    return builder.compile()


def _runnable_config(config: Optional[RunnableConfig]) -> RunnableConfig:
    merged: Dict[str, Any] = dict(config or {})
    merged.setdefault("recursion_limit", MAX_GRAPH_ATTEMPTS + 10)
    merged["configurable"] = dict(merged.get("configurable") or {})
    return merged


def resolve_topology(cfg: ExperimentConfig, config: Optional[RunnableConfig] = None) -> Tuple[Graph, int]:
    """The experiment's graph and the graph seed that produced it."""
    final = topology_graph.invoke({"experiment": cfg}, config=_runnable_config(config))
    return final["graph"], final["graph_seed"]


def run_experiment(cfg: ExperimentConfig, config: Optional[RunnableConfig] = None) -> Trace:
    """Run R seeds of one configuration and return the aggregated Trace."""
    final = experiment_graph.invoke({"experiment": cfg}, config=_runnable_config(config))
    return final["trace"]


def sweep(
    cfg: ExperimentConfig,
    phis: Sequence[Union[float, str]],
    config: Optional[RunnableConfig] = None,
) -> List[Trace]:
    """One Trace per decay rate, all on the same graph and seeds."""
    if not phis:
        raise ConfigError("sweep needs at least one phi value")
    points = [build_config({**cfg.model_dump(), "phi": phi}) for phi in phis]
    _, graph_seed = resolve_topology(cfg, config)
    return [run_experiment(point.model_copy(update={"graph_seed": graph_seed}), config) for point in points]


# Exported for langgraph.json
experiment_graph = build_experiment_graph()
topology_graph = build_topology_graph()
