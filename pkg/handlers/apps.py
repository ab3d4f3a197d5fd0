"""
Подкоманда app: управление, кратчайшие пути, надёжность сетей и схемы
с диодами. При --mc-paths > 0 решение дополнительно сверяется с
моделированием (кроме схем, у которых нет вероятностного представления).
"""
import logging

import numpy as np

from apps.circuit import diode_currents, solve_circuit
from apps.control import solve_control
from apps.montecarlo import Representation, mc_validate, representation_from_policy
from apps.paths import shortest_path_times, time_identity_gap
from apps.reliability import reliability
from config import Config
from solver.problem import constant_terminal, indicator_terminal
from storage.manifest import RunManifest
from storage.readers import ControlReader, GraphReader, NetlistReader, ReliabilityReader, load_json
from storage.writers import ResultWriter

logger = logging.getLogger(__name__)


def _control(args):
    kwargs = ControlReader.from_dict(load_json(args.app_file))
    solution = solve_control(**kwargs, tol=args.tol)
    chain, target = kwargs["chain"], kwargs["target"]
    rows = [(x, float(v), solution.label(x) or "") for x, v in enumerate(solution.value.u)]
    metadata = {"app": "control", "target": sorted(target), "verification_gap": solution.verification_gap,
                "gamma": solution.gamma}

    def representation():
        return representation_from_policy(kwargs["cs"], target, kwargs["terminal"], solution.policy,
                                          discount=kwargs["discount"])

    return ["state", "u", "policy"], rows, metadata, representation, solution.value.u, chain.n


def _paths(args):
    graph = GraphReader.read(args.app_file)
    full, remaining = shortest_path_times(graph, horizon=args.horizon)
    labels = remaining.metadata["policy"]
    rows = [(graph.nodes[x], float(v), labels.get(graph.nodes[x], "")) for x, v in enumerate(remaining.u)]
    metadata = {"app": "paths", "target": graph.nodes[graph.target], "horizon": args.horizon,
                "time_identity_gap": time_identity_gap(full, remaining)}

    def representation():
        cs = graph.control_set()
        policy = {graph.nodes.index(node): cs.labels.index(label) for node, label in labels.items()}
        return representation_from_policy(cs, [graph.target], constant_terminal(np.zeros(graph.n)), policy,
                                          offset=np.ones(graph.n))

    return ["node", "expected_time", "policy"], rows, metadata, representation, remaining.u, graph.n


def _reliability(args):
    kwargs = ReliabilityReader.from_dict(load_json(args.app_file))
    solution = reliability(**kwargs, tol=args.tol)
    chain = kwargs["chain"]
    target = [kwargs["target_node"], *kwargs["dead"]]
    rows = [(x, float(v), solution.label(x) or "") for x, v in enumerate(solution.value.u)]
    metadata = {"app": "reliability", "target_node": kwargs["target_node"], "dead": kwargs["dead"],
                "verification_gap": solution.verification_gap}
    loss = np.asarray(kwargs["loss_rates"], dtype=float)
    terminal = indicator_terminal(chain.n, [kwargs["target_node"]])

    def representation():
        if solution.policy is None:
            return Representation(lambda _x: chain, np.zeros(chain.n), loss, terminal.vector(0.0),
                                  frozenset(target))
        return representation_from_policy(kwargs["controls"], target, terminal, solution.policy, discount=loss)

    return ["state", "u", "policy"], rows, metadata, representation, solution.value.u, chain.n


def _circuit(args):
    circuit = NetlistReader.read(args.app_file)
    sol = solve_circuit(circuit, tol=args.tol)
    rows = [(circuit.nodes[x], float(v)) for x, v in enumerate(sol.u)]
    metadata = {"app": "circuit", "residual": sol.residual, "diodes": diode_currents(circuit, sol.u),
                **sol.metadata}
    return ["node", "potential"], rows, metadata, None, sol.u, circuit.n


APPS = {
    "control": _control,
    "paths": _paths,
    "reliability": _reliability,
    "circuit": _circuit,
}


def cmd_app(args) -> int:
    manifest = RunManifest("app", seed=args.seed, tolerances={"residual": args.tol},
                           options={"app": args.app, "mc_paths": args.mc_paths, "horizon": args.horizon})
    manifest.add_input(args.app_file)
    header, rows, metadata, representation, values, n = APPS[args.app](args)

    if args.mc_paths > 0 and representation is None:
        logger.info("Для приложения %s проверка Монте-Карло не проводится", args.app)
    elif args.mc_paths > 0:
        rep = representation()
        live = [x for x in range(n) if x not in rep.target]
        report = mc_validate(rep, values, paths=args.mc_paths, seed=args.seed, states=live, workers=args.workers)
        metadata["mc_passed"] = report.passed
        ResultWriter.emit(args.out, manifest, ["state", "solver", "estimate", "standard_error", "z"], report.rows(),
                          {"paths": args.mc_paths, "z_threshold": report.z_threshold, "passed": report.passed},
                          suffix="_mc")

    ResultWriter.emit(args.out, manifest, header, rows, metadata)
    return 0


def register_handlers(subparsers):
    parser = subparsers.add_parser("app", help="прикладные задачи")
    parser.add_argument("app_file", help="JSON задачи или текст схемы (netlist)")
    parser.add_argument("--app", choices=sorted(APPS), required=True)
    parser.add_argument("--mc-paths", type=int, default=0, help="число траекторий для сверки Монте-Карло")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--horizon", type=float, default=10.0, help="горизонт для paths")
    parser.add_argument("--tol", type=float, default=Config.RESIDUAL_TOL)
    parser.set_defaults(handler=cmd_app)
