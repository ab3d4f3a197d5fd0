import logging

from config import Config
from solver.backward import solve_backward_grid, steps_for
from solver.homogeneous import solve_homogeneous
from storage.manifest import RunManifest
from storage.readers import ProblemReader
from storage.writers import ResultWriter

logger = logging.getLogger(__name__)


def cmd_solve(args) -> int:
    problem = ProblemReader.read(args.problem_file)
    manifest = RunManifest("solve", tolerances={"residual": args.tol},
                           options={"mode": args.mode, "horizon": args.horizon, "steps": args.steps})
    for path in ProblemReader.input_files(args.problem_file):
        manifest.add_input(path)

    if args.mode == "homogeneous":
        sol = solve_homogeneous(problem, tol=args.tol)
    else:
        steps = args.steps or steps_for(problem, args.horizon)
        manifest.options["steps"] = steps
        sol = solve_backward_grid(problem, args.horizon, steps)

    # mode - значение флага CLI, field - режим поля решения
    metadata = {"mode": args.mode, "field": sol.mode, "method": sol.method, "residual": sol.residual,
                "iterations": sol.iterations, "driver": problem.driver.name, "target": problem.target_list,
                **sol.metadata}
    ResultWriter.emit(args.out, manifest, sol.header(), sol.rows(), metadata)
    return 0


def register_handlers(subparsers):
    parser = subparsers.add_parser("solve", help="решить BSDE с терминальным значением в момент попадания")
    parser.add_argument("problem_file")
    parser.add_argument("--mode", choices=["homogeneous", "grid"], default="homogeneous")
    parser.add_argument("--horizon", type=float, default=10.0, help="горизонт сетки для режима grid")
    parser.add_argument("--steps", type=int, default=None, help="число шагов (по умолчанию из условия устойчивости)")
    parser.add_argument("--tol", type=float, default=Config.RESIDUAL_TOL)
    parser.set_defaults(handler=cmd_solve)
