from solver.truncation import truncation_sequence
from storage.manifest import RunManifest
from storage.readers import ProblemReader
from storage.writers import ResultWriter


def cmd_truncation(args) -> int:
    problem = ProblemReader.read(args.problem_file)
    manifest = RunManifest("truncation", options={"horizons": args.horizons, "refine": args.refine})
    for path in ProblemReader.input_files(args.problem_file):
        manifest.add_input(path)

    diagnostics = truncation_sequence(problem, args.horizons, refine=args.refine)
    metadata = {
        "successive_gaps": diagnostics.successive_gaps.tolist(),
        "fitted_exponent": diagnostics.fitted_exponent,
        "eventually_monotone": diagnostics.eventually_monotone(),
    }
    ResultWriter.emit(args.out, manifest, ["n", "state", "value", "gap"], diagnostics.rows(), metadata)
    return 0


def register_handlers(subparsers):
    parser = subparsers.add_parser("truncation", help="сходимость решений на горизонтах n → ∞")
    parser.add_argument("problem_file")
    parser.add_argument("--horizons", type=float, nargs="+", default=[1.0, 2.0, 4.0, 8.0, 16.0])
    parser.add_argument("--refine", type=int, default=4)
    parser.set_defaults(handler=cmd_truncation)
