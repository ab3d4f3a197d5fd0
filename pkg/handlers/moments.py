import logging

from ergodicity.condition import condition_K
from ergodicity.moments import exp_moment
from ergodicity.worst_case import worst_case_exp_moment
from errors import NoFiniteExponent
from storage.manifest import RunManifest
from storage.readers import ChainReader, state_index
from storage.writers import ResultWriter

logger = logging.getLogger(__name__)


def cmd_moments(args) -> int:
    """
    h(x) = E[e^{βτ}] номинально или в наихудшем случае по Q_γ,
    а также коэффициент k функции K(t) = k(1 + t)^{1+β_K}.
    """
    chain = ChainReader.read(args.chain_file)
    target = [state_index(chain, x) for x in args.target]
    gamma = args.gamma if args.worst_case else 1.0
    manifest = RunManifest("moments", options={"target": target, "beta": args.beta, "gamma": gamma,
                                               "worst_case": args.worst_case, "growth_beta": args.growth_beta})
    manifest.add_input(args.chain_file)

    if args.worst_case:
        report = worst_case_exp_moment(chain, gamma, target, args.beta)
    else:
        report = exp_moment(chain, target, args.beta)

    try:
        k = condition_K(chain, gamma, target, args.growth_beta).to_dict()
    except NoFiniteExponent:
        logger.warning("Нет конечного экспоненциального момента, K(t) не построена")
        k = None

    metadata = {"beta": args.beta, "gamma": gamma, "finite": report.finite, "worst_case": report.worst_case,
                "target": sorted(target), "k": k}
    ResultWriter.emit(args.out, manifest, ["state", "h"], report.rows(), metadata)
    return 0


def register_handlers(subparsers):
    parser = subparsers.add_parser("moments", help="экспоненциальные моменты времени достижения цели")
    parser.add_argument("chain_file")
    parser.add_argument("--target", nargs="+", required=True)
    parser.add_argument("--beta", type=float, required=True)
    parser.add_argument("--gamma", type=float, default=1.0)
    parser.add_argument("--worst-case", action="store_true")
    parser.add_argument("--growth-beta", type=float, default=1.0, help="показатель роста β в K(t)")
    parser.set_defaults(handler=cmd_moments)
