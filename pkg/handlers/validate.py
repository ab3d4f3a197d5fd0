import json
import logging

from errors import UnreachableTarget
from storage.readers import ChainReader, ProblemReader, load_json, state_index

logger = logging.getLogger(__name__)


def cmd_validate(args) -> int:
    """
    Проверяет файл цепи или задачи. Ошибка описания поднимается наверх,
    main печатает её как диагностику и возвращает код выхода 1.
    """
    spec = load_json(args.spec_file)
    if "driver" in spec:
        problem = ProblemReader.read(args.spec_file)
        summary = {"kind": "problem", "n": problem.n, "target": problem.target_list,
                   "driver": problem.driver.name, "time_homogeneous": problem.time_homogeneous}
    else:
        chain = ChainReader.from_dict(spec)
        summary = {"kind": "chain", "n": chain.n, "max_exit_rate": chain.max_exit_rate}
        target = args.target if args.target is not None else spec.get("target")
        if target is not None:
            # Та же проверка, что у HittingProblem
            target = [state_index(chain, x) for x in target]
            unreachable = sorted(set(range(chain.n)) - chain.states_reaching(target))
            if unreachable:
                raise UnreachableTarget(unreachable)
            summary["target"] = sorted(target)

    logger.info("Файл %s корректен", args.spec_file)
    print(json.dumps({"valid": True, **summary, "diagnostics": []}, ensure_ascii=False))
    return 0


def register_handlers(subparsers):
    parser = subparsers.add_parser("validate", help="проверить файл цепи или задачи")
    parser.add_argument("spec_file", help="JSON с цепью или задачей")
    parser.add_argument("--target", nargs="+", default=None, help="целевые состояния для проверки достижимости")
    parser.set_defaults(handler=cmd_validate)
