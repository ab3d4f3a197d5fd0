import argparse
import json
import logging
import sys

from config import Config
from errors import BsdeError, InputError
from handlers import apps, moments, solve, truncation, validate

# Настройка логирования
logging.basicConfig(
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s", level=logging.INFO
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hitting-bsde",
        description="BSDE для конечных цепей Маркова с терминальным значением в момент попадания",
    )
    parser.add_argument("--verbose", action="store_true", help="подробный журнал (DEBUG)")
    parser.add_argument("--out", default=Config.OUTPUT_DIR, help="каталог результатов")
    parser.add_argument("--version", action="version", version=Config.VERSION)
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Порядок регистрации задаёт порядок подкоманд в --help
    validate.register_handlers(subparsers)
    solve.register_handlers(subparsers)
    moments.register_handlers(subparsers)
    apps.register_handlers(subparsers)
    truncation.register_handlers(subparsers)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    try:
        return args.handler(args)
    except BsdeError as e:
        logging.getLogger(__name__).error("%s: %s", e.code, e)
        print(json.dumps({"diagnostics": [e.as_diagnostic()]}, ensure_ascii=False, default=str))
        return e.exit_code
    except (ValueError, TypeError, KeyError) as e:
        # Некорректные значения в файлах описаний, не пойманные читателями
        logging.getLogger(__name__).error("Некорректные входные данные: %r", e)
        print(json.dumps({"diagnostics": [{"code": InputError.code, "message": str(e)}]}, ensure_ascii=False))
        return InputError.exit_code


if __name__ == "__main__":
    sys.exit(main())
