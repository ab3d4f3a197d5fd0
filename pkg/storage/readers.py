import json
import logging
import re
from pathlib import Path

import numpy as np

from apps.circuit import CircuitSpec, Diode, Resistor, circuit_problem
from apps.paths import GraphSpec
from chain.rates import RateMatrix, validate_rate_matrix
from drivers.affine import AffineDriver, discount_driver
from drivers.base import MarkovianDriver
from drivers.controls import ControlSet
from drivers.hamiltonian import HamiltonianDriver
from errors import SpecFormatError
from solver.problem import HittingProblem, Terminal, constant_terminal, polynomial_terminal

logger = logging.getLogger(__name__)

SCALE_FACTORS = {"t": 1e12, "g": 1e9, "meg": 1e6, "k": 1e3, "m": 1e-3, "u": 1e-6, "n": 1e-9, "p": 1e-12,
                 "f": 1e-15}
NUMBER = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)([a-zA-Z]*)$")


def load_json(path) -> dict:
    try:
        with open(Path(path), encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise SpecFormatError(f"Файл {path} не найден", path=str(path))
    except json.JSONDecodeError as e:
        raise SpecFormatError(f"Некорректный JSON в {path}: {e}", path=str(path), line=e.lineno)


def _require(spec: dict, key: str, where: str):
    if key not in spec:
        raise SpecFormatError(f"В описании {where} нет поля {key!r}", field=key)
    return spec[key]


def _float(spec: dict, key: str, where: str) -> float:
    value = _require(spec, key, where)
    try:
        return float(value)
    except (TypeError, ValueError):
        raise SpecFormatError(f"Поле {key!r} в описании {where} должно быть числом, получено {value!r}", field=key)


def convert_units(token: str) -> float:
    """
    Число в синтаксисе SPICE: 1k, 4.7u, 2meg, 1e-3.
    """
    match = NUMBER.match(token.strip())
    if not match:
        raise SpecFormatError(f"Не удаётся разобрать число {token!r}", token=token)
    value, suffix = float(match.group(1)), match.group(2).lower()
    if not suffix:
        return value
    if suffix not in SCALE_FACTORS:
        raise SpecFormatError(f"Неизвестный множитель {suffix!r} в {token!r}", token=token)
    return value * SCALE_FACTORS[suffix]


def state_index(chain: RateMatrix, token) -> int:
    """
    Состояние по номеру или по имени из state_names.
    """
    if isinstance(token, str) and not token.lstrip("-").isdigit():
        if token not in chain.state_names:
            raise SpecFormatError(f"Неизвестное состояние {token!r}", state=token)
        return chain.state_names.index(token)
    return chain.check_state(int(token))


class ChainReader:
    @staticmethod
    def from_dict(spec: dict) -> RateMatrix:
        rates = _require(spec, "rates", "цепи")
        a = validate_rate_matrix(rates, spec.get("state_names"))
        if "n" in spec and int(spec["n"]) != a.n:
            raise SpecFormatError(f"Заявлено n = {spec['n']}, а матрица размерности {a.n}", field="n")
        return a

    @staticmethod
    def read(path) -> RateMatrix:
        return ChainReader.from_dict(load_json(path))


class ControlReader:
    @staticmethod
    def control_set(entries: list[dict], chain: RateMatrix, target) -> ControlSet:
        """
        Множество управлений [{label, rates, cost?}]; γ проверяется только
        на живых столбцах.
        """
        if not entries:
            raise SpecFormatError("Список управлений пуст", field="controls")
        labels, matrices, costs = [], [], []
        for k, entry in enumerate(entries):
            labels.append(str(entry.get("label", f"u{k}")))
            matrices.append(validate_rate_matrix(_require(entry, "rates", "управления")))
            costs.append(entry.get("cost", [0.0] * chain.n))
        live = [x for x in range(chain.n) if x not in set(target)]
        return ControlSet.from_table(labels, matrices, chain, np.array(costs, dtype=float).T, columns=live)

    @staticmethod
    def from_dict(spec: dict) -> dict:
        """
        Аргументы solve_control: cs, chain, target, terminal, discount.
        """
        chain = ChainReader.from_dict(spec)
        target = [state_index(chain, x) for x in _require(spec, "target", "задачи управления")]
        return {
            "cs": ControlReader.control_set(_require(spec, "controls", "задачи управления"), chain, target),
            "chain": chain,
            "target": target,
            "terminal": TerminalReader.from_dict(spec.get("terminal", {"values": [0.0] * chain.n})),
            "discount": spec.get("r"),
        }


class TerminalReader:
    @staticmethod
    def from_dict(spec: dict) -> Terminal:
        if "values" in spec:
            return constant_terminal(spec["values"])
        if "polynomial" in spec:
            return polynomial_terminal(spec["polynomial"])
        raise SpecFormatError("Терминальная функция задаётся полем 'values' или 'polynomial'", field="terminal")


class DriverReader:
    @staticmethod
    def from_dict(spec: dict, chain: RateMatrix, target) -> MarkovianDriver:
        kind = _require(spec, "type", "драйвера")
        if kind == "affine":
            b = validate_rate_matrix(spec["b"]) if "b" in spec else None
            return AffineDriver(chain, b=b, g=spec.get("g"), r=spec.get("r"))
        if kind == "hamiltonian":
            cs = ControlReader.control_set(_require(spec, "controls", "драйвера"), chain, target)
            return HamiltonianDriver(cs, chain, spec.get("sense", "inf"), discount=spec.get("r"),
                                     offset=spec.get("g"), name=f"hamiltonian_{spec.get('sense', 'inf')}")
        if kind == "reliability":
            r = _require(spec, "loss_rates", "драйвера")
            if "controls" not in spec:
                return discount_driver(chain, r)
            cs = ControlReader.control_set(spec["controls"], chain, target)
            return HamiltonianDriver(cs, chain, "sup", discount=r, name="reliability")
        if kind == "shortest_path":
            entries = spec.get("controls") or [{"label": "walk", "rates": chain.q.tolist()}]
            cs = ControlReader.control_set(entries, chain, target)
            return HamiltonianDriver(cs, chain, "inf", offset=np.ones(chain.n), name="shortest_path")
        raise SpecFormatError(f"Неизвестный тип драйвера {kind!r}", field="type")


class ProblemReader:
    @staticmethod
    def from_dict(spec: dict, base_dir=".") -> HittingProblem:
        driver_spec = _require(spec, "driver", "задачи")
        constants = {key: float(value) for key, value in spec.get("constants", {}).items()}
        if driver_spec.get("type") == "diode_circuit":
            circuit = NetlistReader.parse("\n".join(_require(driver_spec, "netlist", "драйвера")))
            problem = circuit_problem(circuit)
            return HittingProblem(problem.chain, problem.target, problem.terminal, problem.driver, **constants)
        if "chain" in spec:
            chain = ChainReader.from_dict(spec["chain"])
        else:
            chain = ChainReader.read(Path(base_dir) / _require(spec, "chain_file", "задачи"))
        target = [state_index(chain, x) for x in _require(spec, "target", "задачи")]
        return HittingProblem(
            chain=chain,
            target=frozenset(target),
            terminal=TerminalReader.from_dict(_require(spec, "terminal", "задачи")),
            driver=DriverReader.from_dict(driver_spec, chain, target),
            strict=bool(spec.get("strict", True)),
            **constants,
        )

    @staticmethod
    def read(path) -> HittingProblem:
        path = Path(path)
        return ProblemReader.from_dict(load_json(path), path.parent)

    @staticmethod
    def input_files(path) -> list[Path]:
        """
        Файл задачи и файл цепи, если он вынесен отдельно.
        """
        path = Path(path)
        files = [path]
        spec = load_json(path)
        if "chain_file" in spec:
            files.append(path.parent / spec["chain_file"])
        return files


class NetlistReader:
    """
    Строки `R i j ohms`, `D i j Is Vt` (анод i, катод j), `V node volts`.
    `*` и `#` начинают комментарий.
    """

    @staticmethod
    def parse(text: str) -> CircuitSpec:
        nodes: list[str] = []
        edges = []
        sources = {}

        def node(name: str) -> int:
            if name not in nodes:
                nodes.append(name)
            return nodes.index(name)

        for number, raw in enumerate(text.splitlines(), start=1):
            line = re.split(r"[*#]", raw, maxsplit=1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            kind = tokens[0].upper()[0]
            try:
                if kind == "R" and len(tokens) == 4:
                    edges.append((node(tokens[1]), node(tokens[2]), Resistor(convert_units(tokens[3]))))
                elif kind == "D" and len(tokens) == 5:
                    edges.append((node(tokens[1]), node(tokens[2]),
                                  Diode(convert_units(tokens[3]), convert_units(tokens[4]))))
                elif kind == "V" and len(tokens) == 3:
                    sources[node(tokens[1])] = convert_units(tokens[2])
                else:
                    raise SpecFormatError(f"Не удаётся разобрать строку: {raw.strip()!r}")
            except SpecFormatError as e:
                raise SpecFormatError(f"Строка {number}: {e}", line=number)
        return CircuitSpec(tuple(nodes), tuple(edges), sources)

    @staticmethod
    def read(path) -> CircuitSpec:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except FileNotFoundError:
            raise SpecFormatError(f"Файл {path} не найден", path=str(path))
        return NetlistReader.parse(text)


class GraphReader:
    @staticmethod
    def from_dict(spec: dict) -> GraphSpec:
        nodes = [str(x) for x in _require(spec, "nodes", "графа")]
        index = {name: k for k, name in enumerate(nodes)}

        def lookup(name) -> int:
            if str(name) not in index:
                raise SpecFormatError(f"Неизвестный узел {name!r}", node=str(name))
            return index[str(name)]

        n = len(nodes)
        distances = np.full((n, n), np.inf)
        for edge in _require(spec, "edges", "графа"):
            distances[lookup(_require(edge, "from", "ребра")), lookup(_require(edge, "to", "ребра"))] = \
                _float(edge, "distance", "ребра")
        speedups = []
        for entry in spec.get("speedups", []):
            factors = np.ones((n, n))
            for edge in entry.get("edges", []):
                factors[lookup(_require(edge, "to", "ускорения")), lookup(_require(edge, "from", "ускорения"))] = \
                    _float(edge, "factor", "ускорения")
            speedups.append((str(entry.get("label", f"speedup{len(speedups)}")), factors))
        return GraphSpec(tuple(nodes), distances, lookup(_require(spec, "target", "графа")), tuple(speedups))

    @staticmethod
    def read(path) -> GraphSpec:
        return GraphReader.from_dict(load_json(path))


class ReliabilityReader:
    @staticmethod
    def from_dict(spec: dict) -> dict:
        """
        Аргументы reliability: chain, loss_rates, dead, target_node, controls.
        """
        chain = ChainReader.from_dict(spec)
        target_node = state_index(chain, _require(spec, "target", "задачи надёжности"))
        dead = [state_index(chain, x) for x in spec.get("dead", [])]
        controls = None
        if spec.get("controls"):
            controls = ControlReader.control_set(spec["controls"], chain, [target_node, *dead])
        return {"chain": chain, "loss_rates": _require(spec, "loss_rates", "задачи надёжности"), "dead": dead,
                "target_node": target_node, "controls": controls}
