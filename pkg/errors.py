class BsdeError(Exception):
    """
    Базовая ошибка пакета. exit_code используется командной строкой.
    """
    exit_code = 2
    code = "error"

    def __init__(self, message: str, **fields):
        super().__init__(message)
        self.fields = fields

    def as_diagnostic(self) -> dict:
        """
        Машиночитаемое описание ошибки для списка диагностик CLI.
        """
        return {"code": self.code, "message": str(self), **self.fields}


class InputError(BsdeError):
    exit_code = 1
    code = "input_error"


class NumericalError(BsdeError):
    exit_code = 2
    code = "numerical_error"


# Ошибки входных данных (код выхода 1)

class NegativeOffDiagonal(InputError):
    code = "negative_off_diagonal"

    def __init__(self, i: int, j: int, value: float):
        super().__init__(f"Отрицательная внедиагональная интенсивность q[{i}][{j}] = {value}", i=i, j=j, value=value)


class ColumnSumNonzero(InputError):
    code = "column_sum_nonzero"

    def __init__(self, column: int, residual: float):
        super().__init__(f"Сумма столбца {column} равна {residual}, а не 0", column=column, residual=residual)


class NonFinite(InputError):
    code = "non_finite"

    def __init__(self, i: int, j: int):
        super().__init__(f"Неконечное значение в позиции ({i}, {j})", i=i, j=j)


class DimensionMismatch(InputError):
    code = "dimension_mismatch"


class UnreachableTarget(InputError):
    code = "unreachable_target"

    def __init__(self, states: list[int]):
        super().__init__(f"Целевое множество недостижимо из состояний {states}", states=list(states))


class EmptyControlSet(InputError):
    code = "empty_control_set"

    def __init__(self):
        super().__init__("Множество управлений пусто")


class DisconnectedNode(InputError):
    code = "disconnected_node"

    def __init__(self, nodes: list):
        super().__init__(f"Узлы не связаны ни с одним источником: {nodes}", nodes=list(nodes))


class DriverTimeDependent(InputError):
    code = "driver_time_dependent"

    def __init__(self):
        super().__init__("Драйвер или терминальная функция зависят от времени; нужен режим grid")


class NotCertified(InputError):
    code = "not_certified"


class SpecFormatError(InputError):
    code = "spec_format"


class InvalidArgument(InputError, ValueError):
    code = "invalid_argument"


# Численные ошибки (код выхода 2)

class AbsorbedOutsideTarget(NumericalError):
    code = "absorbed_outside_target"

    def __init__(self, state: int, time: float):
        super().__init__(f"Цепь поглощена в состоянии {state} вне целевого множества (t = {time})",
                         state=state, time=time)


class NoConvergence(NumericalError):
    code = "no_convergence"

    def __init__(self, residual: float, iterations: int):
        super().__init__(f"Нет сходимости: невязка {residual:.3e} после {iterations} итераций",
                         residual=residual, iterations=iterations)


class StepTooLarge(NumericalError):
    code = "step_too_large"

    def __init__(self, h: float, bound: float):
        super().__init__(f"Шаг h = {h} превышает допустимый {bound}", h=h, bound=bound)


class NonFiniteState(NumericalError):
    code = "non_finite_state"

    def __init__(self, time: float):
        super().__init__(f"Переполнение при интегрировании в момент t = {time}", time=time)


class SingularSystem(NumericalError):
    code = "singular_system"

    def __init__(self, states: list[int]):
        super().__init__(f"Вырожденная линейная система (проблемные состояния: {states})", states=list(states))


class NoFiniteExponent(NumericalError):
    code = "no_finite_exponent"

    def __init__(self):
        super().__init__("Не найден показатель beta' > 0 с конечным экспоненциальным моментом")


class BoundViolated(NumericalError):
    code = "bound_violated"

    def __init__(self, t: float, x: int, value: float, bound: float):
        super().__init__(f"|u({t}, {x})| = {abs(value)} превышает оценку {bound}", t=t, x=x, value=value, bound=bound)


class PolicyValueMismatch(NumericalError):
    code = "policy_value_mismatch"

    def __init__(self, gap: float):
        super().__init__(f"Ценность извлечённой стратегии отличается от решения уравнения Беллмана на {gap:.3e}",
                         gap=gap)


class ComparisonViolated(NumericalError):
    code = "comparison_violated"

    def __init__(self, state: int, gap: float):
        super().__init__(f"Нарушен порядок решений в состоянии {state}: разность {gap:.3e}", state=state, gap=gap)
