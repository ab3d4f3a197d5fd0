import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from config import Config
from utils.digest import file_digest, payload_digest


@dataclass
class RunManifest:
    """
    Описание запуска. Всё, кроме wall_clock, детерминировано входами:
    одинаковые stable_dict() дают побайтно одинаковые результаты.
    """
    command: str
    seed: int = 0
    version: str = Config.VERSION
    tolerances: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)
    inputs: dict[str, str] = field(default_factory=dict)
    outputs: dict[str, str] = field(default_factory=dict)
    wall_clock: float = 0.0
    _started: float = field(default_factory=time.perf_counter, repr=False)

    def add_input(self, path):
        self.inputs[Path(path).name] = file_digest(path)

    def add_output(self, path):
        self.outputs[Path(path).name] = file_digest(path)

    def finish(self):
        self.wall_clock = time.perf_counter() - self._started

    def stable_dict(self) -> dict:
        data = self.to_dict()
        data.pop("wall_clock")
        return data

    def to_dict(self) -> dict:
        data = asdict(self)
        data.pop("_started")
        return data

    def digest(self) -> str:
        return payload_digest({key: value for key, value in self.stable_dict().items() if key != "outputs"})
