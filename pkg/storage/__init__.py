from storage.manifest import RunManifest
from storage.readers import (
    ChainReader,
    ControlReader,
    DriverReader,
    GraphReader,
    NetlistReader,
    ProblemReader,
    ReliabilityReader,
    TerminalReader,
    convert_units,
    load_json,
)
from storage.writers import CsvReader, CsvWriter, ManifestWriter, ResultWriter

__all__ = [
    "RunManifest", "ChainReader", "ControlReader", "DriverReader", "GraphReader", "NetlistReader",
    "ProblemReader", "ReliabilityReader", "TerminalReader", "CsvReader", "CsvWriter", "ManifestWriter",
    "ResultWriter", "convert_units", "load_json",
]
