import csv
import json
import logging
from pathlib import Path

from storage.manifest import RunManifest

logger = logging.getLogger(__name__)


def _cell(value):
    # repr даёт кратчайшую точную запись float и не зависит от локали
    if isinstance(value, float):
        return repr(value)
    return value


class CsvWriter:
    @staticmethod
    def write(path, header: list[str], rows, metadata: dict) -> Path:
        """
        Первая строка файла - комментарий `# {json}` с метаданными запуска.
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("# " + json.dumps(metadata, sort_keys=True, ensure_ascii=False, default=str) + "\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(v) for v in row])
        logger.debug("Записан %s (%d строк)", path, len(rows))
        return path


class CsvReader:
    @staticmethod
    def read(path) -> tuple[dict, list[dict]]:
        """
        Возвращает (метаданные, строки); числовые ячейки переводятся в float.
        """
        with open(Path(path), encoding="utf-8", newline="") as fh:
            first = fh.readline()
            if not first.startswith("# "):
                raise ValueError(f"В {path} нет строки метаданных")
            metadata = json.loads(first[2:])
            rows = []
            for record in csv.DictReader(fh):
                rows.append({key: _number(value) for key, value in record.items()})
        return metadata, rows


def _number(value: str):
    try:
        return float(value)
    except ValueError:
        return value


class ManifestWriter:
    @staticmethod
    def write(path, manifest: RunManifest) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(manifest.to_dict(), fh, sort_keys=True, indent=2, ensure_ascii=False)
            fh.write("\n")
        return path


class ResultWriter:
    @staticmethod
    def emit(out_dir, manifest: RunManifest, header: list[str], rows, metadata: dict, suffix: str = "") -> Path:
        """
        Пишет <out>/<command><suffix>.csv и обновляет манифест запуска
        <out>/<command>.manifest.json.
        """
        out_dir = Path(out_dir)
        metadata = {"command": manifest.command, "version": manifest.version, "seed": manifest.seed,
                    "inputs": manifest.inputs, **metadata}
        csv_path = CsvWriter.write(out_dir / f"{manifest.command}{suffix}.csv", header, rows, metadata)
        manifest.add_output(csv_path)
        manifest.finish()
        ManifestWriter.write(out_dir / f"{manifest.command}.manifest.json", manifest)
        logger.info("Результаты записаны в %s", csv_path)
        return csv_path
