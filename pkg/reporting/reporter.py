import json
import logging
import time
from pathlib import Path
from typing import Any, Optional, Sequence

import pandas as pd

from core.config import dump_config
from core.logger import StructuredLogger
from core.schemas import ModelConfig, RunManifest, SolveReport, SweepRow

logger = logging.getLogger(__name__)

TOOL_VERSION = "1.0.0"
FLOAT_FORMAT = "%.9g"
MANIFEST_NAME = "manifest.json"


def write_csv(df: pd.DataFrame, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


class RunReporter:
    """Collects every file a command emits and seals the run with a manifest."""

    def __init__(self, out_dir: Path, command: str, log_level: str = "INFO"):
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.command = command
        self.files: list[Path] = []
        self.started = time.perf_counter()
        self.logger = StructuredLogger("reporting.reporter", log_level).bind(command=command)

    def register(self, path: Path) -> Path:
        path = Path(path)
        if path not in self.files:
            self.files.append(path)
        return path

    def write_frame(self, df: pd.DataFrame, name: str) -> Path:
        return self.register(write_csv(df, self.out_dir / name))

    def write_trajectory(self, report: SolveReport, subdir: str = "") -> Optional[Path]:
        if report.trajectory is None:
            return None
        return self.write_frame(report.trajectory.to_frame(), str(Path(subdir) / "trajectory.csv"))

    def write_config(self, config: ModelConfig, subdir: str = "") -> Path:
        return self.register(dump_config(config, self.out_dir / subdir / "config.env"))

    def write_text_report(self, report: SolveReport, subdir: str = "") -> Path:
        path = self.out_dir / subdir / "report.txt"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(format_report(report), encoding="utf-8")
        return self.register(path)

    def write_solve(self, report: SolveReport, subdir: str = "") -> None:
        self.write_trajectory(report, subdir)
        self.write_text_report(report, subdir)
        self.write_config(report.config, subdir)

    def write_summary(self, rows: Sequence[SweepRow], name: str = "summary.csv") -> Path:
        df = pd.DataFrame([row.model_dump(mode="json") for row in rows])
        return self.write_frame(df, name)

    def write_manifest(
        self,
        config_paths: Sequence[str] = (),
        solver_settings: Optional[dict[str, Any]] = None,
        config_hash: Optional[str] = None,
    ) -> Path:
        listed = sorted(str(path.relative_to(self.out_dir)) for path in self.files)
        manifest = RunManifest(
            command=self.command,
            config_paths=[str(p) for p in config_paths],
            output_dir=str(self.out_dir),
            solver_settings=solver_settings or {},
            tool_version=TOOL_VERSION,
            config_hash=config_hash,
            wall_clock_seconds=round(time.perf_counter() - self.started, 3),
            files=listed,
        )
        path = self.out_dir / MANIFEST_NAME
        with open(path, "w") as f:
            json.dump(manifest.model_dump(mode="json"), f, indent=2)
        self.logger.info("Manifest written", files=len(listed), path=path)
        return path


def format_report(report: SolveReport) -> str:
    lines = [
        f"scenario: {report.scenario}",
        f"status: {report.status.value}",
        f"objective: {report.objective:.9g}",
        f"iterations: {report.iterations}",
        f"kkt_residual: {report.kkt_residual:.3e}",
        f"message: {report.message}",
        f"config_hash: {report.config.config_hash()}",
        f"damage: {report.config.damage.family.value} {report.config.damage.coefficients} "
        f"({report.config.damage.channel.value} channel)",
    ]
    if report.starts:
        lines.append("starts:")
        for start in report.starts:
            lines.append(
                f"  {start.label}: objective={start.objective:.9g} kkt={start.kkt_residual:.3e} "
                f"iterations={start.iterations} collapsed={start.collapsed}"
            )
    if report.trajectory is not None:
        trajectory = report.trajectory
        damage = trajectory.column("damage_frac")
        peak = int(damage.argmax())
        record = trajectory.records[peak]
        lines += [
            f"peak_damage: {damage[peak]:.6g} in {record.year} at {record.t_at:.4g} degC",
            f"peak_temperature: {trajectory.column('t_at').max():.6g}",
            f"min_k_over_y: {trajectory.column('k_over_y').min():.6g}",
            f"min_c_percap: {trajectory.column('c_percap').min():.6g}",
            f"capital_floor_activated: {trajectory.floor_activated}",
        ]
    return "\n".join(lines) + "\n"
