import logging
from pathlib import Path
from typing import NamedTuple, Optional, Sequence

import matplotlib as mpl

mpl.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.lines import Line2D  # noqa: E402
import numpy as np  # noqa: E402

from core.schemas import (  # noqa: E402
    DamageFamily,
    DamageSpec,
    EstimatePoint,
    QuadraticFit,
    RamseyParams,
    SaddlePath,
    SolveReport,
    StateRecord,
)
from damages.damage_functions import damage_fraction, genealogy  # noqa: E402

logger = logging.getLogger(__name__)

FIGURE_STYLE = {
    "svg.hashsalt": "dice-figures",
    "svg.fonttype": "none",
    "font.family": "sans-serif",
    "font.size": 10,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.figsize": (6.4, 4.0),
    "axes.spines.top": False,
    "axes.spines.right": False,
}
mpl.rcParams.update(FIGURE_STYLE)

LINE_STYLES = ("solid", "dashed", "dotted", "dashdot")
FIG1_DAMAGE = DamageSpec(family=DamageFamily.QUADRATIC, coefficients={"a": 0.00227})
SWEEP_LABELS = {0.00236: "Nordhaus", 0.16236: "Scenario 1", 0.18236: "Scenario 2", 0.19236: "Infeasible"}


def save_svg(fig: plt.Figure, path: Path, tag: Optional[str] = None) -> Path:
    """Write a reproducible SVG; `tag` is embedded as a comment after the XML header."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)

    if tag:
        text = path.read_text(encoding="utf-8")
        header_end = text.find("?>") + 2 if text.startswith("<?xml") else 0
        text = f"{text[:header_end]}\n<!-- {tag} -->{text[header_end:]}"
        path.write_text(text, encoding="utf-8")
    logger.info(f"Figure written: {path}")
    return path


def plot_estimates(points: Sequence[EstimatePoint], path: Path) -> Path:
    fig, ax = plt.subplots()
    methods = sorted({p.method.value for p in points})
    markers = dict(zip(methods, ("o", "s", "^", "D")))
    for method in methods:
        chosen = [p for p in points if p.method.value == method]
        ax.scatter([p.warming for p in chosen], [p.impact_pct for p in chosen], marker=markers[method], label=method)

    warming = np.linspace(0.0, 6.0, 121)
    ax.plot(warming, -100.0 * damage_fraction(FIG1_DAMAGE, warming), color="black", label="quadratic, a = 0.00227")
    ax.axhline(0.0, color="grey", linewidth=0.5)
    ax.set_xlabel("Warming (degC)")
    ax.set_ylabel("Impact (% of GDP)")
    ax.legend(frameon=False)
    return save_svg(fig, path, tag=f"estimate points: {len(points)}")


def plot_genealogy(path: Path) -> Path:
    fig, ax = plt.subplots()
    warming = np.linspace(0.0, 6.0, 121)
    for (year, spec), style in zip(genealogy().items(), LINE_STYLES * 2):
        ax.plot(warming, 100.0 * damage_fraction(spec, warming), linestyle=style, label=str(year))
    ax.set_xlabel("Warming (degC)")
    ax.set_ylabel("Damage (% of output)")
    ax.legend(frameon=False, title="Damage function")
    return save_svg(fig, path, tag="damage function genealogy")


def plot_spatial_fit(records: Sequence[StateRecord], result: QuadraticFit, path: Path) -> Path:
    fig, ax = plt.subplots()
    dtemp = np.array([r.dtemp for r in records])
    relative = 100.0 * np.array([r.dgsp_percap for r in records]) / result.national_mean
    ax.scatter(dtemp, relative, s=12, color="tab:blue", label="states")

    grid = np.linspace(dtemp.min(), dtemp.max(), 200)
    fitted = 100.0 * (result.intercept + result.beta * grid ** 2)
    ax.plot(grid, fitted, color="black", label=f"quadratic fit, R2 = {result.r_squared:.2f}")
    ax.set_xlabel("Temperature deviation from national mean (degC)")
    ax.set_ylabel("GSP per capita deviation (%)")
    ax.legend(frameon=False)
    return save_svg(fig, path, tag=f"variant: {result.variant.label}")


class SweepSeries(NamedTuple):
    column: str
    label: str
    color: str
    scale: float = 1.0


SWEEP_PANELS: dict[str, tuple[tuple[SweepSeries, ...], str, tuple[SweepSeries, ...], str]] = {
    "fig4_damages.svg": (
        (SweepSeries("y_gross", "Gross output", "tab:blue"), SweepSeries("y_final", "Final output", "gold")),
        "Output (trillion USD/yr)",
        (SweepSeries("damage_frac", "Damages", "tab:orange", 100.0),),
        "Damage (% of gross output)",
    ),
    "fig5_consumption.svg": (
        (SweepSeries("mu", "Emissions reduction rate", "tab:blue"), SweepSeries("s", "Savings rate", "gold")),
        "Rate",
        (SweepSeries("lambda_", "Abatement cost", "tab:orange", 100.0),),
        "Abatement cost (% of net output)",
    ),
    "fig6_capital_output.svg": (
        (SweepSeries("k_over_y", "Capital-output ratio", "tab:blue"),),
        "Capital-output ratio (years)",
        (
            SweepSeries("c_percap", "Consumption per capita (thousand USD/yr)", "gold"),
            SweepSeries("p_c", "Carbon price (USD/tCO2)", "tab:red"),
        ),
        "Consumption per capita, carbon price",
    ),
}


def _sweep_label(report: SolveReport) -> str:
    a = report.config.damage.coefficients.get("a", float("nan"))
    name = SWEEP_LABELS.get(round(a, 5), "run")
    return f"{name} (a = {a:g})"


def _sweep_panel(
    reports: Sequence[SolveReport],
    left: Sequence[SweepSeries],
    left_label: str,
    right: Sequence[SweepSeries],
    right_label: str,
    path: Path,
) -> Path:
    """Colour marks the variable, line style marks the run."""
    fig, ax = plt.subplots()
    twin = ax.twinx()
    twin.spines["right"].set_visible(True)
    runs = [r for r in reports if r.trajectory is not None]
    for report, style in zip(runs, LINE_STYLES * 4):
        years = report.trajectory.column("year")
        for axis, series in [(ax, s) for s in left] + [(twin, s) for s in right]:
            axis.plot(years, series.scale * report.trajectory.column(series.column), linestyle=style,
                      color=series.color, linewidth=1.0)

    handles = [Line2D([], [], color=s.color, label=s.label) for s in (*left, *right)]
    handles += [
        Line2D([], [], color="black", linestyle=style, label=_sweep_label(report))
        for report, style in zip(runs, LINE_STYLES * 4)
    ]
    ax.set_xlabel("Year")
    ax.set_ylabel(left_label)
    twin.set_ylabel(right_label)
    ax.legend(handles=handles, frameon=False, loc="upper left")
    hashes = ",".join(r.config.config_hash()[:12] for r in reports)
    return save_svg(fig, path, tag=f"config-hash: {hashes}")


def plot_sweep(reports: Sequence[SolveReport], out_dir: Path) -> list[Path]:
    out_dir = Path(out_dir)
    return [
        _sweep_panel(reports, left, left_label, right, right_label, out_dir / name)
        for name, (left, left_label, right, right_label) in SWEEP_PANELS.items()
    ]


def plot_phase_portrait(params: RamseyParams, k_star: float, c_star: float, path_: SaddlePath, path: Path) -> Path:
    fig, ax = plt.subplots()
    k = np.linspace(0.05 * k_star, 3.0 * k_star, 300)
    ax.plot(k, params.tfp * k ** params.gamma - params.effective_depreciation * k, color="grey",
            linestyle="dashed", label="k_dot = 0")
    ax.axvline(k_star, color="grey", linestyle="dotted", label="c_dot = 0")
    ax.plot(path_.path.k, path_.path.c, color="black", label="saddle path")
    ax.scatter([k_star], [c_star], color="black", zorder=3)
    ax.set_xlabel("Capital per capita")
    ax.set_ylabel("Consumption per capita")
    ax.legend(frameon=False)
    return save_svg(fig, path, tag=f"steady state k*={k_star:.6g} c*={c_star:.6g}")
