import logging
from functools import lru_cache
from pathlib import Path
from typing import Any, Optional, Union

from dotenv import dotenv_values
from pydantic import ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from core.errors import ConfigError, ConfigValidationError
from core.schemas import ModelConfig

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
DEFAULTS_PATH = DATA_DIR / "dice2016r_defaults.env"
SCENARIO_DIR = DATA_DIR / "scenarios"

# Blocks that a scenario may switch off entirely with `key = none`.
OPTIONAL_BLOCKS = ("carbon_price_cap",)
DAMAGE_STRUCTURE_KEYS = ("damage.family", "damage.channel")


class RunnerSettings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="DICE_", env_file=".env", extra="ignore")

    output_dir: Path = Path("./runs")
    log_level: str = "INFO"
    log_dir: Optional[Path] = None
    workers: int = 1


def _is_none(value: Optional[str]) -> bool:
    return value is None or value.strip() == "" or value.strip().lower() == "none"


def _read_flat(path: Path) -> dict[str, Optional[str]]:
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")
    return {key.strip(): value for key, value in dotenv_values(path).items()}


def _is_known_key(key: str, defaults: dict[str, Optional[str]]) -> bool:
    if key in defaults:
        return True
    # Coefficient names depend on the damage family and are checked by DamageSpec.
    if key.startswith("damage.") and key.count(".") == 1:
        return True
    return key in OPTIONAL_BLOCKS


def _merge(defaults: dict[str, Optional[str]], overrides: dict[str, Optional[str]]) -> dict[str, Optional[str]]:
    for key in overrides:
        if not _is_known_key(key, defaults):
            raise ConfigError("Unknown configuration key", key=key)

    merged = dict(defaults)
    if "damage.family" in overrides and overrides["damage.family"] != defaults.get("damage.family"):
        merged = {
            key: value for key, value in merged.items()
            if not key.startswith("damage.") or key in DAMAGE_STRUCTURE_KEYS
        }
    merged.update(overrides)

    for block in OPTIONAL_BLOCKS:
        if block in merged:
            if _is_none(merged.pop(block)):
                merged = {k: v for k, v in merged.items() if not k.startswith(f"{block}.")}
    return merged


def _unflatten(flat: dict[str, Optional[str]]) -> dict[str, Any]:
    tree: dict[str, Any] = {}
    for key, value in flat.items():
        if key.startswith("damage.") and key not in DAMAGE_STRUCTURE_KEYS:
            tree.setdefault("damage", {}).setdefault("coefficients", {})[key.split(".", 1)[1]] = value
            continue
        parts = key.split(".")
        node = tree
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = None if _is_none(value) else value
    return tree


def _error_key(error: dict[str, Any]) -> str:
    # Cross-field validators name their dotted key in the message.
    for token in str(error.get("msg", "")).replace(",", " ").split():
        if token.startswith(("damage.", "mu_cap.", "climate.")):
            return token
    loc = [str(part) for part in error.get("loc", ())]
    if len(loc) >= 3 and loc[:2] == ["damage", "coefficients"]:
        loc = ["damage", *loc[2:]]
    return ".".join(loc) if loc else "<model>"


def build_config(flat: dict[str, Optional[str]]) -> ModelConfig:
    try:
        return ModelConfig.model_validate(_unflatten(flat))
    except ValidationError as e:
        first = e.errors()[0]
        key = _error_key(first)
        raise ConfigValidationError(f"Invalid configuration: {first['msg']}", key=key) from e


@lru_cache(maxsize=1)
def default_config() -> ModelConfig:
    return build_config(_read_flat(DEFAULTS_PATH))


def load_config(path: Optional[Union[str, Path]] = None) -> ModelConfig:
    defaults = _read_flat(DEFAULTS_PATH)
    if path is None:
        return build_config(defaults)

    path = Path(path)
    overrides = _read_flat(path)
    config = build_config(_merge(defaults, overrides))
    logger.info(f"Loaded config {path.name} ({len(overrides)} overrides, hash {config.config_hash()[:12]})")
    return config


def scenario_path(name: str) -> Path:
    candidate = Path(name)
    if candidate.exists():
        return candidate
    bundled = SCENARIO_DIR / f"{name.removesuffix('.env')}.env"
    if bundled.exists():
        return bundled
    raise ConfigError(f"Scenario not found: {name}")


def flatten_config(config: ModelConfig) -> dict[str, str]:
    flat: dict[str, str] = {}

    def walk(prefix: str, node: Any) -> None:
        if isinstance(node, dict):
            for key, value in node.items():
                walk(f"{prefix}.{key}" if prefix else key, value)
        elif node is None:
            flat[prefix] = "none"
        elif isinstance(node, (list, tuple)):
            flat[prefix] = str([list(row) for row in node]) if node and isinstance(node[0], (list, tuple)) else str(list(node))
        else:
            flat[prefix] = repr(node) if isinstance(node, float) else str(node)

    dumped = config.model_dump(mode="json")
    damage = dumped.pop("damage")
    walk("", dumped)
    flat["damage.family"] = damage["family"]
    flat["damage.channel"] = damage["channel"]
    for name, value in damage["coefficients"].items():
        flat[f"damage.{name}"] = repr(float(value))
    return flat


def dump_config(config: ModelConfig, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# config hash {config.config_hash()}"]
    lines += [f"{key} = {value}" for key, value in flatten_config(config).items()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
