"""Location, loading and saving of the geometry document."""

import os
import sys
from pathlib import Path
from typing import Optional, Tuple

from geoik.arm_model import ArmGeometry, GeometryDocument, JointLimits, load_geometry
from geoik.errors import ConfigError

# Geometry of the worked example: equal 3-unit arm segments, 2-unit hand.
EXAMPLE_GEOMETRY = ArmGeometry(d1=3.0, d2=3.0, long_mano=2.0)


def _get_config_path() -> Path:
    """Return the platform-appropriate geometry file path."""
    if sys.platform == "win32":
        base = Path(os.environ.get("APPDATA", Path.home()))
    else:
        base = Path(os.environ.get("XDG_CONFIG_HOME", Path.home() / ".config"))
    return base / "geoik" / "geometry.json"


class ConfigManager:
    """Resolves, loads and saves the geometry document."""

    def __init__(self, config_path: Optional[Path] = None) -> None:
        self._config_path = config_path or _get_config_path()

    @property
    def config_path(self) -> Path:
        return self._config_path

    def resolve(self, override: Optional[Path] = None) -> Path:
        """Pick the explicit path if given, else the default location.

        Raises:
            ConfigError: if the chosen file does not exist.
        """
        path = override or self._config_path
        if not path.is_file():
            if override is None:
                raise ConfigError(
                    f"no --geometry given and no default geometry at {path} "
                    "(run: geoik config --init)"
                )
            raise ConfigError(f"geometry file not found: {path}")
        return path

    def load(self, override: Optional[Path] = None) -> Tuple[ArmGeometry, JointLimits]:
        return load_geometry(self.resolve(override))

    def save(self, geom: ArmGeometry, limits: Optional[JointLimits] = None) -> Path:
        """Persist a geometry document to the default location."""
        doc = GeometryDocument.from_parts(geom, limits or JointLimits())
        self._config_path.parent.mkdir(parents=True, exist_ok=True)
        self._config_path.write_text(doc.model_dump_json(indent=2), encoding="utf-8")
        return self._config_path
