import hashlib
import logging
from pathlib import Path

import pandas as pd

from core.errors import DataIntegrityError

logger = logging.getLogger(__name__)

ESTIMATE_POINTS_FILE = "estimate_points.csv"
STATE_TABLE_FILE = "state_temperature_gsp.csv"

CHECKSUMS = {
    ESTIMATE_POINTS_FILE: "bcb8128c9a32653109adc7ed6a21fc1d2148f98828bfdab324eeb9d1cd8fe4b3",
    STATE_TABLE_FILE: "76d1174200fe0c2ae64589744ccf4e0e032362bfe1a55075b99a3bf4465ccd97",
}

COLUMNS = {
    ESTIMATE_POINTS_FILE: ["study", "warming_c", "impact_pct", "method", "coverage"],
    STATE_TABLE_FILE: ["state", "temp_c", "gsp_bn", "pop_mn", "gsp_percap", "dtemp", "dgsp_percap"],
}


class DataLoader:
    def __init__(self, data_dir: Path = Path(__file__).resolve().parent, verify: bool = True):
        self.data_dir = Path(data_dir)
        self.verify = verify

    def checksum(self, name: str) -> str:
        return hashlib.sha256((self.data_dir / name).read_bytes()).hexdigest()

    def _load(self, name: str) -> pd.DataFrame:
        file_path = self.data_dir / name
        if not file_path.exists():
            raise DataIntegrityError(f"Embedded data file missing: {file_path}")

        if self.verify:
            digest = self.checksum(name)
            if digest != CHECKSUMS[name]:
                raise DataIntegrityError(f"Checksum mismatch for {name}: {digest}")

        df = pd.read_csv(file_path)
        if list(df.columns) != COLUMNS[name]:
            raise DataIntegrityError(f"Unexpected columns in {name}: {list(df.columns)}")
        logger.info(f"Loaded {len(df)} rows from {name}")
        return df

    def load_estimate_points(self) -> pd.DataFrame:
        return self._load(ESTIMATE_POINTS_FILE)

    def load_state_table(self) -> pd.DataFrame:
        return self._load(STATE_TABLE_FILE)
