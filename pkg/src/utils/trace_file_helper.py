# trace_file_helper.py
from typing import Optional, Sequence

import pandas as pd


class TraceFileHelper:
    """Loads a 0/1 trace from CSV: one column per variable, one row per position."""

    def __init__(self, csv_path: str, required_columns: Sequence[str], df: Optional[pd.DataFrame] = None):
        if df is None:
            df = pd.read_csv(csv_path, comment="#", skipinitialspace=True)
        df.columns = [str(c).strip() for c in df.columns]

        missing = [c for c in required_columns if c not in df.columns]
        if missing:
            raise ValueError(f"CSV is missing required columns: {missing}")
        if df.empty:
            raise ValueError("CSV trace has no rows; traces must be non-empty.")

        subset = df[list(required_columns)]
        valid = subset.isin([0, 1]).all(axis=0)
        bad_columns = [c for c, ok in valid.items() if not ok]
        if bad_columns:
            raise ValueError(f"Columns {bad_columns} must contain only 0 and 1.")

        self.csv_path = csv_path
        self.required_columns = list(required_columns)
        self.df = subset.astype(int).reset_index(drop=True)

    @classmethod
    def from_frame(cls, df: pd.DataFrame, required_columns: Sequence[str]) -> "TraceFileHelper":
        return cls("<frame>", required_columns, df=df.copy())

    @staticmethod
    def read_columns(csv_path: str) -> list[str]:
        header = pd.read_csv(csv_path, comment="#", skipinitialspace=True, nrows=0)
        return [str(c).strip() for c in header.columns]

    @property
    def length(self) -> int:
        return len(self.df)

    def get_rows(self) -> list[dict[str, bool]]:
        return [{c: bool(v) for c, v in row.items()} for row in self.df.to_dict(orient="records")]
