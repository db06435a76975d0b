"""Data Transfer Objects for CSV output tables."""
from typing import Union

from pydantic import BaseModel, Field, model_validator

Cell = Union[bool, int, float, str]

FLOAT_FORMAT = "%.12e"


def format_cell(value: Cell) -> str:
    """Floats as %.12e, integers and booleans as integers, text quoted when it holds a separator."""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    text = str(value)
    if any(ch in text for ch in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


class Table(BaseModel):
    """A CSV table with a fixed header; ``name`` is the file suffix, empty for the main table."""
    name: str = Field("", description="Secondary-table suffix of the output file name")
    columns: list[str] = Field(..., description="Header row", min_length=1)
    rows: list[list[Cell]] = Field(default_factory=list, description="Rows in output order")

    class Config:
        json_schema_extra = {
            "example": {
                "name": "",
                "columns": ["mode", "frequency", "is_cm"],
                "rows": [[0, 1.0, True], [1, 3.162277660168, False]]
            }
        }

    @model_validator(mode="after")
    def check_widths(self) -> 'Table':
        width = len(self.columns)
        for index, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"row {index} has {len(row)} cells, header has {width}")
        return self

    def column(self, name: str) -> list[Cell]:
        position = self.columns.index(name)
        return [row[position] for row in self.rows]

    def to_csv(self) -> str:
        lines = [",".join(format_cell(name) for name in self.columns)]
        lines.extend(",".join(format_cell(cell) for cell in row) for row in self.rows)
        return "\n".join(lines) + "\n"
