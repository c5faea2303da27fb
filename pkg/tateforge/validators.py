"""
Input validation for command runs.
Provides Pydantic models for run configuration and range parsing.
"""

import re
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, conint, constr, field_validator

from tateforge.config import settings

RANGE_PATTERN = re.compile(r"^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$")

# Size guards
MIN_MAX_DEGREE = 8
MIN_WINDOW = 3
MAX_Q_INDEX = 8


def parse_range(text: str) -> Tuple[int, int]:
    """Parse 'A..B' into an inclusive (A, B) pair."""
    match = RANGE_PATTERN.match(text or "")
    if not match:
        raise ValueError(f"expected a range like 0..5, got {text!r}")
    lo, hi = int(match.group(1)), int(match.group(2))
    if hi < lo:
        raise ValueError(f"range {text!r} is empty")
    return lo, hi


class RunConfig(BaseModel):
    """Validated command-line configuration shared by every command"""

    model_config = ConfigDict(extra='forbid', frozen=True)

    command: constr(pattern="^(margolis|ext|tate-e3|hfp-e3|tower|chromatic|catalog|hochschild)$")
    space: Optional[str] = Field(None, description="Space id such as y2, hz, thhy1, tp1_3")
    n: Optional[int] = Field(None, description="Chromatic height; None with n_inf means n = infinity")
    n_inf: bool = Field(False, description="Use the THH(HF_2) model (n = infinity)")
    m: Optional[conint(ge=0, le=MAX_Q_INDEX)] = Field(None, description="Milnor primitive index")
    m_max: conint(ge=0, le=MAX_Q_INDEX) = Field(4, description="Largest m in chromatic tables")
    s_max: conint(ge=1, le=64) = Field(6, description="Largest Ext / bar length")
    columns: Optional[Tuple[int, int]] = Field(None, description="Inclusive column range")
    i_range: Optional[Tuple[int, int]] = Field(None, description="Inclusive truncation range")
    side: constr(pattern="^(tp|tcminus)$") = Field("tp", description="Tower side")
    algebra: Optional[constr(pattern="^(y1|z1sq|ext1|f2)$")] = Field(None, description="Bar oracle input")
    max_degree: int = Field(default_factory=lambda: settings.default_max_degree, description="Internal degree cap N")
    window: int = Field(default_factory=lambda: settings.default_window, description="Column window for Tate pages")
    format: constr(pattern="^(json|tsv|text)$") = Field("text", description="Output format")
    output: Optional[str] = Field(None, description="Output path; stdout when omitted")

    @field_validator('max_degree')
    @classmethod
    def validate_max_degree(cls, v):
        if v < MIN_MAX_DEGREE:
            raise ValueError(f'max_degree must be at least {MIN_MAX_DEGREE}')
        return v

    @field_validator('window')
    @classmethod
    def validate_window(cls, v):
        if v < MIN_WINDOW:
            raise ValueError(f'window must be at least {MIN_WINDOW} columns')
        return v

    @field_validator('n')
    @classmethod
    def validate_n(cls, v):
        if v is not None and v < 0:
            raise ValueError('n must be non-negative')
        return v

    @field_validator('columns', 'i_range', mode='before')
    @classmethod
    def validate_range(cls, v):
        if isinstance(v, str):
            return parse_range(v)
        return v

    def to_dict(self) -> dict:
        data = self.model_dump(exclude={'output'})
        if self.n_inf:
            data['n'] = 'inf'
        data.pop('n_inf', None)
        return data
