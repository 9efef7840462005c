'''Settings for pbwcrystal runs and the datum file schema.'''
from __future__ import annotations
from typing import List, Literal, Optional
from pydantic import BaseModel, ConfigDict, Field, conint, field_validator, model_validator
import re
import yaml

Node = conint(ge=1)
Count = conint(ge=0)

SUITES = ('rank2', 'transport', 'bracket-agreement', 'crystal-axioms', 'convexity')
_TARGET = re.compile(r'^[A-Fa-f]\d+$')


# ---------- Search ----------
class SearchParameters(BaseModel):
    model_config = ConfigDict(extra='forbid')
    node_cap: conint(ge=1) = 1_000_000  # states visited by the simply braided search


# ---------- Verification ----------
class VerificationParameters(BaseModel):
    model_config = ConfigDict(extra='forbid')
    seed: int = 42
    samples: conint(ge=1) = 1000
    random_samples: conint(ge=1) = 10_000  # data per type once the exhaustive sweep is over the cap
    max_count: conint(ge=0) = 2  # exhaustive bound on every count
    exhaustive_cap: conint(ge=1) = 1_000_000
    random_max_count: conint(ge=0) = 6
    rank2_bound: conint(ge=0) = 8
    workers: conint(ge=1) = 1
    targets: List[str] = Field(default_factory=lambda: ['A2', 'A3', 'A4', 'B2', 'B3', 'C2', 'C3', 'D4'])

    @field_validator('targets')
    @classmethod
    def _targets_look_like_types(cls, targets: List[str]) -> List[str]:
        bad = [t for t in targets if not _TARGET.match(t)]
        if bad:
            raise ValueError(f'targets must look like "B3", got {bad}')
        return [t.upper() for t in targets]


# ---------- Output ----------
class OutputParameters(BaseModel):
    model_config = ConfigDict(extra='forbid')
    graph_format: Literal['dot', 'json'] = 'dot'
    report_path: Optional[str] = None


# ---------- Root ----------
class RootConfig(BaseModel):
    model_config = ConfigDict(extra='forbid')
    Search_Parameters: SearchParameters = Field(default_factory=SearchParameters)
    Verification_Parameters: VerificationParameters = Field(default_factory=VerificationParameters)
    Output_Parameters: OutputParameters = Field(default_factory=OutputParameters)


def load_config(path=None) -> RootConfig:
    '''Validated configuration; defaults when no path is given.'''
    if path is None:
        return RootConfig()
    if not (str(path).endswith(".yaml") or str(path).endswith(".yml")):
        raise ValueError("Unsupported config file format. Use .yaml")
    with open(path) as f:
        return RootConfig.model_validate(yaml.safe_load(f) or {})


# ---------- Datum files ----------
class DatumRecord(BaseModel):
    '''Serialized Lusztig datum: counts aligned with the convex order of ``word``.'''
    model_config = ConfigDict(extra='forbid')
    type: Literal['A', 'B', 'C', 'D', 'E', 'F']
    rank: conint(ge=1)
    word: List[Node]
    counts: List[Count]

    @field_validator('type', mode='before')
    @classmethod
    def _upper_type(cls, v):
        return v.upper() if isinstance(v, str) else v

    @model_validator(mode='after')
    def _counts_match_word(self):
        if len(self.counts) != len(self.word):
            raise ValueError(f'{len(self.counts)} counts for a word of length {len(self.word)}')
        if any(i > self.rank for i in self.word):
            raise ValueError(f'word uses a node above rank {self.rank}')
        return self
