"""Utility modules for ergolab."""

from .config import config, Config
from .result_store import ResultStore, to_jsonable, parse_number
from .parallel import parallel_map
