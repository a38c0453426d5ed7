import argparse
import enum
import json
import random
from decimal import Decimal, ROUND_HALF_UP
from fractions import Fraction
from pathlib import Path
from typing import List, Dict, Callable, Any, TypeVar

import numpy as np
from dotmap import DotMap

T = TypeVar('T')


class AssessmentJSONEncoder(json.JSONEncoder):
    def default(self, data_object: Any) -> Any:
        if isinstance(data_object, Path):
            return str(data_object.as_posix())
        elif isinstance(data_object, enum.Enum):
            return data_object.value
        elif isinstance(data_object, np.ndarray):
            return data_object.tolist()
        elif isinstance(data_object, np.generic):
            return data_object.item()
        elif isinstance(data_object, Fraction):
            return str(data_object)
        elif isinstance(data_object, DotMap):
            return data_object.toDict()
        else:
            return super().default(data_object)


def set_random_seed(seed: int) -> np.random.Generator:
    random.seed(seed)
    return np.random.default_rng(seed)


def round_half_away(value: float, digits: int = 2) -> float:
    # Goes through the shortest decimal repr, so 1.005 rounds to 1.01 as printed by hand
    quantum = Decimal(1).scaleb(-digits)
    return float(Decimal(str(float(value))).quantize(quantum, rounding=ROUND_HALF_UP))


def parse_list(text: str, cast: Callable[[str], T]) -> List[T]:
    items = [item.strip() for item in text.split(',') if item.strip()]
    if len(items) == 0:
        raise argparse.ArgumentTypeError(f'Expected a comma separated list, got "{text}".')

    try:
        return [cast(item) for item in items]
    except ValueError as error:
        raise argparse.ArgumentTypeError(f'Invalid list "{text}": {error}.')


def dump_args_to_file(args: argparse.Namespace, filepath: Path) -> None:
    args_dict = {key: value for key, value in vars(args).items() if not callable(value)}
    filepath.mkdir(parents=True, exist_ok=True)
    with open(filepath / 'args.json', 'w') as file:
        json.dump(args_dict, file, indent=2, cls=AssessmentJSONEncoder)


def load_args_from_file(filepath: Path) -> Dict[str, Any]:
    with open(filepath / 'args.json', 'r') as file:
        args = json.load(file)

    return args
