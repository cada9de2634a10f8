"""Per-score cut-offs that maximize distinguish-ability."""
from .core import (ScoreMatrix, SortedScoreIndex, bucket_histogram, build_sorted_index,
                   crossings, distinguishability, distinguishability_by_pairs, median_cutoffs,
                   realize_cutoffs, valid_cut_indices)
from .continuous import SmoothConfig, solve_continuous
from .data import InstanceSpec, demo_table1, generate_instance, parse_csv, to_csv
from .errors import (CapacityError, InvalidCutIndexError, NumericError, OptcutError,
                     ParseError, UndefinedMetricError)
from .greedy import solve_greedy
from .grid_search import SolveReport, solve_exact_count, solve_exact_subset, solve_min_range

__version__ = "0.1.0"
