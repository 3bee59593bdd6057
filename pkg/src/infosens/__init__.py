"""Information-theoretic sensitivity analysis of optimization run data.

Greedy conditional-MI feature selection with permutation testing, partial
information decomposition of selected pairs, classic MI ranking baselines,
nearest-neighbour validation and a synthetic blade-optimization generator.
"""

from .baselines import CRITERIA, RankingResult, rank
from .data import BinnedDataset, DataError, Dataset, bin_dataset, bin_equal_frequency, emit_csv, load_csv
from .estimators import KsgConfig, MiEstimate, digamma, discrete_cmi, discrete_mi, entropy, ksg_cmi, ksg_mi
from .pid import JointPmf, PidResult, SynergyMatrix, pid_decompose, specific_information, synergy_matrix
from .selection import SelectionResult, select_features
from .stats import PermTestConfig, TestOutcome, max_stat_test
from .validation import ComparisonTable, HoldoutProtocol, compare_selectors, knn_predict, mae

__version__ = "0.1.0"

__all__ = [
    "CRITERIA", "BinnedDataset", "ComparisonTable", "DataError", "Dataset", "HoldoutProtocol", "JointPmf",
    "KsgConfig", "MiEstimate", "PermTestConfig", "PidResult", "RankingResult", "SelectionResult",
    "SynergyMatrix", "TestOutcome", "bin_dataset", "bin_equal_frequency", "compare_selectors", "digamma",
    "discrete_cmi", "discrete_mi", "emit_csv", "entropy", "knn_predict", "ksg_cmi", "ksg_mi", "load_csv",
    "mae", "max_stat_test", "pid_decompose", "rank", "select_features", "specific_information",
    "synergy_matrix",
]
