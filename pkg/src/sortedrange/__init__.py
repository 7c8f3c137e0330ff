"""Sorted orthogonal range reporting: range successor, online sorted reporting
in one-, three- and four-sided ranges, and their text and geometry uses."""
from .core import (EmptyInputError, Point, PointFileError, QueryRect, RankSpaceMap, dominates,
                   make_points, oracle_maximal, oracle_report_sorted, oracle_successor,
                   oracle_visible, parse_points, rank_space_reduce, read_points, reduce_query)
from .geometry import maximal_points, rectangularly_visible
from .index import PointIndex, RunConfig, build_point_index
from .optimal import Optimal2DIndex, build_optimal, node_three_sided, sorted_report_2d
from .persist import IndexFormatError, dumps, load, loads, save
from .primitives import PredecessorSet, RangeMinMax, RankBitVector, pred_succ, rmq_build, rmq_query
from .rangetree import CompactRangeTree, ConfigError, NodeRef, build_tree
from .stream import ProbeBatch, ProbeStats, SortedIterator, online_collect
from .successor import SuccessorIndex, build_successor_index, range_successor, sorted_iter
from .text import (PatternRange, TextIndex, build_text_index, dont_care_match,
                   non_overlapping_sequence, ordered_occurrences, ordered_occurrences_rmq,
                   pattern_range, position_restricted, successive_list_index)
from .threesided import (LOWER, UPPER, OneSidedIndex, ThreeSidedIndex, build_three_sided,
                         hinted_one_sided_iter, one_sided_iter, three_sided_iter)

__version__ = "0.1.0"
