"""Multiway (nondeterministic) Turing machines: simulation, multiway /
branchial / causal structure, finite-tape confluence, and rule-space
censuses."""

from .errors import (DepthInsufficientError, InvalidConfigurationError,
                     MwtmError, NonComposablePathError, ResourceLimitError,
                     RuleFormatError)
from .machine import (BLANK, BLANK_CONFIG, LEFT, RIGHT, Case, Configuration,
                      Rule, applicable_cases, apply_case, canonical_hash,
                      config_sort_key, describe, is_halted, make_config,
                      make_rule, step, successors)
from .rulespace import (Case, RuleClass, RuleId, all_cases, bitmask_of,
                        case_index, classify, enumerate_rules, format_rule,
                        index_to_case, parse_rule, reflect, reflect_bitmask,
                        rule_from_bitmask, rule_id_of, universe_size)
from .multiway import (BranchialGraph, MultiwayGraph, PathWeights, TapeStack,
                       TerminationClass, averaged_overlay, branchial, build,
                       extend, head_weight_distribution, path_weights,
                       state_count_sequence, tape_stack, termination_class)
from .causal import (CausalGraph, ConfluenceVerdict, Event,
                     causal_graph, causal_invariance_sample,
                     confluence_bounded, events, path_causal_graph,
                     sample_paths)
from .finite_tape import (CYCLIC, REFLECTING, ConfluenceCell, Digraph,
                          FiniteConfig, StateTransitionGraph, build_stg,
                          cayley_oracle_tm12, confluence_table, confluent_blank,
                          confluent_from, evolution_graph, fully_confluent,
                          is_vertex_transitive, isomorphic, rulial_graph,
                          rulial_rule, state_space_size)
from .census import (BBCensus, BraidPeriod, CensusRecord, SurvivalCensus,
                     detect_period, explore_rule, find_sequence, growth_base,
                     growth_census, halting_distributions, k1_period_census,
                     multiway_bb_census, simulate_deterministic,
                     survival_census)
from .artifacts import (Coord, GraphDocument, assign_multispace, document,
                        export_graph, export_raster, import_graph, render,
                        tape_numeral)

__version__ = "0.1.0"
