"""Simulated sticker-automaton DNA model checking of basic CTL constructs."""

from .automata import accepts_run, accepts_valuations, build_formula_fsa, fsa_accepts, relabel
from .checker import (check_ctl, check_existential, check_path, check_universal, compute_bound,
                      count_runs, cross_validate, enumerate_runs, m1_path, tl_mc_dna)
from .core import (DnaStrand, FormulaFsa, Letter, Literal, Orientation, RunPath, SystemModel,
                   letter_for, make_model, validate_model)
from .encoding import (REFERENCE_TABLE, ClassIILibrary, CodeTable, audit_code_table, decode_run_strand,
                       encode_formula_fsa, encode_run, generate_code_table, wc_complement)
from .frontend import (CtlConstruct, Kind, LtlObligation, Obligation, Quantifier, classify,
                       parse_formula, parse_model, reduce, render)
from .hybridization import Readout, TilingResult, decode_tiling, enumerate_groups, readout, tile
from .oracle import Verdict, oracle_check, word_satisfies

__version__ = "0.1.0"
