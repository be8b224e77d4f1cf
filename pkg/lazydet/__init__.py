# lazydet/__init__.py
from .automata import (Alphabet, NGBA, AcceptanceKind, RabinMark, DeterministicAutomaton,
                       LazyDeterministicAutomaton, LassoWord, lasso_member_ngba, lasso_run_deterministic,
                       lasso_run_marks)
from .hoa import hoa_parse, hoa_emit
from .ltl import LtlFormula, parse_ltl, to_string, to_nnf, translate_ltl_to_ngba, eval_ltl_on_lasso
from .subset import SubsetAutomaton, Verdict, build_subset, classify_component_subset
from .breakpoint import (BreakpointState, BreakpointAutomaton, bp_successor, build_breakpoint,
                         classify_component_breakpoint)
from .ght import GHT, ght_initial, ght_successor, RabinDeterminisation, determinise_rabin
from .semidet import SemiDetAutomaton, ParityState, build_semidet, parity_successor, determinise_parity
from .models import MarkovChain, MDP, parse_model, load_model
from .product import ProductModel, product, product_subset, accepting_components
from .graph import TransitionGraph, Component, tarjan_sccs, bsccs, mecs
from .solvers import reach_probability_mc, reach_probability_max_mdp
from .engine import (ComponentVerdict, CheckResult, Layer, LazyModelChecker, compute_accepting_components,
                     decide_multibreakpoint_mc, decide_multibreakpoint_mdp, decide_rabin_local,
                     check_rabin_oracle, model_check)
from .config import config
from .exceptions import (ModelCheckingError, InputError, HoaSyntaxError, UnsupportedAutomatonError,
                         LtlSyntaxError, ModelFormatError, AlphabetError, ConvergenceError)

__all__ = [
    # Automata
    'Alphabet',
    'NGBA',
    'AcceptanceKind',
    'RabinMark',
    'DeterministicAutomaton',
    'LazyDeterministicAutomaton',
    'LassoWord',
    'lasso_member_ngba',
    'lasso_run_deterministic',
    'lasso_run_marks',
    'hoa_parse',
    'hoa_emit',

    # LTL
    'LtlFormula',
    'parse_ltl',
    'to_string',
    'to_nnf',
    'translate_ltl_to_ngba',
    'eval_ltl_on_lasso',

    # Constructions
    'SubsetAutomaton',
    'Verdict',
    'build_subset',
    'classify_component_subset',
    'BreakpointState',
    'BreakpointAutomaton',
    'bp_successor',
    'build_breakpoint',
    'classify_component_breakpoint',
    'GHT',
    'ght_initial',
    'ght_successor',
    'RabinDeterminisation',
    'determinise_rabin',
    'SemiDetAutomaton',
    'ParityState',
    'build_semidet',
    'parity_successor',
    'determinise_parity',

    # Models and products
    'MarkovChain',
    'MDP',
    'parse_model',
    'load_model',
    'ProductModel',
    'product',
    'product_subset',
    'accepting_components',

    # Graph analysis
    'TransitionGraph',
    'Component',
    'tarjan_sccs',
    'bsccs',
    'mecs',

    # Engine
    'reach_probability_mc',
    'reach_probability_max_mdp',
    'ComponentVerdict',
    'CheckResult',
    'Layer',
    'LazyModelChecker',
    'compute_accepting_components',
    'decide_multibreakpoint_mc',
    'decide_multibreakpoint_mdp',
    'decide_rabin_local',
    'check_rabin_oracle',
    'model_check',

    # Settings and errors
    'config',
    'ModelCheckingError',
    'InputError',
    'HoaSyntaxError',
    'UnsupportedAutomatonError',
    'LtlSyntaxError',
    'ModelFormatError',
    'AlphabetError',
    'ConvergenceError',
]

__version__ = "1.0.0"
__author__ = "lazydet developers"
__description__ = "Probabilistic model checking of Markov chains and MDPs by lazy determinisation"
