# lazydet/engine.py
"""Layered, lazy decision of accepting components and the resulting
probability.

Every bottom SCC (chain) or maximal end component (MDP) of M × S is
decided by the cheapest layer that is conclusive:

    subset  ->  breakpoint  ->  multi-breakpoint (or local Rabin)

and the probability of the specification is the probability of reaching
the accepting ones, computed on M × S itself.
"""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Set, Tuple, Union

import numpy as np

from .automata import AcceptanceKind, DeterministicAutomaton, NGBA, states_of
from .breakpoint import (BreakpointState, breakpoint_step, canonical_states,
                         classify_component_breakpoint)
from .config import config
from .exceptions import InputError
from .ght import RabinDeterminisation, ght_initial
from .graph import Component, prob1_reach, safe_states
from .ltl import Ltl, Not, parse_ltl, translate_ltl_to_ngba
from .models import MarkovModel
from .product import ProductModel, accepting_components, component_product, product, product_subset
from .solvers import reach_probability_max_mdp, reach_probability_mc
from .statistics import LayerStatistics
from .subset import SubsetAutomaton, Verdict, classify_component_subset

logger = logging.getLogger(__name__)

ModelState = Tuple[int, int]


class Layer(Enum):
    SUBSET = 'subset'
    BREAKPOINT = 'breakpoint'
    MULTIBREAKPOINT = 'multibreakpoint'
    RABIN = 'rabin'


@dataclass
class ComponentVerdict:
    component_id: int
    states: FrozenSet[int]
    verdict: Verdict
    decided_by: Layer
    witness: Optional[Tuple[int, BreakpointState]] = None
    from_cache: bool = False
    attempts: List[ModelState] = field(default_factory=list)
    eliminated: List[ModelState] = field(default_factory=list)

    @property
    def accepting(self) -> bool:
        return self.verdict is Verdict.ACCEPTING


@dataclass
class CheckResult:
    probability: float
    mode: str
    layers: Dict[str, int]
    components: int
    states_explored: int
    verdicts: List[ComponentVerdict] = field(default_factory=list)
    values: Optional[np.ndarray] = None
    statistics: Optional[LayerStatistics] = None

    def to_dict(self) -> Dict:
        return {
            'probability': self.probability,
            'mode': self.mode,
            'layers': dict(self.layers),
            'components': self.components,
            'states_explored': self.states_explored,
        }


@dataclass
class MultiBreakpointOutcome:
    accepting: bool
    witness: Optional[Tuple[int, BreakpointState]] = None
    attempts: List[ModelState] = field(default_factory=list)
    eliminated: List[ModelState] = field(default_factory=list)
    explored: int = 0

    def __bool__(self) -> bool:
        return self.accepting


def _region(components: List[Component]) -> Set[int]:
    found: Set[int] = set()
    for component in components:
        found |= component.states
    return found


def decide_multibreakpoint_mc(subset_product: ProductModel, component: Component,
                              ngba: NGBA) -> MultiBreakpointOutcome:
    """Try breakpoint runs seeded with single NGBA states.

    The component is accepting iff for some (m, R) in it and q in R the run
    from (m, ({q},1,∅)) reaches an accepting bottom SCC almost surely."""
    step = breakpoint_step(ngba)
    outcome = MultiBreakpointOutcome(False)
    for s in canonical_states(subset_product, component.states):
        m, reached = subset_product.states[s]
        outcome.attempts.append((m, reached))
        for q in states_of(reached):
            seed = BreakpointState(1 << q, 1, 0)
            local = component_product(subset_product, s, seed, step)
            outcome.explored += local.num_states
            target = _region(accepting_components(local, pairs=[0]))
            if target and set(local.initial) <= prob1_reach(local.graph(), target):
                outcome.accepting = True
                outcome.witness = (m, seed)
                return outcome
    return outcome


def decide_multibreakpoint_mdp(subset_product: ProductModel, component: Component,
                               ngba: NGBA) -> MultiBreakpointOutcome:
    """Seeded breakpoint runs inside a MEC, shrinking it after every failure.

    A start (m, R) that fails lies in no accepting end component, so it is
    dropped together with every state that cannot avoid it."""
    step = breakpoint_step(ngba)
    graph = subset_product.graph()
    outcome = MultiBreakpointOutcome(False)
    allowed = set(component.states)
    enabled = dict(component.enabled)
    for s in canonical_states(subset_product, component.states):
        if s not in allowed:
            continue
        m, reached = subset_product.states[s]
        outcome.attempts.append((m, reached))
        for q in states_of(reached):
            seed = BreakpointState(1 << q, 1, 0)
            local = component_product(subset_product, s, seed, step, enabled)
            outcome.explored += local.num_states
            if accepting_components(local, pairs=[0]):
                outcome.accepting = True
                outcome.witness = (m, seed)
                return outcome
        region, staying = safe_states(graph, allowed - {s}, enabled)
        outcome.eliminated.extend(subset_product.states[t]
                                  for t in canonical_states(subset_product, allowed - region))
        allowed, enabled = region, staying
        if not allowed:
            break
    return outcome


def decide_rabin_local(subset_product: ProductModel, component: Component, ngba: NGBA) -> MultiBreakpointOutcome:
    """Rabin product restricted to the component, seeded from its first (m, R)"""
    start = canonical_states(subset_product, component.states)[0]
    m, reached = subset_product.states[start]
    determinisation = RabinDeterminisation(ngba, ght_initial(ngba, reached))
    local = component_product(subset_product, start, determinisation.initial_tree,
                              determinisation.successor, component.enabled)
    accepting = bool(accepting_components(local))
    return MultiBreakpointOutcome(accepting, attempts=[(m, reached)], explored=local.num_states)


class LazyModelChecker:
    """Decides the components of M × S for one NGBA, sharing caches across
    components of the same chain."""

    def __init__(self, ngba: NGBA, settings=None):
        self.ngba = ngba
        self.settings = settings or config['default']
        self.fallback = self.settings.FALLBACK
        if self.fallback not in ('multibreakpoint', 'rabin'):
            logger.warning(f"unknown fallback {self.fallback!r}, using multibreakpoint")
            self.fallback = 'multibreakpoint'
        self.subset = SubsetAutomaton(ngba)
        self.states_explored = 0
        self._lock = threading.Lock()
        self._witnesses: Set[Tuple[int, int]] = set()
        self._accepting: Dict[int, List[Tuple[int, Layer]]] = {}
        self._caching = False

    def _cached(self, subset_product: ProductModel, component: Component,
                component_id: int) -> Optional[ComponentVerdict]:
        with self._lock:
            for s in canonical_states(subset_product, component.states):
                m, reached = subset_product.states[s]
                for q in states_of(reached):
                    if (m, q) in self._witnesses:
                        return ComponentVerdict(component_id, component.states, Verdict.ACCEPTING,
                                                Layer.MULTIBREAKPOINT, (m, BreakpointState(1 << q, 1, 0)),
                                                from_cache=True)
                for mask, layer in self._accepting.get(m, ()):
                    if not mask & ~reached:
                        return ComponentVerdict(component_id, component.states, Verdict.ACCEPTING,
                                                layer, from_cache=True)
        return None

    def _remember(self, subset_product: ProductModel, verdict: ComponentVerdict) -> None:
        if not verdict.accepting:
            return
        with self._lock:
            for s in verdict.states:
                m, reached = subset_product.states[s]
                self._accepting.setdefault(m, []).append((reached, verdict.decided_by))
            if verdict.witness is not None:
                m, seed = verdict.witness
                self._witnesses.add((m, states_of(seed.reached)[0]))

    def _count(self, explored: int) -> None:
        with self._lock:
            self.states_explored += explored

    def classify(self, subset_product: ProductModel, component: Component, component_id: int) -> ComponentVerdict:
        transitions = [(subset_product.states[s][1], subset_product.symbols[subset_product.states[t][0]],
                        subset_product.states[t][1])
                       for s, _, t, _ in subset_product.internal_edges(component)]
        verdict = classify_component_subset(transitions, self.subset)
        if verdict is not Verdict.UNKNOWN:
            logger.debug(f"component {component_id}: {verdict.value} by subset")
            return ComponentVerdict(component_id, component.states, verdict, Layer.SUBSET)

        if self._caching:
            cached = self._cached(subset_product, component, component_id)
            if cached is not None:
                logger.debug(f"component {component_id}: accepting from cache")
                return cached

        verdict, local = classify_component_breakpoint(subset_product, component, self.ngba)
        self._count(local.num_states)
        if verdict is not Verdict.UNKNOWN:
            result = ComponentVerdict(component_id, component.states, verdict, Layer.BREAKPOINT)
            self._remember(subset_product, result)
            return result

        if self.fallback == 'rabin':
            outcome = decide_rabin_local(subset_product, component, self.ngba)
            layer = Layer.RABIN
        elif subset_product.is_mdp:
            outcome = decide_multibreakpoint_mdp(subset_product, component, self.ngba)
            layer = Layer.MULTIBREAKPOINT
        else:
            outcome = decide_multibreakpoint_mc(subset_product, component, self.ngba)
            layer = Layer.MULTIBREAKPOINT
        self._count(outcome.explored)
        result = ComponentVerdict(component_id, component.states,
                                  Verdict.ACCEPTING if outcome else Verdict.REJECTING, layer,
                                  outcome.witness, attempts=outcome.attempts, eliminated=outcome.eliminated)
        logger.debug(f"component {component_id}: {result.verdict.value} by {layer.value}")
        self._remember(subset_product, result)
        return result

    def compute_accepting_components(self, model: MarkovModel) -> Tuple[ProductModel, List[ComponentVerdict]]:
        subset_product = product_subset(model, self.ngba, self.subset)
        self.states_explored = subset_product.num_states
        self._caching = bool(self.settings.USE_CACHE) and not model.is_mdp
        components = subset_product.components()
        logger.info(f"subset product: {subset_product.num_states} states, {len(components)} components")

        order = sorted(range(len(components)), key=lambda i: (len(components[i]), components[i].anchor))
        if self.settings.THREADS > 1 and len(order) > 1:
            subset_product.graph()
            with ThreadPoolExecutor(max_workers=self.settings.THREADS) as pool:
                decided = list(pool.map(lambda i: self.classify(subset_product, components[i], i), order))
        else:
            decided = [self.classify(subset_product, components[i], i) for i in order]
        verdicts = sorted(decided, key=lambda v: v.component_id)
        return subset_product, verdicts

    def check(self, model: MarkovModel) -> CheckResult:
        subset_product, verdicts = self.compute_accepting_components(model)
        target: Set[int] = set()
        for verdict in verdicts:
            if verdict.accepting:
                target |= verdict.states
        values = _solve(subset_product, target, self.settings)
        statistics = LayerStatistics([layer.value for layer in Layer])
        for verdict in verdicts:
            statistics.record(verdict.component_id, len(verdict.states), verdict.verdict.value,
                              verdict.decided_by.value, verdict.from_cache)
        return CheckResult(_initial_value(subset_product, values), 'max' if model.is_mdp else 'exact',
                           statistics.layer_counts(), len(verdicts), self.states_explored, verdicts, values,
                           statistics)


def _solve(system: ProductModel, target: Set[int], settings) -> np.ndarray:
    if system.is_mdp:
        return reach_probability_max_mdp(system, target, settings)
    return reach_probability_mc(system, target, settings)


def _initial_value(system: ProductModel, values: np.ndarray) -> float:
    total = sum(p * values[s] for s, p in system.initial.items())
    return float(min(max(total, 0.0), 1.0))


def compute_accepting_components(model: MarkovModel, ngba: NGBA, settings=None) -> List[ComponentVerdict]:
    return LazyModelChecker(ngba, settings).compute_accepting_components(model)[1]


def check_rabin_oracle(model: MarkovModel, ngba: NGBA, settings=None) -> CheckResult:
    """Full M ⊗ det(B) with the Rabin acceptance evaluated directly"""
    return check_deterministic(model, RabinDeterminisation(ngba).automaton, settings)


def check_deterministic(model: MarkovModel, automaton, settings=None) -> CheckResult:
    settings = settings or config['default']
    full = product(model, automaton)
    found = accepting_components(full)
    values = _solve(full, _region(found), settings)
    statistics = LayerStatistics([layer.value for layer in Layer])
    for index, component in enumerate(found):
        statistics.record(index, len(component), Verdict.ACCEPTING.value, Layer.RABIN.value, False)
    return CheckResult(_initial_value(full, values), 'max' if model.is_mdp else 'exact',
                       statistics.layer_counts(), len(full.components()), full.num_states, [], values,
                       statistics)


def model_check(model: MarkovModel, spec: Union[Ltl, str, NGBA, DeterministicAutomaton], mode: str = 'lazy',
                settings=None, optimize: Optional[str] = None) -> CheckResult:
    """Probability that the model satisfies the specification.

    For MDPs the result is the maximum over schedulers, or the minimum when
    `optimize='min'` (computed as 1 - max of the negated formula)."""
    settings = settings or config['default']
    if mode not in ('lazy', 'rabin-oracle'):
        raise InputError(f"unknown engine mode {mode!r}")
    if optimize not in (None, 'max', 'min'):
        raise InputError(f"unknown optimisation direction {optimize!r}")
    if isinstance(spec, str):
        spec = parse_ltl(spec)

    if optimize == 'min' and model.is_mdp:
        if not isinstance(spec, Ltl):
            raise InputError("minimal probabilities need an LTL specification")
        negated = model_check(model, Not(spec), mode, settings, 'max')
        negated.probability = float(min(max(1.0 - negated.probability, 0.0), 1.0))
        negated.mode = 'min'
        if negated.values is not None:
            negated.values = 1.0 - negated.values
        return negated

    if isinstance(spec, DeterministicAutomaton):
        if mode == 'rabin-oracle' or spec.kind is not AcceptanceKind.BUCHI:
            return check_deterministic(model, spec, settings)
        spec = spec.as_ngba()

    ngba = spec if isinstance(spec, NGBA) else translate_ltl_to_ngba(spec)
    if mode == 'rabin-oracle':
        result = check_rabin_oracle(model, ngba, settings)
    else:
        result = LazyModelChecker(ngba, settings).check(model)
    logger.info(f"probability {result.probability!r} ({result.mode}), layers {result.layers}")
    return result
