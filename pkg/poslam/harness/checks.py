"""
Property Checks - 性質検査のスイートとその実行

各スイートはコーパス (タグ付きの項の列) と、一つの項に対する検査関数の組。
検査関数は Outcome のリストを返し、CheckRunner が性質ごとに CheckReport へ集計する。
"""

import logging
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from ..errors import PoslamError, TermError, TransformError
from ..positive import E_PLUS, EME_PLUS, GC_PLUS, M_PLUS, OXPOS
from ..simple_types import canonical_type, infer_type_positive, infer_type_vsc, type_to_str
from ..syntax import (
    FV_ALL, FV_APPLIED, FV_OPEN, FreshSupply, Term, Var,
    all_names, alpha_eq, alpha_key, evaluation_context, free_vars, is_explicit_positive,
    is_positive, open_subterms, plug, rename, spine, uniquify_binders,
)
from ..translate import subst_ctx_of, translate, translate_subst_ctx
from ..vsc import (
    E_ABS, E_VAR, GC_ABS, GC_VAR, M, VSC, VSC_CORE, Usefulness,
    apply_redex, classify_usefulness, context_class, context_class_structural,
    enumerate_redexes, enumerate_useful_alt, is_core_normal,
)
from .generators import CLOSED_VSC, ENUMERATE, POSITIVE, RANDOM, XPOSITIVE, gen_terms
from .graph import ReductionGraph
from .report import CheckReport
from .strategies import Reducer, Strategy, Trace, run_strategy, validate_trace
from .transforms import core_prefix_length, factorize_core, postpone_gc, simulate_core

logger = logging.getLogger(__name__)

NONDIAMOND_WITNESS = "(x z)[x <- y][y <- \\w. w]"
TRICKY_FACTORIZATION = "(x t)[x <- y][y <- \\z. u]"

CorpusItem = Tuple[str, Term]


@dataclass(frozen=True)
class Outcome:
    """一つの検査事例の結果"""
    property: str
    ok: bool
    witness: Optional[Term] = None
    skipped: bool = False
    skip_limit: Optional[float] = None


def _show(t: Term) -> str:
    from ..cli.printer import print_term
    return print_term(t)


def _item_seed(params: Dict[str, Any], index: int) -> int:
    return params['seed'] * 1000003 + index


def _random_trace(t: Term, reducer: Reducer, params: Dict[str, Any], index: int, length: int) -> Trace:
    return run_strategy(t, reducer, Strategy('random', seed=_item_seed(params, index)), length)


def _reduct_keys(reducer: Reducer, t: Term) -> set:
    return {alpha_key(u) for _, u in reducer.reducts(t)}


# ---------------------------------------------------------------------------
# コーパス
# ---------------------------------------------------------------------------

def _enumerated(grammar: str, params: Dict[str, Any]) -> List[CorpusItem]:
    size = params['size']
    if grammar in (POSITIVE, XPOSITIVE) and size > params['positive_enum_size']:
        # 正の文法は置換の中身も数えるので、列挙は小さい大きさまで。大きい項は乱数生成で補う
        size = params['positive_enum_size']
        logger.info("%s: enumeration size capped at %d", grammar, size)
    return [('enum', t) for t in gen_terms(ENUMERATE, grammar, size)]


def _random(grammar: str, params: Dict[str, Any], tag: str = 'random') -> List[CorpusItem]:
    terms = gen_terms(RANDOM, grammar, params['random_size'], params['seed'], params['count'])
    return [(tag, t) for t in terms]


def _fixed(tag: str, text: str) -> CorpusItem:
    from ..cli.parser import parse_term
    return tag, parse_term(text)


# ---------------------------------------------------------------------------
# 構文
# ---------------------------------------------------------------------------

def check_syntax(index: int, tag: str, t: Term, params: Dict[str, Any]) -> List[Outcome]:
    out = []
    fv_all, fv_open, fv_applied = free_vars(t, FV_ALL), free_vars(t, FV_OPEN), free_vars(t, FV_APPLIED)
    out.append(Outcome('fv-inclusion', fv_applied <= fv_open <= fv_all, t))

    names = sorted(t.fv)
    if names:
        x, y = names[0], names[-1] if len(names) > 1 else 'v'
        out.append(Outcome('rename-congruence',
                           alpha_eq(rename(t, x, y), rename(uniquify_binders(t), x, y)), t))

    out.append(Outcome('grammar-inclusion', not is_positive(t) or is_explicit_positive(t), t))
    if is_explicit_positive(t):
        ctx, head = evaluation_context(t)
        out.append(Outcome('decompose-plug', alpha_eq(plug(ctx, Var(head)), t), t))
    return out


def check_roundtrip(index: int, tag: str, t: Term, params: Dict[str, Any]) -> List[Outcome]:
    from ..cli.parser import parse_term
    return [Outcome('parse-print-roundtrip', alpha_eq(parse_term(_show(t)), t), t)]


# ---------------------------------------------------------------------------
# VSC
# ---------------------------------------------------------------------------

def check_usefulness(index: int, tag: str, t: Term, params: Dict[str, Any]) -> List[Outcome]:
    out = []
    for path, _ in open_subterms(t):
        out.append(Outcome('classifier-agreement', context_class(t, path) == context_class_structural(t, path), t))
    for r in enumerate_redexes(t):
        verdict = classify_usefulness(t, r)
        if r.label == E_ABS:
            ok = verdict in (Usefulness.USEFUL, Usefulness.NONUSEFUL)
        else:
            ok = verdict is Usefulness.UNCLASSIFIED
        out.append(Outcome('usefulness-partition', ok, t))
    out.append(Outcome('enumeration-determinism', enumerate_redexes(t) == enumerate_redexes(uniquify_binders(t)), t))
    return out


def check_alt_useful(index: int, tag: str, t: Term, params: Dict[str, Any]) -> List[Outcome]:
    by_class = {
        alpha_key(apply_redex(t, r)) for r in enumerate_redexes(t)
        if r.label == E_ABS and classify_usefulness(t, r) is Usefulness.USEFUL
    }
    by_rules = {alpha_key(apply_redex(t, r)) for r in enumerate_useful_alt(t)}
    return [Outcome('useful-alt-agreement', by_class == by_rules, t)]


def check_nondiamond(index: int, tag: str, t: Term, params: Dict[str, Any]) -> List[Outcome]:
    # 指数ステップだけの簡約グラフ (gc を含めると山は閉じる)
    graph = ReductionGraph(t, Reducer(VSC, labels=(E_ABS, E_VAR)), params['node_cap'], params['depth_cap'])
    report = graph.check_diamond()
    found = False
    for _, u1, u2 in report.violations:
        distance = graph.join_distance(alpha_key(u1), alpha_key(u2))
        if distance is not None and sorted(distance) == [1, 2]:
            found = True
    return [Outcome('nondiamond-witness', found, t)]


_VSC_LABEL_SETS = ((M,), (E_ABS, E_VAR), (GC_ABS, GC_VAR), (E_ABS, E_VAR, GC_ABS, GC_VAR))
_OXPOS_LABEL_SETS = ((M_PLUS,), (E_PLUS,), (GC_PLUS,), (E_PLUS, GC_PLUS))


def strongly_normalizing(t: Term, reducer: Reducer, node_cap: int, depth_cap: int) -> Optional[bool]:
    """
    簡約グラフ全体を展開して強正規化を判定する

    Returns:
        閉路のない有限グラフなら True、閉路があれば False、打ち切りで判定できなければ None
    """
    diverges = ReductionGraph(t, reducer, node_cap, depth_cap).diverges()
    return None if diverges is None else not diverges


def check_local_termination(index: int, tag: str, t: Term, params: Dict[str, Any]) -> List[Outcome]:
    out = []
    limit = params['skip_limit']
    targets = [(VSC, t, _VSC_LABEL_SETS), (OXPOS, translate(t), _OXPOS_LABEL_SETS)]
    for calculus, term, label_sets in targets:
        for labels in label_sets:
            name = f"local-termination[{calculus}:{'+'.join(labels)}]"
            sn = strongly_normalizing(term, Reducer(calculus, labels=labels),
                                      params['graph_check_cap'], params['depth_cap'])
            out.append(Outcome(name, bool(sn), term, skipped=sn is None, skip_limit=limit))
    return out


def check_normal_forms(index: int, tag: str, t: Term, params: Dict[str, Any]) -> List[Outcome]:
    agree = is_core_normal(t) == (not enumerate_redexes(t, VSC_CORE))
    return [Outcome('core-normal-characterization', agree, t)]


def check_preservation(index: int, tag: str, t: Term, params: Dict[str, Any]) -> List[Outcome]:
    if enumerate_redexes(t, VSC_CORE):
        return [Outcome('core-normal-preservation', True, t, skipped=True)]
    translated = translate(t)
    reducer = Reducer(OXPOS, labels=(M_PLUS, E_PLUS))
    return [Outcome('core-normal-preservation', reducer.is_normal(translated), t)]


def check_termination(index: int, tag: str, t: Term, params: Dict[str, Any]) -> List[Outcome]:
    """vsc と core、core と oxpos (変換後) で弱正規化と発散の判定が一致するか"""
    caps = (params['node_cap'], params['depth_cap'])
    vsc = ReductionGraph(t, Reducer(VSC), *caps)
    core = ReductionGraph(t, Reducer(VSC_CORE), *caps)
    positive = ReductionGraph(translate(t), Reducer(OXPOS), *caps)
    limit = params['skip_limit']

    out = []
    for name, left, right in (('vsc-core', vsc, core), ('core-oxpos', core, positive)):
        for kind in ('wn', 'divergence'):
            a = left.weakly_normalizing() if kind == 'wn' else left.diverges()
            b = right.weakly_normalizing() if kind == 'wn' else right.diverges()
            if a is None or b is None:
                out.append(Outcome(f"termination-equivalence[{name}:{kind}]", True, t, skipped=True, skip_limit=limit))
            else:
                out.append(Outcome(f"termination-equivalence[{name}:{kind}]", a == b, t, skip_limit=limit))
    return out


# ---------------------------------------------------------------------------
# 正の計算
# ---------------------------------------------------------------------------

def check_diamond(index: int, tag: str, t: Term, params: Dict[str, Any]) -> List[Outcome]:
    reducer = Reducer(OXPOS)
    reducts = reducer.reducts(t)
    out = [Outcome('oxpos-grammar', all(is_explicit_positive(u) for _, u in reducts), t)]

    distinct: Dict[str, Term] = {}
    for _, u in reducts:
        distinct.setdefault(alpha_key(u), u)
    successors = {key: _reduct_keys(reducer, u) for key, u in distinct.items()}
    for k1, k2 in combinations(sorted(distinct), 2):
        out.append(Outcome('oxpos-diamond', bool(successors[k1] & successors[k2]), t))

    if tag == 'enum':
        graph = ReductionGraph(t, reducer, params['graph_check_cap'], params['depth_cap'])
        if graph.truncated:
            out.append(Outcome('oxpos-uniform-normalization', True, t, skipped=True))
        else:
            report = graph.check_diamond()
            out.append(Outcome('oxpos-length-invariance', not report.length_violations, t))
            out.append(Outcome('oxpos-uniform-normalization', not report.uniform_violations, t))
    return out


def check_renaming(index: int, tag: str, t: Term, params: Dict[str, Any]) -> List[Outcome]:
    rng = random.Random(_item_seed(params, index))
    reducer = Reducer(OXPOS)
    reducts = reducer.reducts(t)
    names = sorted(t.fv)
    if not reducts or not names:
        return [Outcome('oxpos-renaming-stability', True, t, skipped=True)]
    _, u = rng.choice(reducts)
    x = rng.choice(names)
    y = rng.choice(names + ['v'])
    renamed = rename(t, x, y)
    target = rename(u, x, y)
    ok = any(alpha_eq(v, target) for _, v in reducer.reducts(renamed))
    return [Outcome('oxpos-renaming-stability', ok, t)]


def check_opos_simulation(index: int, tag: str, t: Term, params: Dict[str, Any]) -> List[Outcome]:
    from ..positive import apply_opos_redex, enumerate_opos_redexes
    out = []
    oxpos = Reducer(OXPOS)
    for r in enumerate_opos_redexes(t):
        u = apply_opos_redex(t, r)
        out.append(Outcome('opos-grammar', is_positive(u), t))
        if r.label != EME_PLUS:
            continue
        ok = any(
            alpha_eq(v, u)
            for r1, s in oxpos.reducts(t) if r1.label == E_PLUS
            for r2, v in oxpos.reducts(s) if r2.label == M_PLUS
        )
        out.append(Outcome('eme-decomposition', ok, t))
    return out


# ---------------------------------------------------------------------------
# 変換とシミュレーション
# ---------------------------------------------------------------------------

def check_gc_postponement(index: int, tag: str, t: Term, params: Dict[str, Any]) -> List[Outcome]:
    calculus = OXPOS if tag == OXPOS else VSC
    reducer = Reducer(calculus)
    d = _random_trace(t, reducer, params, index, params['trace_length'])
    gc = (GC_PLUS,) if calculus == OXPOS else (GC_ABS, GC_VAR)
    m, e_labels = ((M_PLUS,), (E_PLUS,)) if calculus == OXPOS else ((M,), (E_ABS, E_VAR))
    prop = f"gc-postponement[{calculus}]"
    try:
        e, f = postpone_gc(d)
        validate_trace(e, reducer)
        validate_trace(f, reducer)
    except (TransformError, TermError) as err:
        logger.info("%s failed: %s", prop, err)
        return [Outcome(prop, False, t)]
    ok = (
        e.count(*gc) == 0
        and len(f) == f.count(*gc) == d.count(*gc)
        and e.count(*m) == d.count(*m)
        and e.count(*e_labels) == d.count(*e_labels)
        and alpha_eq(f.end, d.end)
    )
    return [Outcome(prop, ok, t)]


def _tricky_trace(t: Term) -> Trace:
    """非有用な e_abs の直後に有用な e_abs を行う二歩の列"""
    reducer = Reducer(VSC)
    trace = Trace(t, calculus=VSC)
    nonuseful = next(r for r in enumerate_redexes(t)
                     if r.label == E_ABS and classify_usefulness(t, r) is Usefulness.NONUSEFUL)
    t1 = reducer.apply(t, nonuseful)
    trace.append(nonuseful, t1)
    useful = next(r for r in enumerate_redexes(t1)
                  if r.label == E_ABS and classify_usefulness(t1, r) is Usefulness.USEFUL)
    trace.append(useful, reducer.apply(t1, useful))
    return trace


def check_factorization(index: int, tag: str, t: Term, params: Dict[str, Any]) -> List[Outcome]:
    if tag == 'fixed':
        d = _tricky_trace(t)
    else:
        d = _random_trace(t, Reducer(VSC, labels=(M, E_ABS, E_VAR)), params, index, params['trace_length'])
    try:
        result = factorize_core(d)
        validate_trace(result, Reducer(VSC))
    except (TransformError, TermError) as err:
        logger.info("core-factorization failed: %s", err)
        return [Outcome('core-factorization', False, t)]
    prefix = core_prefix_length(result)
    terms = result.terms
    suffix_ok = all(
        s.redex.label == E_ABS and classify_usefulness(terms[i], s.redex) is Usefulness.NONUSEFUL
        for i, s in enumerate(result.steps) if i >= prefix
    )
    ok = suffix_ok and result.count(M) == d.count(M) and alpha_eq(result.end, d.end)
    return [Outcome('core-factorization', ok, t)]


def check_simulation(index: int, tag: str, t: Term, params: Dict[str, Any]) -> List[Outcome]:
    d = _random_trace(t, Reducer(VSC_CORE), params, index, params['core_trace_length'])
    try:
        e = simulate_core(d)
        validate_trace(e, Reducer(OXPOS))
    except (TransformError, TermError) as err:
        logger.info("core-simulation failed: %s", err)
        return [Outcome('core-simulation', False, t)]
    lower = d.count(M) + d.count(E_ABS)
    ok = (
        e.count(M_PLUS) == d.count(M)
        and lower <= len(e) <= 3 * len(d)
        and alpha_eq(e.end, translate(d.end))
    )
    return [Outcome('core-simulation', ok, t)]


def check_translation(index: int, tag: str, t: Term, params: Dict[str, Any]) -> List[Outcome]:
    out = []
    translated = translate(t)
    out.append(Outcome('translation-validity', is_explicit_positive(translated), t))

    # 置換文脈の変換との合成
    unique = uniquify_binders(t)
    whole = translate(unique, FreshSupply(all_names(unique)), uniquify=False)
    path, _ = spine(unique)
    for k in range(len(path) + 1):
        ctx, inner = subst_ctx_of(unique, path[:k])
        fresh = FreshSupply(all_names(unique))
        ct = translate_subst_ctx(ctx, fresh)
        composed = ct.plug(translate(inner, fresh, uniquify=False))
        out.append(Outcome('translation-compositionality', alpha_eq(composed, whole), t))

    # 変数の複製と回収は変換で吸収される
    for r in enumerate_redexes(t):
        if r.label in (E_VAR, GC_VAR):
            out.append(Outcome('translation-absorption', alpha_eq(translate(apply_redex(t, r)), translated), t))

    if is_positive(t):
        out.append(Outcome('translation-idempotence', alpha_eq(translated, t), t))

    names = sorted(t.fv)
    if names:
        x, y = names[0], names[-1] if len(names) > 1 else 'v'
        out.append(Outcome('translation-renaming-stability',
                           alpha_eq(translate(rename(t, x, y)), rename(translated, x, y)), t))
    return out


def check_typing(index: int, tag: str, t: Term, params: Dict[str, Any]) -> List[Outcome]:
    if tag == 'identity':
        result = infer_type_positive(translate(t))
        ok = result.typable and type_to_str(canonical_type(result.type)) == 'a => a'
        return [Outcome('typing-identity', ok, t)]
    if tag == 'selfapp':
        return [Outcome('typing-self-application', not infer_type_positive(t).typable, t)]

    source = infer_type_vsc(t)
    if not source.typable:
        return [Outcome('typing-preservation', True, t, skipped=True)]
    target = infer_type_positive(translate(t))
    ok = target.typable and canonical_type(target.type) == canonical_type(source.type)
    return [Outcome('typing-preservation', ok, t)]


# ---------------------------------------------------------------------------
# スイート
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    corpus: Callable[[Dict[str, Any]], List[CorpusItem]]
    check: Callable[[int, str, Term, Dict[str, Any]], List[Outcome]]


SUITES: Dict[str, Suite] = {s.name: s for s in [
    Suite('syntax', 'free variables, renaming, decomposition',
          lambda p: _enumerated('vsc', p), check_syntax),
    Suite('roundtrip', 'parse . print is the identity',
          lambda p: _enumerated('vsc', p), check_roundtrip),
    Suite('usefulness', 'context classifiers agree and partition',
          lambda p: _enumerated('vsc', p), check_usefulness),
    Suite('alt-useful', 'root rules for useful steps agree with the classifier',
          lambda p: _enumerated('vsc', p), check_alt_useful),
    Suite('nondiamond', 'vsc is not diamond',
          lambda p: [_fixed('fixed', NONDIAMOND_WITNESS)], check_nondiamond),
    Suite('local-termination', 'single rules and e+gc terminate',
          lambda p: _enumerated('vsc', p), check_local_termination),
    Suite('normal-forms', 'core normal form characterization',
          lambda p: _enumerated('vsc', p), check_normal_forms),
    Suite('preservation', 'translation of core normal forms is normal',
          lambda p: _enumerated('vsc', p), check_preservation),
    Suite('termination', 'termination equivalences on reduction graphs',
          lambda p: _enumerated('vsc', p), check_termination),
    Suite('diamond', 'explicit positive reduction is diamond',
          lambda p: _enumerated(XPOSITIVE, p) + _random(XPOSITIVE, p), check_diamond),
    Suite('renaming-stability', 'explicit positive steps commute with renamings',
          lambda p: _random(XPOSITIVE, p), check_renaming),
    Suite('opos-simulation', 'eme_plus factors as e_plus then m_plus',
          lambda p: _enumerated(POSITIVE, p) + _random(POSITIVE, p), check_opos_simulation),
    Suite('gc-postponement', 'garbage collection can be postponed',
          lambda p: _random('vsc', p) + _random(XPOSITIVE, p, tag=OXPOS), check_gc_postponement),
    Suite('factorization', 'core steps before non-useful steps',
          lambda p: [_fixed('fixed', TRICKY_FACTORIZATION)] + _random('vsc', p), check_factorization),
    Suite('simulation', 'explicit positive reduction simulates core reduction',
          lambda p: _random('vsc', p), check_simulation),
    Suite('translation', 'translation validity, compositionality, absorption',
          lambda p: _enumerated('vsc', p), check_translation),
    Suite('typing', 'simple types are preserved by the translation',
          lambda p: [_fixed('identity', "\\x. x"), _fixed('selfapp', "w[w <- x x]")] + _random(CLOSED_VSC, p),
          check_typing),
]}


class CheckRunner:
    """スイートを実行して性質ごとの CheckReport を作る"""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        config = config or {}
        check = config.get('check', {})
        engine = config.get('engine', {})
        graph = config.get('graph', {})
        self.config = {
            'size': check.get('size', 6),
            'seed': check.get('seed', 7),
            'count': check.get('count', 200),
            'random_size': check.get('random_size', 20),
            'positive_enum_size': check.get('positive_enum_size', 4),
            'skip_limit': check.get('skip_limit', 0.01),
            'trace_length': check.get('trace_length', 30),
            'core_trace_length': check.get('core_trace_length', 50),
            'fuel': engine.get('fuel', 10000),
            'node_cap': graph.get('node_cap', 10000),
            'depth_cap': graph.get('depth_cap', 200),
            'graph_check_cap': graph.get('check_cap', 500),
        }

    def with_overrides(self, **overrides) -> 'CheckRunner':
        runner = CheckRunner()
        runner.config = {**self.config, **{k: v for k, v in overrides.items() if v is not None}}
        return runner

    def corpus(self, suite_name: str) -> List[CorpusItem]:
        return get_suite(suite_name).corpus(self.config)

    def run_suite(self, suite_name: str, start: int = 0, stop: Optional[int] = None) -> List[CheckReport]:
        """
        スイートをコーパスの [start, stop) の範囲で実行する

        Returns:
            性質ごとの CheckReport (初出順)
        """
        suite = get_suite(suite_name)
        items = suite.corpus(self.config)
        corpus_name = f"{suite_name}[size={self.config['size']},seed={self.config['seed']},count={self.config['count']}]"
        reports: Dict[str, CheckReport] = {}
        stop = len(items) if stop is None else min(stop, len(items))

        for index in range(start, stop):
            tag, term = items[index]
            try:
                outcomes = suite.check(index, tag, term, self.config)
            except PoslamError as e:
                logger.warning("%s: item %d raised %s", suite_name, index, e)
                outcomes = [Outcome(f"{suite_name}-error", False, term)]
            for outcome in outcomes:
                report = reports.setdefault(
                    outcome.property, CheckReport(outcome.property, corpus_name, skip_limit=outcome.skip_limit))
                if outcome.skipped:
                    report.skipped += 1
                    continue
                report.instances += 1
                if not outcome.ok:
                    report.violations += 1
                    if outcome.witness is not None:
                        report.add_witness(_show(outcome.witness))

        logger.info("suite %s: %d items checked", suite_name, stop - start)
        return list(reports.values())


def get_suite(name: str) -> Suite:
    if name not in SUITES:
        raise ValueError(f"未知のスイートです: {name} (choices: {', '.join(SUITES)})")
    return SUITES[name]


def run_slice(suite_name: str, config: Dict[str, Any], start: int, stop: int) -> List[CheckReport]:
    """プロセスプールから呼ぶためのトップレベル関数"""
    runner = CheckRunner()
    runner.config = dict(config)
    return runner.run_suite(suite_name, start, stop)


def merge_reports(batches: Sequence[List[CheckReport]]) -> List[CheckReport]:
    """スライスごとの結果をコーパス順に統合する"""
    merged: Dict[str, CheckReport] = {}
    for batch in batches:
        for report in batch:
            if report.property in merged:
                merged[report.property] = merged[report.property].merge(report)
            else:
                merged[report.property] = report
    return list(merged.values())
