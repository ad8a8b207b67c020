"""
Command Line - reduce / translate / classify / typeof / graph / check / history / preset / bench-omega
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from ..config import load_config, setup_logging
from ..errors import ConfigError, ParseError, TermError
from ..harness.bench import VARIANTS, bench_omega
from ..harness.checks import SUITES
from ..harness.graph import ReductionGraph
from ..harness.report import CheckReport, plot_bench, render_bench_table, render_table
from ..harness.strategies import CALCULI, Reducer, Strategy, Trace, run_strategy
from ..simple_types import infer_type_positive, infer_type_vsc, type_to_str
from ..syntax import classify_term, format_path, is_explicit_positive
from ..translate import translate
from ..vsc import VSC, VSC_CORE, Usefulness, classify_usefulness, enumerate_redexes
from .parser import parse_term
from .printer import print_term

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def _err(message: str):
    print(message, file=sys.stderr)


def _usefulness(trace: Trace, index: int) -> Optional[str]:
    if trace.calculus not in (VSC, VSC_CORE):
        return None
    step = trace.steps[index]
    verdict = classify_usefulness(trace.terms[index], step.redex)
    return None if verdict is Usefulness.UNCLASSIFIED else verdict.value


def format_trace_text(trace: Trace) -> str:
    """行ごとに「番号 規則 項」"""
    lines = [f"{0:>3} {'':<7} {print_term(trace.start)}"]
    for i, step in enumerate(trace.steps, 1):
        lines.append(f"{i:>3} {step.redex.label:<7} {print_term(step.term)}")
    status = 'normal' if trace.normal else ('out of fuel' if trace.out_of_fuel else 'stopped')
    summary = [status, f"{len(trace)} steps"]
    if trace.counters:
        summary.append(' '.join(f"{k}={v}" for k, v in sorted(trace.counters.items())))
    lines.append("-- " + "; ".join(summary))
    return "\n".join(lines)


def format_trace_json(trace: Trace) -> str:
    """一行一オブジェクト。最後の行はラベルごとの数"""
    records: List[Dict[str, Any]] = [
        {'index': 0, 'rule': None, 'anchor': None, 'usefulness': None, 'term': print_term(trace.start)}
    ]
    for i, step in enumerate(trace.steps):
        records.append({
            'index': i + 1,
            'rule': step.redex.label,
            'anchor': format_path(step.redex.anchor),
            'usefulness': _usefulness(trace, i),
            'term': print_term(step.term),
        })
    records.append({
        'counters': trace.counters,
        'steps': len(trace),
        'normal': trace.normal,
        'out_of_fuel': trace.out_of_fuel,
    })
    return "\n".join(json.dumps(r, ensure_ascii=False) for r in records)


# ---------------------------------------------------------------------------
# サブコマンド
# ---------------------------------------------------------------------------

def cmd_reduce(args, config) -> int:
    term = parse_term(args.term)
    vars_are_values = config['engine']['vars_are_values'] and not args.no_var_values
    labels = args.labels.split(',') if args.labels else None
    reducer = Reducer(args.calculus, vars_are_values=vars_are_values, labels=labels)
    fuel = args.fuel if args.fuel is not None else config['engine']['fuel']
    trace = run_strategy(term, reducer, Strategy.parse(args.strategy), fuel)
    trace_format = args.trace or config['output']['trace_format']
    print(format_trace_json(trace) if trace_format == 'json' else format_trace_text(trace))
    return EXIT_OK


def cmd_translate(args, config) -> int:
    print(print_term(translate(parse_term(args.term))))
    return EXIT_OK


def cmd_classify(args, config) -> int:
    term = parse_term(args.term)
    flags = classify_term(term)
    for name, value in vars(flags).items():
        print(f"{name}: {str(value).lower()}")
    for r in enumerate_redexes(term, VSC, config['engine']['vars_are_values']):
        verdict = classify_usefulness(term, r)
        print(f"{r.describe()}  {verdict.value}")
    return EXIT_OK


def cmd_typeof(args, config) -> int:
    term = parse_term(args.term)
    if is_explicit_positive(term):
        result = infer_type_positive(term)
    else:
        logger.info("not a positive term; using the source typing rules")
        result = infer_type_vsc(term)
    if result.typable:
        print(type_to_str(result.type))
    else:
        print(f"untypable: {result.error}")
    return EXIT_OK


def cmd_graph(args, config) -> int:
    term = parse_term(args.term)
    reducer = Reducer(args.calculus, vars_are_values=config['engine']['vars_are_values'])
    cap = args.cap if args.cap is not None else config['graph']['node_cap']
    graph = ReductionGraph(term, reducer, cap, config['graph']['depth_cap'])
    if args.dot:
        print(graph.to_dot(print_term), end='')
        return EXIT_OK
    report = graph.check_diamond()
    print(f"nodes: {len(graph)}")
    print(f"edges: {graph.graph.number_of_edges()}")
    print(f"normal forms: {len(graph.normal_nodes())}")
    print(f"truncated: {str(graph.truncated).lower()}")
    print(f"diamond: {str(report.diamond).lower()} ({report.peaks} peaks, {len(report.violations)} violations)")
    for t, u1, u2 in report.violations[:3]:
        print(f"  peak: {print_term(u1)} <- {print_term(t)} -> {print_term(u2)}")
    return EXIT_OK


def _emit_reports(reports: List[CheckReport], report_format: str):
    if report_format == 'table':
        print(render_table(reports))
    else:
        for report in reports:
            print(report.to_json())


def cmd_check(args, config) -> int:
    from utils.batch_processor import BatchProcessor
    from utils.history import HistoryManager
    from utils.presets import PresetManager

    settings: Dict[str, Any] = {}
    suites = args.suite or []
    if args.preset:
        preset = PresetManager().get_preset(args.preset)
        settings = {k: preset[k] for k in ('size', 'seed', 'count') if k in preset}
        suites = suites or preset['suites']
    if not suites:
        _err("--suite か --preset を指定してください")
        return EXIT_USAGE
    if suites == ['all']:
        suites = list(SUITES)
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        _err(f"未知のスイートです: {', '.join(unknown)} (choices: {', '.join(SUITES)})")
        return EXIT_USAGE

    check = dict(config['check'])
    check.update(settings)
    for key in ('size', 'seed', 'count'):
        if getattr(args, key) is not None:
            check[key] = getattr(args, key)
    processor = BatchProcessor(**{**config, 'check': check})
    workers = args.workers if args.workers is not None else check.get('workers', 1)

    def progress(current, total, suite):
        logger.info("%s: slice %d/%d", suite, current, total)

    all_reports: List[CheckReport] = []
    for suite in suites:
        reports = processor.process_suite(suite, workers=workers, progress_callback=progress)
        all_reports.extend(reports)
        if args.record:
            HistoryManager().add_record({
                'suite': suite,
                'parameters': {k: check[k] for k in ('size', 'seed', 'count')},
                'properties': [r.property for r in reports],
                'instances': sum(r.instances for r in reports),
                'violations': sum(r.violations for r in reports),
            })

    _emit_reports(all_reports, args.format or config['output']['report_format'])
    for result in processor.get_summary().get('results', []):
        if result['status'] == 'error':
            _err(f"slice error: {result['suite']} #{result['slice']}: {result['error_message']}")
    failed = [r for r in all_reports if not r.ok]
    for report in failed:
        if report.violations:
            _err(f"violation: {report.property} ({report.violations}/{report.instances})")
        else:
            _err(f"too many skipped: {report.property} ({report.skipped} skipped, limit {report.skip_limit:.0%})")
    return EXIT_VIOLATION if failed else EXIT_OK


def cmd_history(args, config) -> int:
    from utils.history import HistoryManager

    manager = HistoryManager()
    if args.clear:
        manager.clear_all()
        _err("history cleared")
        return EXIT_OK
    if args.delete is not None:
        manager.delete_record(args.delete)
        _err(f"record {args.delete} deleted")
        return EXIT_OK
    if args.stats:
        print(json.dumps(manager.get_statistics(), ensure_ascii=False))
        return EXIT_OK
    records = manager.search(args.search) if args.search else manager.get_recent(args.limit)
    for record in records[:args.limit]:
        print(json.dumps(record, ensure_ascii=False))
    return EXIT_OK


def cmd_preset(args, config) -> int:
    from utils.presets import PresetManager

    manager = PresetManager()
    if args.action == 'list':
        for name in manager.get_preset_names():
            print(f"{name:<12} {manager.get_preset(name).get('description', '')}")
        return EXIT_OK
    if not args.name:
        _err(f"preset {args.action} にはプリセット名が必要です")
        return EXIT_USAGE

    if args.action == 'show':
        print(json.dumps(manager.get_preset(args.name), ensure_ascii=False, indent=2))
    elif args.action == 'delete':
        manager.delete_preset(args.name)
        _err(f"preset {args.name} deleted")
    else:
        unknown = [s for s in args.suite or [] if s not in SUITES]
        if unknown:
            _err(f"未知のスイートです: {', '.join(unknown)} (choices: {', '.join(SUITES)})")
            return EXIT_USAGE
        settings: Dict[str, Any] = {k: getattr(args, k) for k in ('size', 'seed', 'count')
                                    if getattr(args, k) is not None}
        if args.suite:
            settings['suites'] = list(SUITES) if args.suite == ['all'] else args.suite
        if args.name in manager.get_preset_names():
            manager.update_preset(args.name, settings, args.description)
        else:
            manager.add_preset(args.name, settings, args.description or "")
        _err(f"preset {args.name} saved")
    return EXIT_OK


def cmd_bench(args, config) -> int:
    variants = list(VARIANTS) if args.variant == 'all' else [args.variant]
    if args.table or args.plot:
        rows = [bench_omega(n, v) for v in variants for n in range(1, args.m_steps + 1)]
    else:
        rows = [bench_omega(args.m_steps, v) for v in variants]
    if args.table:
        print(render_bench_table(rows))
    else:
        for row in rows:
            print(json.dumps(row))
    if args.plot:
        plot_bench(rows, args.plot)
        _err(f"plot written to {args.plot}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# 引数
# ---------------------------------------------------------------------------

def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("1 以上の整数を指定してください")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='poslam', description='open VSC / positive lambda-calculus lab')
    parser.add_argument('--config', help='config.yaml のパス')
    parser.add_argument('-v', '--verbose', action='store_true', help='詳細ログ出力')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('reduce', help='戦略に従って簡約する')
    p.add_argument('term')
    p.add_argument('--calculus', choices=CALCULI, default=VSC)
    p.add_argument('--strategy', default='lo', help='lo | random:SEED | priority:LABEL,...')
    p.add_argument('--fuel', type=_positive_int)
    p.add_argument('--no-var-values', action='store_true')
    p.add_argument('--labels', help='使う規則ラベルをカンマ区切りで限定')
    p.add_argument('--trace', choices=['text', 'json'])
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser('translate', help='明示的な正の項に変換する')
    p.add_argument('term')
    p.set_defaults(handler=cmd_translate)

    p = sub.add_parser('classify', help='文法とリデックスの有用性を表示する')
    p.add_argument('term')
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser('typeof', help='主要型を推論する')
    p.add_argument('term')
    p.set_defaults(handler=cmd_typeof)

    p = sub.add_parser('graph', help='簡約グラフを調べる')
    p.add_argument('term')
    p.add_argument('--calculus', choices=CALCULI, default=VSC)
    p.add_argument('--cap', type=_positive_int)
    p.add_argument('--dot', action='store_true')
    p.set_defaults(handler=cmd_graph)

    p = sub.add_parser('check', help='性質検査のスイートを実行する')
    p.add_argument('--suite', action='append', help=f"all | {' | '.join(SUITES)}")
    p.add_argument('--preset')
    p.add_argument('--size', type=_positive_int)
    p.add_argument('--seed', type=int)
    p.add_argument('--count', type=_positive_int)
    p.add_argument('--workers', type=_positive_int)
    p.add_argument('--format', choices=['jsonl', 'table'])
    p.add_argument('--record', action='store_true', help='結果を履歴に保存する')
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser('history', help='検査履歴を表示・削除する')
    p.add_argument('--limit', type=_positive_int, default=10)
    p.add_argument('--search', help='スイート名か性質名で検索')
    p.add_argument('--stats', action='store_true', help='統計を表示')
    p.add_argument('--delete', type=int, metavar='ID')
    p.add_argument('--clear', action='store_true')
    p.set_defaults(handler=cmd_history)

    p = sub.add_parser('preset', help='検査プリセットを管理する')
    p.add_argument('action', choices=['list', 'show', 'save', 'delete'])
    p.add_argument('name', nargs='?')
    p.add_argument('--suite', action='append')
    p.add_argument('--size', type=_positive_int)
    p.add_argument('--seed', type=int)
    p.add_argument('--count', type=_positive_int)
    p.add_argument('--description')
    p.set_defaults(handler=cmd_preset)

    p = sub.add_parser('bench-omega', help='Ω の指数ステップ数を数える')
    p.add_argument('--m-steps', type=_positive_int, default=10)
    p.add_argument('--variant', choices=list(VARIANTS) + ['all'], default='all')
    p.add_argument('--table', action='store_true', help='n = 1..m-steps の表を出力')
    p.add_argument('--plot', help='PNG の出力先')
    p.set_defaults(handler=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    コマンドラインのエントリポイント

    Returns:
        0: 成功、1: 性質違反、2: 使い方・構文・設定のエラー
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    try:
        config = load_config(args.config)
    except ConfigError as e:
        _err(str(e))
        return EXIT_USAGE
    setup_logging(config, args.verbose)

    try:
        return args.handler(args, config)
    except ParseError as e:
        _err(f"parse error: {e}")
        return EXIT_USAGE
    except (TermError, ValueError) as e:
        _err(f"error: {e}")
        return EXIT_USAGE
